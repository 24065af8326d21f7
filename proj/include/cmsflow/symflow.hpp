#pragma once

// The exact solution engine. The freezing ODEs become a triangular linear
// system in (squared) elementary symmetric coordinates, so every coordinate
// of the transformed state is an explicit polynomial in t:
//
//   A:   e_1' = 0,                e_k' = -(N-k+2)(N-k+1)/2 * e_{k-2}
//   B:   s_1' = 2N(N+nu-1),       s_k' = 2(N-k+1)(N-k+nu) * s_{k-1}
//   D:   the B system with nu = 0 (so s_N' = 0), sign(x_N) carried unchanged
//
// where s_k denotes e_k of the squared coordinates. Solving means: transform,
// antidifferentiate in index order, evaluate, and recover ordered particle
// positions by real-root extraction of the associated monic polynomial.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cmsflow/polyroots.hpp"
#include "cmsflow/root_system.hpp"
#include "cmsflow/trajectory.hpp"

namespace cmsflow {

enum class LastSign : int { negative = -1, zero = 0, positive = 1 };

inline LastSign sign_of(double v) {
  if (v > 0.0) return LastSign::positive;
  if (v < 0.0) return LastSign::negative;
  return LastSign::zero;
}

/// Image of a chamber point under the (squared-)elementary-symmetric map.
/// values[k-1] holds e_k (A) or e_k of the squared coordinates (B/D).
struct SymmetricState {
  RootSystemSpec system;
  std::vector<double> values;
  LastSign sign_last = LastSign::zero;  // D only: sign of x_N
};

/// Per-coordinate polynomials in t describing the exact evolution of a
/// SymmetricState; coefficients ascending by degree.
template <class T>
struct BasicTimePolynomialSet {
  RootSystemSpec system;
  std::vector<std::vector<T>> polys;
  LastSign sign_last = LastSign::zero;
};

using TimePolynomialSet = BasicTimePolynomialSet<double>;

/// Transform a chamber point to symmetric coordinates (boundary allowed).
inline SymmetricState to_symmetric(const ChamberPoint& x) {
  const int n = x.n();
  std::vector<double> r = x.coords;
  LastSign sl = LastSign::zero;
  if (x.system.kind != RootKind::A) {
    for (double& v : r) v = v * v;
    if (x.system.kind == RootKind::D) sl = sign_of(x.coords[n - 1]);
  }
  const auto c = poly::from_roots(r);  // monic, ascending
  std::vector<double> values(n);
  for (int k = 1; k <= n; ++k) {
    double v = c[n - k];
    values[k - 1] = (k % 2 == 0) ? v : -v;
  }
  return SymmetricState{x.system, std::move(values), sl};
}

namespace detail {

// Ascending coefficients of the monic polynomial whose roots are the
// particle positions (A) or their squares (B/D).
inline std::vector<double> monic_coeffs(const SymmetricState& s) {
  const int n = s.system.n;
  std::vector<double> c(n + 1);
  c[n] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double v = s.values[k - 1];
    c[n - k] = (k % 2 == 0) ? v : -v;
  }
  return c;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

inline constexpr double kRootImagScale = 1e-8;
inline constexpr double kRootClampScale = 1e-10;

/// Recover the unique chamber point whose symmetric image is s.
/// Throws NonRealRoots when the associated polynomial has a root whose
/// imaginary part exceeds the acceptance tolerance, and NegativeSquare when
/// a squared coordinate (B/D) is negative beyond the clamp tolerance.
inline ChamberPoint from_symmetric(const SymmetricState& s,
                                   double im_scale = kRootImagScale,
                                   double clamp_scale = kRootClampScale) {
  const int n = s.system.n;
  const auto c = detail::monic_coeffs(s);
  const auto rts = poly::roots(c);
  const double tau_im = im_scale * std::pow(1.0 + detail::max_abs(c), 1.0 / n);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(rts[i].imag()) > tau_im)
      throw NonRealRoots("from_symmetric: root with |imag| = " +
                         std::to_string(std::abs(rts[i].imag())) +
                         " exceeds tolerance " + std::to_string(tau_im));
    x[i] = rts[i].real();
  }
  std::sort(x.begin(), x.end(), std::greater<>());
  if (s.system.kind != RootKind::A) {
    const double tau = clamp_scale * (1.0 + detail::max_abs(s.values));
    for (double& u : x) {
      if (u < -tau)
        throw NegativeSquare("from_symmetric: squared coordinate " +
                             std::to_string(u) + " below -" + std::to_string(tau));
      u = u <= 0.0 ? 0.0 : std::sqrt(u);
    }
    if (s.system.kind == RootKind::D && s.sign_last == LastSign::negative)
      x[n - 1] = -x[n - 1];
  }
  return ChamberPoint(s.system, std::move(x));
}

namespace detail {

template <class T>
std::vector<T> antiderivative(const std::vector<T>& p) {
  std::vector<T> out(p.size() + 1, T(0));
  for (std::size_t i = 0; i < p.size(); ++i) out[i + 1] = p[i] / T(static_cast<long long>(i + 1));
  return out;
}

template <class T>
void trim(std::vector<T>& p) {
  while (p.size() > 1 && p.back() == T(0)) p.pop_back();
}

}  // namespace detail

/// Exact polynomial solution of the triangular symmetric-coordinate system,
/// by iterated antidifferentiation in index order. Generic over the
/// coefficient field so that an exact rational run can validate the
/// degree/leading-coefficient structure.
template <class T>
std::vector<std::vector<T>> propagate_coeffs(RootKind kind, int n, T nu,
                                             const std::vector<T>& v0) {
  if (static_cast<int>(v0.size()) != n)
    throw std::invalid_argument("propagate_coeffs: state size mismatch");
  std::vector<std::vector<T>> polys(n);
  if (kind == RootKind::A) {
    polys[0] = {v0[0]};
    const std::vector<T> e0{T(1)};
    for (int k = 2; k <= n; ++k) {
      const std::vector<T>& prev = (k == 2) ? e0 : polys[k - 3];
      long long m = static_cast<long long>(n - k + 2) * (n - k + 1);
      T coef = T(-m) / T(2);
      auto p = detail::antiderivative(prev);
      for (auto& c : p) c = c * coef;
      p[0] = v0[k - 1];
      detail::trim(p);
      polys[k - 1] = std::move(p);
    }
  } else {
    for (int k = 1; k <= n; ++k) {
      if (k == 1) {
        T rate = T(2 * static_cast<long long>(n)) * (T(static_cast<long long>(n) - 1) + nu);
        polys[0] = {v0[0], rate};
        detail::trim(polys[0]);
        continue;
      }
      T coef = T(2 * static_cast<long long>(n - k + 1)) * (T(static_cast<long long>(n - k)) + nu);
      auto p = detail::antiderivative(polys[k - 2]);
      for (auto& c : p) c = c * coef;
      p[0] = v0[k - 1];
      detail::trim(p);
      polys[k - 1] = std::move(p);
    }
  }
  return polys;
}

/// Double-precision propagation of a symmetric state.
inline TimePolynomialSet propagate(const SymmetricState& s0) {
  const auto& sys = s0.system;
  double nu = (sys.kind == RootKind::B) ? sys.nu : 0.0;
  return TimePolynomialSet{sys, propagate_coeffs<double>(sys.kind, sys.n, nu, s0.values),
                           s0.sign_last};
}

/// Horner evaluation of every coordinate polynomial at time t.
inline SymmetricState evaluate_flow(const TimePolynomialSet& p, double t) {
  std::vector<double> values(p.polys.size());
  for (std::size_t k = 0; k < p.polys.size(); ++k)
    values[k] = poly::horner(p.polys[k], t);
  return SymmetricState{p.system, std::move(values), p.sign_last};
}

/// Discriminant of the monic polynomial associated with s (in the squared
/// variables for B/D); zero iff the polynomial has a repeated root.
inline double discriminant(const SymmetricState& s) {
  return poly::discriminant_monic(detail::monic_coeffs(s));
}

namespace detail {

inline std::vector<double> shifted(const std::vector<double>& x, double r) {
  std::vector<double> y = x;
  for (double& v : y) v += r;
  return y;
}

}  // namespace detail

/// Exact trajectory through symmetric coordinates. Starts anywhere in the
/// closed chamber; every sample at t > 0 is checked to be strictly interior
/// (the content of the existence theorems, asserted rather than assumed).
/// B with nu = 0 requires x_N(0) > 0; x_N(0) = 0 has no solution.
inline Trajectory solve_trajectory(const ChamberPoint& x0, const std::vector<double>& times) {
  const auto& sys = x0.system;
  const int n = sys.n;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0)
      throw std::invalid_argument("solve_trajectory: times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("solve_trajectory: times must be strictly increasing");
  }
  if (sys.kind == RootKind::B && sys.nu == 0.0 && x0.coords[n - 1] == 0.0)
    throw DegenerateNuZero(
        "B with nu = 0 and x_N(0) = 0 admits no solution that enters the open chamber");

  // Centering (A only): the flow commutes with adding r*(1,..,1), so shift
  // the mean to zero before propagating and shift back on output.
  double mean = 0.0;
  ChamberPoint start = x0;
  if (sys.kind == RootKind::A) {
    for (double v : x0.coords) mean += v;
    mean /= n;
    start = ChamberPoint(sys, detail::shifted(x0.coords, -mean));
  }

  const auto pset = propagate(to_symmetric(start));
  Trajectory traj;
  traj.system = sys;
  traj.method = SolveMethod::symmetric;
  for (double t : times) {
    if (t == 0.0) {
      traj.push(t, x0.coords);
      continue;
    }
    ChamberPoint p = from_symmetric(evaluate_flow(pset, t));
    std::vector<double> coords =
        (sys.kind == RootKind::A) ? detail::shifted(p.coords, mean) : p.coords;
    if (!in_chamber(coords, sys, /*strict=*/true))
      throw InteriorityViolation("solve_trajectory: sample at t = " + std::to_string(t) +
                                 " is not strictly interior");
    traj.push(t, std::move(coords));
  }
  return traj;
}

/// Backward extension of an interior solution: the unique t0 < 0 at which
/// the flow, run backwards, first meets the chamber boundary.
struct BackwardExtension {
  double t0 = 0.0;
  std::vector<double> boundary_point;
};

namespace detail {

// Signed boundary classifier for the backward flow. Positive: all roots
// real (and admissible for B), value = smallest wall clearance. Negative:
// a root left the real axis or (B) crossed zero.
struct BackwardClassifier {
  const BasicTimePolynomialSet<double>& pset;

  double operator()(double t) const {
    SymmetricState s = evaluate_flow(pset, t);
    auto c = monic_coeffs(s);
    auto rts = poly::roots(c);
    double scale = 0.0;
    for (const auto& z : rts) scale = std::max(scale, std::abs(z));
    const double tau_im = 1e-9 * (1.0 + scale);
    double max_im = 0.0;
    for (const auto& z : rts) max_im = std::max(max_im, std::abs(z.imag()));
    if (max_im > tau_im) return -max_im;
    std::vector<double> re(rts.size());
    for (std::size_t i = 0; i < rts.size(); ++i) re[i] = rts[i].real();
    std::sort(re.begin(), re.end(), std::greater<>());
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < re.size(); ++i) g = std::min(g, re[i] - re[i + 1]);
    if (pset.system.kind == RootKind::B) {
      const double tau = 1e-10 * (1.0 + max_abs(s.values));
      if (re.back() < -tau) return re.back();
      g = std::min(g, std::max(re.back(), 0.0));
    }
    return g;
  }
};

}  // namespace detail

/// Find the backward boundary-hitting time of the flow through x0 (strictly
/// interior). Returns t0 < 0 and the boundary point x(t0). The bracket
/// [-|x0_centered|^2 / kappa, 0] with kappa the family's norm-growth rate is
/// guaranteed by the growth identity; bisection on a root-reality classifier
/// narrows it, then a short secant polish sharpens the hitting time.
inline BackwardExtension backward_extension_time(const ChamberPoint& x0) {
  const auto& sys = x0.system;
  const int n = sys.n;
  if (!in_chamber(x0.coords, sys, /*strict=*/true))
    throw std::invalid_argument("backward_extension_time: start must be strictly interior");

  // D with x_N = 0 stays on x_N = 0 forever: the hitting problem is the
  // embedded B_{N-1}, nu = 2 one.
  if (sys.kind == RootKind::D && x0.coords[n - 1] == 0.0) {
    std::vector<double> head(x0.coords.begin(), x0.coords.end() - 1);
    auto sub = backward_extension_time(ChamberPoint(RootSystemSpec::B(n - 1, 2.0), head));
    sub.boundary_point.push_back(0.0);
    return sub;
  }

  double mean = 0.0;
  ChamberPoint start = x0;
  if (sys.kind == RootKind::A) {
    for (double v : x0.coords) mean += v;
    mean /= n;
    start = ChamberPoint(sys, detail::shifted(x0.coords, -mean));
  }
  const auto pset = propagate(to_symmetric(start));
  const detail::BackwardClassifier f{pset};

  double lo = -start.norm() * start.norm() / growth_rate(sys);
  double hi = 0.0;
  double flo = f(lo);
  for (int tries = 0; flo > 0.0 && tries < 4; ++tries) {
    lo *= 2.0;
    flo = f(lo);
  }
  if (flo > 0.0)
    throw BracketFailure("backward_extension_time: no sign change on the growth bracket");
  for (int it = 0; it < 80 && (hi - lo) > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }

  // Polish on the smooth event function: the discriminant for a collision,
  // the last symmetric coordinate for a wall hit (B only).
  double t0 = hi;
  bool wall_event = false;
  if (sys.kind == RootKind::B) {
    SymmetricState slo = evaluate_flow(pset, lo);
    auto rl = poly::roots(detail::monic_coeffs(slo));
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& z : rl) mn = std::min(mn, z.real());
    wall_event = mn < -1e-10 * (1.0 + detail::max_abs(slo.values));
  }
  auto event = [&](double t) -> double {
    return wall_event ? poly::horner(pset.polys[n - 1], t)
                      : discriminant(evaluate_flow(pset, t));
  };
  {
    double a = lo, b = hi;
    double fa = event(a), fb = event(b);
    for (int it = 0; it < 8 && fa != fb; ++it) {
      double c = b - fb * (b - a) / (fb - fa);
      if (!(c >= lo - (hi - lo) && c <= hi + (hi - lo)) || !std::isfinite(c)) break;
      a = b;
      fa = fb;
      b = c;
      fb = event(b);
      if (b >= lo && b <= hi) t0 = b;
      if (fb == 0.0) break;
    }
  }

  // Boundary point: real parts of the roots at t0, clamped and sorted.
  SymmetricState s = evaluate_flow(pset, t0);
  auto rts = poly::roots(detail::monic_coeffs(s));
  std::vector<double> x(rts.size());
  for (std::size_t i = 0; i < rts.size(); ++i) x[i] = rts[i].real();
  std::sort(x.begin(), x.end(), std::greater<>());
  if (sys.kind != RootKind::A)
    for (double& u : x) u = u <= 0.0 ? 0.0 : std::sqrt(u);
  if (sys.kind == RootKind::D && s.sign_last == LastSign::negative) x.back() = -x.back();
  if (sys.kind == RootKind::A)
    for (double& v : x) v += mean;
  return BackwardExtension{t0, std::move(x)};
}

}  // namespace cmsflow
