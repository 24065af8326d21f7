#pragma once

// Zeros of Hermite and Laguerre polynomials, their electrostatic (Stieltjes)
// equilibrium residuals, and the self-similar special / stationary solutions
// they generate for the freezing ODEs.
//
// Zeros come from the symmetric tridiagonal Jacobi matrix of the family's
// three-term recurrence (QL with implicit shifts), then up to three Newton
// polish steps through the recurrence itself. The Laguerre alpha = -1 case
// is handled through the factorization L_N^(-1)(x) = -(x/N) L_{N-1}^(1)(x),
// never through the Jacobi matrix (which needs alpha > -1).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cmsflow/root_system.hpp"

namespace cmsflow {

enum class PolyFamily { hermite, laguerre };

struct ZeroSet {
  PolyFamily kind = PolyFamily::hermite;
  int n = 0;
  double alpha = 0.0;              // laguerre only
  std::vector<double> zeros;       // strictly decreasing
};

namespace detail {

// QL with implicit shifts for a symmetric tridiagonal matrix; eigenvalues
// only. d = diagonal, e = subdiagonal (size n-1). Returns eigenvalues in d.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  const double eps = std::numeric_limits<double>::epsilon();
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw std::runtime_error("tridiag_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// Monic three-term recurrence coefficients: pi_{k+1} = (x-a_k) pi_k - b_k pi_{k-1}.
struct Recurrence {
  std::vector<double> a, b;  // b[0] unused by the Jacobi matrix
};

inline Recurrence hermite_recurrence(int n) {
  Recurrence rc;
  rc.a.assign(n, 0.0);
  rc.b.assign(n, 0.0);
  for (int k = 1; k < n; ++k) rc.b[k] = 0.5 * k;
  return rc;
}

inline Recurrence laguerre_recurrence(int n, double alpha) {
  Recurrence rc;
  rc.a.resize(n);
  rc.b.assign(n, 0.0);
  for (int k = 0; k < n; ++k) rc.a[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) rc.b[k] = k * (k + alpha);
  return rc;
}

// Value and derivative of the degree-n orthonormal polynomial at x,
// evaluated through the recurrence (scale-free ratio for Newton).
inline void orthonormal_eval(const Recurrence& rc, int n, double x, double& p,
                             double& dp) {
  double pm1 = 0.0, p0 = 1.0, dpm1 = 0.0, dp0 = 0.0;
  for (int k = 0; k < n; ++k) {
    // scale of the final step is irrelevant: Newton only uses the ratio p/dp
    double sb1 = (k + 1 < n) ? std::sqrt(rc.b[k + 1]) : 1.0;
    double sb0 = (k >= 1) ? std::sqrt(rc.b[k]) : 0.0;
    double pn = ((x - rc.a[k]) * p0 - sb0 * pm1) / sb1;
    double dpn = (p0 + (x - rc.a[k]) * dp0 - sb0 * dpm1) / sb1;
    pm1 = p0;
    p0 = pn;
    dpm1 = dp0;
    dp0 = dpn;
  }
  p = p0;
  dp = dp0;
}

inline std::vector<double> jacobi_zeros(const Recurrence& rc) {
  const int n = static_cast<int>(rc.a.size());
  std::vector<double> d = rc.a, e(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(rc.b[k]);
  tridiag_ql(d, e);
  std::sort(d.begin(), d.end(), std::greater<>());
  // Newton polish, kept only while it reduces |p|.
  for (double& z : d) {
    for (int step = 0; step < 3; ++step) {
      double p, dp;
      orthonormal_eval(rc, n, z, p, dp);
      if (dp == 0.0) break;
      double zn = z - p / dp;
      double pn, dpn;
      orthonormal_eval(rc, n, zn, pn, dpn);
      if (std::abs(pn) < std::abs(p))
        z = zn;
      else
        break;
    }
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace detail

/// The n real zeros of the physicists' Hermite polynomial H_n, descending.
inline ZeroSet hermite_zeros(int n) {
  if (n < 1) throw std::invalid_argument("hermite_zeros: degree must be >= 1");
  ZeroSet zs{PolyFamily::hermite, n, 0.0, detail::jacobi_zeros(detail::hermite_recurrence(n))};
  // enforce the exact sign symmetry of the family
  auto& z = zs.zeros;
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    double v = 0.5 * (z[i] - z[j]);
    z[i] = v;
    z[j] = -v;
  }
  if (n % 2 == 1) z[n / 2] = 0.0;
  return zs;
}

/// The n zeros of the Laguerre polynomial L_n^(alpha), descending.
/// alpha > -1 uses the Jacobi matrix; alpha = -1 exactly uses the
/// factorization into L_{n-1}^(1) plus a zero at the origin.
inline ZeroSet laguerre_zeros(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("laguerre_zeros: degree must be >= 1");
  if (alpha == -1.0) {
    ZeroSet zs{PolyFamily::laguerre, n, alpha, {}};
    if (n > 1) zs.zeros = detail::jacobi_zeros(detail::laguerre_recurrence(n - 1, 1.0));
    zs.zeros.push_back(0.0);
    return zs;
  }
  if (alpha < -1.0 || !std::isfinite(alpha))
    throw std::invalid_argument("laguerre_zeros: alpha must be > -1 or exactly -1");
  return ZeroSet{PolyFamily::laguerre, n, alpha,
                 detail::jacobi_zeros(detail::laguerre_recurrence(n, alpha))};
}

/// Per-coordinate defect of the electrostatic equilibrium equations that make
/// the self-similar profiles exact solutions:
///   A (Hermite):          r_i = sum_{j != i} 1/(z_i - z_j) - z_i
///   B/D (Laguerre, nu):   r_i = 2 z_i sum_{j != i} 1/(z_i - z_j) + nu - z_i
/// For D the B formula applies with nu = 0 (the zero at the origin of
/// L_N^(-1) contributes a vanishing residual).
inline std::vector<double> stieltjes_residual(const ZeroSet& zeros,
                                              const RootSystemSpec& sys) {
  const auto& z = zeros.zeros;
  const int n = static_cast<int>(z.size());
  if (n != sys.n)
    throw std::invalid_argument("stieltjes_residual: zero set size mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (!(z[i] > z[i + 1]))
      throw std::invalid_argument("stieltjes_residual: zeros must be strictly decreasing");
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) s += 1.0 / (z[i] - z[j]);
    if (sys.kind == RootKind::A)
      r[i] = s - z[i];
    else
      r[i] = 2.0 * z[i] * s + sys.nu - z[i];
  }
  return r;
}

namespace detail {

// Direction vector of the self-similar solution: Hermite zeros for A,
// y_i = sqrt(2 z_i) over Laguerre zeros (alpha = nu-1 for B, alpha = -1 for D).
inline std::vector<double> special_direction(const RootSystemSpec& sys) {
  switch (sys.kind) {
    case RootKind::A:
      return hermite_zeros(sys.n).zeros;
    case RootKind::B: {
      if (!(sys.nu > 0.0))
        throw std::invalid_argument("special solution for B requires nu > 0");
      auto z = laguerre_zeros(sys.n, sys.nu - 1.0).zeros;
      for (double& v : z) v = std::sqrt(2.0 * v);
      return z;
    }
    default: {
      auto z = laguerre_zeros(sys.n, -1.0).zeros;
      for (double& v : z) v = std::sqrt(2.0 * v);
      z.back() = 0.0;
      return z;
    }
  }
}

}  // namespace detail

/// The closed-form self-similar solution at time t:
///   A:   sqrt(2t + c^2) * z
///   B/D: sqrt(t + c^2) * y
/// c >= 0 selects the start x(0); c = 0 starts at the chamber origin.
inline ChamberPoint special_solution(const RootSystemSpec& sys, double c, double t) {
  if (c < 0.0) throw std::invalid_argument("special_solution: c must be >= 0");
  const double scale2 = (sys.kind == RootKind::A) ? 2.0 * t + c * c : t + c * c;
  if (c == 0.0 ? t < 0.0 : scale2 <= 0.0)
    throw std::invalid_argument("special_solution: time outside the domain of the solution");
  auto v = detail::special_direction(sys);
  const double s = std::sqrt(scale2);
  for (double& vi : v) vi *= s;
  return ChamberPoint(sys, std::move(v));
}

/// Unit vector that x(t)/|x(t)| converges to, computed by normalizing the
/// special-solution direction.
inline std::vector<double> stationary_profile(const RootSystemSpec& sys) {
  auto v = detail::special_direction(sys);
  const double nv = norm2(v);
  for (double& vi : v) vi /= nv;
  return v;
}

}  // namespace cmsflow
