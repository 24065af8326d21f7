#pragma once

// Root-system metadata, Weyl-chamber geometry and the singular drift fields
// of the freezing-limit Calogero-Moser-Sutherland ODEs.
//
// Three families are supported:
//   A : chamber x1 >= ... >= xN,          drift_i = sum_{j!=i} 1/(xi-xj)
//   B : chamber x1 >= ... >= xN >= 0,     drift_i = A-terms + 1/(xi+xj) + nu/xi
//   D : chamber x1 >= ... >= x_{N-1} >= |xN|,  B-terms without the nu/xi wall
//
// In every case drift(x) == (1/2) * grad(log w)(x) for the family's weight w.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmsflow {

struct SingularInput : std::domain_error {
  using std::domain_error::domain_error;
};
struct NonRealRoots : std::domain_error {
  using std::domain_error::domain_error;
};
struct NegativeSquare : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateNuZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SubstepExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InteriorityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RootKind { A, B, D };

inline const char* to_string(RootKind k) {
  switch (k) {
    case RootKind::A: return "A";
    case RootKind::B: return "B";
    default: return "D";
  }
}

/// Which family, how many particles, and (for B) the wall coupling nu.
/// nu is stored on the spec, never on points; A and D carry nu == 0.
struct RootSystemSpec {
  RootKind kind = RootKind::A;
  int n = 2;
  double nu = 0.0;

  static RootSystemSpec A(int n) {
    if (n < 2) throw std::invalid_argument("root system A requires n >= 2");
    return {RootKind::A, n, 0.0};
  }
  static RootSystemSpec B(int n, double nu) {
    if (n < 1) throw std::invalid_argument("root system B requires n >= 1");
    if (nu < 0.0 || !std::isfinite(nu))
      throw std::invalid_argument("root system B requires nu >= 0");
    return {RootKind::B, n, nu};
  }
  static RootSystemSpec D(int n) {
    if (n < 2) throw std::invalid_argument("root system D requires n >= 2");
    return {RootKind::D, n, 0.0};
  }

  bool operator==(const RootSystemSpec&) const = default;
};

/// Euclidean norm of a coordinate vector.
inline double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline void check_dimension(const std::vector<double>& x, const RootSystemSpec& sys) {
  if (static_cast<int>(x.size()) != sys.n)
    throw std::invalid_argument("coordinate vector has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(sys.n));
}

/// True iff x satisfies the chamber inequalities of its root system
/// (strict inequalities when `strict` is set).
inline bool in_chamber(const std::vector<double>& x, const RootSystemSpec& sys,
                       bool strict = false) {
  check_dimension(x, sys);
  const int n = sys.n;
  auto ok = [strict](double lhs, double rhs) {
    return strict ? lhs > rhs : lhs >= rhs;
  };
  switch (sys.kind) {
    case RootKind::A:
      for (int i = 0; i + 1 < n; ++i)
        if (!ok(x[i], x[i + 1])) return false;
      return true;
    case RootKind::B:
      for (int i = 0; i + 1 < n; ++i)
        if (!ok(x[i], x[i + 1])) return false;
      return ok(x[n - 1], 0.0);
    case RootKind::D:
      for (int i = 0; i + 2 < n; ++i)
        if (!ok(x[i], x[i + 1])) return false;
      return ok(x[n - 2], std::abs(x[n - 1]));
  }
  return false;
}

/// A point constrained to the closed Weyl chamber of its root system.
struct ChamberPoint {
  RootSystemSpec system;
  std::vector<double> coords;

  ChamberPoint(RootSystemSpec sys, std::vector<double> c)
      : system(sys), coords(std::move(c)) {
    if (!in_chamber(coords, system))
      throw std::invalid_argument("point is not in the closed Weyl chamber");
  }

  int n() const { return system.n; }
  double norm() const { return norm2(coords); }
};

/// Exact Euclidean distance from a chamber point to the chamber boundary,
/// taken as the minimum over the reflecting hyperplanes that bound the
/// chamber. Zero iff the point lies on the boundary.
inline double boundary_distance(const ChamberPoint& p) {
  const auto& x = p.coords;
  const int n = p.n();
  const double inv_sqrt2 = 0.7071067811865475244;
  double d = std::numeric_limits<double>::infinity();
  switch (p.system.kind) {
    case RootKind::A:
      for (int i = 0; i + 1 < n; ++i)
        d = std::min(d, (x[i] - x[i + 1]) * inv_sqrt2);
      break;
    case RootKind::B:
      for (int i = 0; i + 1 < n; ++i)
        d = std::min(d, (x[i] - x[i + 1]) * inv_sqrt2);
      d = std::min(d, x[n - 1]);
      break;
    case RootKind::D:
      for (int i = 0; i + 1 < n; ++i)
        d = std::min(d, (x[i] - x[i + 1]) * inv_sqrt2);
      d = std::min(d, (x[n - 2] + x[n - 1]) * inv_sqrt2);
      break;
  }
  return d;
}

namespace detail {

// Smallest denominator magnitude appearing in the drift of `sys` at x.
inline double min_denominator(const std::vector<double>& x, const RootSystemSpec& sys) {
  const int n = static_cast<int>(x.size());
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m = std::min(m, std::abs(x[i] - x[j]));
      if (sys.kind != RootKind::A) m = std::min(m, std::abs(x[i] + x[j]));
    }
  if (sys.kind == RootKind::B && sys.nu > 0.0)
    for (int i = 0; i < n; ++i) m = std::min(m, std::abs(x[i]));
  return m;
}

inline void require_nonsingular(const std::vector<double>& x, const RootSystemSpec& sys,
                                double floor_scale) {
  const double floor = floor_scale * (1.0 + norm2(x));
  if (min_denominator(x, sys) < floor)
    throw SingularInput("input too close to the chamber boundary: denominator below " +
                        std::to_string(floor));
}

}  // namespace detail

// Configurable floor below which drift/log_weight treat a denominator as a
// genuine boundary contact rather than roundoff.
inline constexpr double kSingularFloorScale = 1e-13;

/// Right-hand side of the freezing ODE, equal to (1/2) grad(log w)(x).
/// Requires x strictly inside the chamber; throws SingularInput when any
/// denominator falls below floor_scale * (1 + |x|).
inline std::vector<double> drift(const std::vector<double>& x, const RootSystemSpec& sys,
                                 double floor_scale = kSingularFloorScale) {
  check_dimension(x, sys);
  detail::require_nonsingular(x, sys, floor_scale);
  const int n = sys.n;
  std::vector<double> h(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      s += 1.0 / (x[i] - x[j]);
      if (sys.kind != RootKind::A) s += 1.0 / (x[i] + x[j]);
    }
    if (sys.kind == RootKind::B && sys.nu != 0.0) s += sys.nu / x[i];
    h[i] = s;
  }
  return h;
}

/// log w(x) for the beta-normalized weight function of the root system:
///   A: prod_{i<j} (xi-xj)^2
///   B: prod_{i<j} (xi^2-xj^2)^2 * prod_i xi^(2 nu)
///   D: prod_{i<j} (xi^2-xj^2)^2
inline double log_weight(const std::vector<double>& x, const RootSystemSpec& sys,
                         double floor_scale = kSingularFloorScale) {
  check_dimension(x, sys);
  detail::require_nonsingular(x, sys, floor_scale);
  const int n = sys.n;
  double lw = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (sys.kind == RootKind::A) {
        lw += 2.0 * std::log(std::abs(x[i] - x[j]));
      } else {
        lw += 2.0 * std::log(std::abs(x[i] * x[i] - x[j] * x[j]));
      }
    }
  if (sys.kind == RootKind::B && sys.nu != 0.0)
    for (int i = 0; i < n; ++i) lw += 2.0 * sys.nu * std::log(std::abs(x[i]));
  return lw;
}

/// Norm-growth rate of the family: d/dt |x(t)|^2 along any solution.
///   A: N(N-1),  B: 2N(N+nu-1),  D: 2N(N-1)
inline double growth_rate(const RootSystemSpec& sys) {
  const double n = sys.n;
  switch (sys.kind) {
    case RootKind::A: return n * (n - 1.0);
    case RootKind::B: return 2.0 * n * (n + sys.nu - 1.0);
    default: return 2.0 * n * (n - 1.0);
  }
}

}  // namespace cmsflow
