#pragma once

// Shared helpers for the test suites: deterministic random chamber points
// and finite-difference gradients.

#include <random>
#include <vector>

#include "cmsflow/cmsflow.hpp"

namespace testsupport {

using namespace cmsflow;

/// Random strictly interior chamber point with O(1) gaps between walls.
inline ChamberPoint random_interior(const RootSystemSpec& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gap(0.25, 1.25);
  const int n = sys.n;
  std::vector<double> x(n);
  switch (sys.kind) {
    case RootKind::A: {
      double cur = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      for (int i = n - 1; i >= 0; --i) {
        x[i] = cur;
        cur += gap(rng);
      }
      break;
    }
    case RootKind::B: {
      double cur = gap(rng);
      for (int i = n - 1; i >= 0; --i) {
        x[i] = cur;
        cur += gap(rng);
      }
      break;
    }
    case RootKind::D: {
      x[n - 1] = std::uniform_real_distribution<double>(-0.6, 0.6)(rng);
      double cur = std::abs(x[n - 1]) + gap(rng);
      for (int i = n - 2; i >= 0; --i) {
        x[i] = cur;
        cur += gap(rng);
      }
      break;
    }
  }
  return ChamberPoint(sys, x);
}

/// Random boundary point: an interior draw with one wall constraint made
/// active (a coordinate tie, or the zero wall for B).
inline ChamberPoint random_boundary(const RootSystemSpec& sys, std::mt19937_64& rng) {
  auto x = random_interior(sys, rng).coords;
  const int n = sys.n;
  std::uniform_int_distribution<int> which(0, n - 1);
  int w = which(rng);
  if (sys.kind == RootKind::B && w == n - 1) {
    x[n - 1] = 0.0;
  } else if (sys.kind == RootKind::D && w == n - 1) {
    x[n - 1] = x[n - 2];  // the x_{N-1} = |x_N| wall
  } else {
    int i = std::min(w, n - 2);
    x[i] = x[i + 1];
  }
  return ChamberPoint(sys, x);
}

/// Central finite-difference gradient of (1/2) log w.
inline std::vector<double> half_log_weight_gradient(const std::vector<double>& x,
                                                    const RootSystemSpec& sys) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double h = 1e-6 * (1.0 + scale);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = 0.5 * (log_weight(xp, sys) - log_weight(xm, sys)) / (2.0 * h);
  }
  return g;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testsupport
