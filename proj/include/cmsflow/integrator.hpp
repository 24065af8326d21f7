#pragma once

// Independent numerical engine: adaptive embedded Runge-Kutta (Dormand-Prince
// 5(4)) on the raw singular drift. Serves as a cross-validation oracle for
// the symmetric-coordinate engine and for stability experiments. The flow is
// repelling from the chamber boundary, so the boundary guard that caps a step
// to a fraction of the boundary distance is a safety net, not a projection.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cmsflow/orthopoly.hpp"
#include "cmsflow/root_system.hpp"
#include "cmsflow/symflow.hpp"
#include "cmsflow/trajectory.hpp"

namespace cmsflow {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1e3;
  double boundary_guard = 0.5;  // in (0,1): fraction of boundary_distance per step
  double bootstrap_eps = 1e-8;  // symflow hand-off time for boundary starts

  void validate() const {
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && max_step > 0.0 && bootstrap_eps > 0.0))
      throw std::invalid_argument("integrator config fields must be positive");
    if (!(boundary_guard > 0.0 && boundary_guard < 1.0))
      throw std::invalid_argument("boundary_guard must lie in (0,1)");
  }

  ToleranceRecord record() const {
    ToleranceRecord r;
    r.rel_tol = rel_tol;
    r.abs_tol = abs_tol;
    r.max_step = max_step;
    r.boundary_guard = boundary_guard;
    r.bootstrap_eps = bootstrap_eps;
    return r;
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b (5th) minus bhat (4th): the embedded error estimate
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline void axpy(std::vector<double>& y, const std::vector<double>& x0, double h,
                 const std::vector<double>* k[], const double* w, int m) {
  const std::size_t n = x0.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += w[j] * (*k[j])[i];
    y[i] = x0[i] + h * acc;
  }
}

}  // namespace detail

/// Adaptive RK5(4) solution of dx/dt = drift(x) sampled at the requested
/// times, starting from a strictly interior point. Throws StepUnderflow when
/// the controller demands a step below 1e-14.
inline Trajectory integrate(const ChamberPoint& x0, const std::vector<double>& times,
                            const IntegratorConfig& cfg = {}) {
  cfg.validate();
  const auto& sys = x0.system;
  if (!in_chamber(x0.coords, sys, /*strict=*/true))
    throw std::invalid_argument("integrate: start must be strictly interior");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("integrate: times must be strictly increasing");

  Trajectory traj;
  traj.system = sys;
  traj.method = SolveMethod::runge_kutta;
  traj.tolerances = cfg.record();
  if (times.empty()) return traj;
  if (times.front() < 0.0) throw std::invalid_argument("integrate: times must be >= 0");

  using D5 = detail::Dopri5;
  const int n = sys.n;
  std::vector<double> x = x0.coords;
  double t = 0.0;
  std::vector<double> k1 = drift(x, sys), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> xs(n);
  double h = 0.0;  // chosen lazily per target

  auto guard_cap = [&](const std::vector<double>& y, const std::vector<double>& f) {
    double d = boundary_distance(ChamberPoint(sys, y));
    double speed = norm2(f);
    return speed > 0.0 ? cfg.boundary_guard * d / speed : cfg.max_step;
  };

  for (double target : times) {
    if (target == 0.0) {
      traj.push(0.0, x);
      continue;
    }
    while (t < target) {
      if (h <= 0.0) h = std::min(cfg.max_step, guard_cap(x, k1));
      h = std::min({h, cfg.max_step, guard_cap(x, k1)});
      bool accepted = false;
      while (!accepted) {
        bool last = h >= target - t;
        if (last) h = target - t;
        if (h < 1e-14) throw StepUnderflow("integrate: step size underflow");
        const std::vector<double>* ks[6];
        // stages
        {
          const double w2[] = {D5::a21};
          ks[0] = &k1;
          detail::axpy(xs, x, h, ks, w2, 1);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k2 = drift(xs, sys);
          const double w3[] = {D5::a31, D5::a32};
          ks[1] = &k2;
          detail::axpy(xs, x, h, ks, w3, 2);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k3 = drift(xs, sys);
          const double w4[] = {D5::a41, D5::a42, D5::a43};
          ks[2] = &k3;
          detail::axpy(xs, x, h, ks, w4, 3);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k4 = drift(xs, sys);
          const double w5[] = {D5::a51, D5::a52, D5::a53, D5::a54};
          ks[3] = &k4;
          detail::axpy(xs, x, h, ks, w5, 4);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k5 = drift(xs, sys);
          const double w6[] = {D5::a61, D5::a62, D5::a63, D5::a64, D5::a65};
          ks[4] = &k5;
          detail::axpy(xs, x, h, ks, w6, 5);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k6 = drift(xs, sys);
          const double w7[] = {D5::b1, 0.0, D5::b3, D5::b4, D5::b5, D5::b6};
          ks[5] = &k6;
          detail::axpy(xs, x, h, ks, w7, 6);
          if (!in_chamber(xs, sys, true)) {
            h *= 0.5;
            continue;
          }
          k7 = drift(xs, sys);
        }
        // mixed rel/abs RMS error norm of the embedded difference
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
          double e = h * (D5::e1 * k1[i] + D5::e3 * k3[i] + D5::e4 * k4[i] +
                          D5::e5 * k5[i] + D5::e6 * k6[i] + D5::e7 * k7[i]);
          double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(xs[i]));
          err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / n);
        if (err <= 1.0) {
          accepted = true;
          t = last ? target : t + h;
          x = xs;
          k1 = k7;  // FSAL
          double fac = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
          h *= std::clamp(fac, 0.2, 5.0);
        } else {
          h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
        }
      }
    }
    traj.push(target, x);
  }
  return traj;
}

/// Solve from anywhere in the closed chamber: interior starts integrate
/// directly; boundary starts take x(bootstrap_eps) from the exact symmetric
/// engine and integrate from there, realizing the boundary-start solutions of
/// the existence theorems numerically.
inline Trajectory solve_hybrid(const ChamberPoint& x0, const std::vector<double>& times,
                               const IntegratorConfig& cfg = {}) {
  cfg.validate();
  const auto& sys = x0.system;
  if (sys.kind == RootKind::B && sys.nu == 0.0 && x0.coords[sys.n - 1] == 0.0)
    throw DegenerateNuZero(
        "B with nu = 0 and x_N(0) = 0 admits no solution that enters the open chamber");
  if (in_chamber(x0.coords, sys, /*strict=*/true)) {
    Trajectory traj = integrate(x0, times, cfg);
    traj.method = SolveMethod::hybrid;
    return traj;
  }

  const double eps = cfg.bootstrap_eps;
  Trajectory traj;
  traj.system = sys;
  traj.method = SolveMethod::hybrid;
  traj.tolerances = cfg.record();
  if (times.empty()) return traj;

  std::vector<double> early, late;
  for (double t : times) (t <= eps ? early : late).push_back(t);
  Trajectory sym = solve_trajectory(x0, early);
  for (std::size_t i = 0; i < sym.size(); ++i) traj.push(sym.times[i], sym.points[i]);

  if (!late.empty()) {
    ChamberPoint handoff(sys, solve_trajectory(x0, {eps}).points[0]);
    std::vector<double> shifted_times;
    shifted_times.reserve(late.size());
    for (double t : late) shifted_times.push_back(t - eps);
    Trajectory rk = integrate(handoff, shifted_times, cfg);
    for (std::size_t i = 0; i < rk.size(); ++i) traj.push(late[i], rk.points[i]);
  }
  return traj;
}

/// Deviation of the normalized state from the stationary profile at each
/// sample: |x(t)/|x(t)| - profile|. Tends to zero along every solution.
inline std::vector<std::pair<double, double>> profile_convergence(const Trajectory& traj) {
  if (traj.empty())
    throw std::invalid_argument("profile_convergence: empty trajectory");
  const auto prof = stationary_profile(traj.system);
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& x = traj.points[i];
    double nx = norm2(x);
    if (nx == 0.0)
      throw std::invalid_argument("profile_convergence: zero vector in trajectory");
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double d = x[j] / nx - prof[j];
      s += d * d;
    }
    out.emplace_back(traj.times[i], std::sqrt(s));
  }
  return out;
}

}  // namespace cmsflow
