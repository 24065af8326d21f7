#pragma once

// Sampled solution of a freezing ODE: a time grid, the chamber points at
// those times, and the provenance (which engine, which tolerances).

#include <stdexcept>
#include <vector>

#include "cmsflow/root_system.hpp"

namespace cmsflow {

enum class SolveMethod { symmetric, runge_kutta, hybrid, closed_form };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::symmetric: return "symmetric";
    case SolveMethod::runge_kutta: return "runge_kutta";
    case SolveMethod::hybrid: return "hybrid";
    default: return "closed_form";
  }
}

/// Knobs that influenced a solve, recorded for reproducibility. Fields not
/// used by a given engine keep their defaults.
struct ToleranceRecord {
  double rel_tol = 1e-10;            // RK error control, relative
  double abs_tol = 1e-12;            // RK error control, absolute
  double max_step = 1e3;             // RK step ceiling
  double boundary_guard = 0.5;       // fraction of boundary distance per step
  double bootstrap_eps = 1e-8;       // hand-off time for boundary starts
  double singular_floor_scale = kSingularFloorScale;
  double root_im_scale = 1e-8;       // imaginary-part acceptance in root recovery
  double root_clamp_scale = 1e-10;   // clamp for squared roots (B/D)
  double dt = 1e-4;                  // SDE base step

  bool operator==(const ToleranceRecord&) const = default;
};

struct Trajectory {
  RootSystemSpec system;
  std::vector<double> times;
  std::vector<std::vector<double>> points;
  SolveMethod method = SolveMethod::symmetric;
  ToleranceRecord tolerances;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  void push(double t, std::vector<double> x) {
    if (!times.empty() && t <= times.back())
      throw std::invalid_argument("trajectory times must be strictly increasing");
    times.push_back(t);
    points.push_back(std::move(x));
  }
};

}  // namespace cmsflow
