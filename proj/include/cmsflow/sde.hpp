#pragma once

// Finite-beta Monte Carlo of the rescaled multivariate Bessel SDE
//
//   dX = (1/sqrt(beta)) dB + drift(X) dt
//
// via Euler-Maruyama with adaptive sub-stepping near the chamber boundary,
// and the freezing experiment that measures how path ensembles collapse onto
// the beta = infinity ODE solution. RNG streams are derived from
// (seed, path index), so results do not depend on scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cmsflow/root_system.hpp"
#include "cmsflow/symflow.hpp"
#include "cmsflow/trajectory.hpp"

namespace cmsflow {

struct SdeConfig {
  double beta = std::numeric_limits<double>::infinity();
  int n_paths = 1;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  enum class Scheme { euler_maruyama } scheme = Scheme::euler_maruyama;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sde: dt must be positive");
    if (n_paths < 1) throw std::invalid_argument("sde: n_paths must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("sde: beta must be positive");
  }
};

namespace rng {

struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ seeded through SplitMix64.
struct Xoshiro256pp {
  std::uint64_t s[4];
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& v : s) v = sm.next();
  }
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

// Box-Muller gaussian stream; one engine per path.
struct Gaussian {
  Xoshiro256pp eng;
  double spare = 0.0;
  bool has_spare = false;

  Gaussian(std::uint64_t seed, std::uint64_t stream)
      : eng(seed + 0x9E3779B97F4A7C15ULL * (stream + 1)) {}

  double uniform_open() {  // (0,1]
    return (static_cast<double>(eng.next() >> 11) + 1.0) * 0x1.0p-53;
  }
  double operator()() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u1 = uniform_open();
    double u2 = uniform_open();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    spare = r * std::sin(a);
    has_spare = true;
    return r * std::cos(a);
  }
};

}  // namespace rng

namespace detail {

// Allocation-free drift kernel for the hot loop; caller guarantees x is
// strictly interior.
inline void drift_into(const std::vector<double>& x, const RootSystemSpec& sys,
                       std::vector<double>& out) {
  const int n = sys.n;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      s += 1.0 / (x[i] - x[j]);
      if (sys.kind != RootKind::A) s += 1.0 / (x[i] + x[j]);
    }
    if (sys.kind == RootKind::B && sys.nu != 0.0) s += sys.nu / x[i];
    out[i] = s;
  }
}

// Last-resort reflection: map the proposal back into the chamber by the
// Weyl group action (sorting, plus mirror flips for B/D).
inline bool reflect_into_chamber(std::vector<double>& x, const RootSystemSpec& sys) {
  const int n = sys.n;
  switch (sys.kind) {
    case RootKind::A:
      std::sort(x.begin(), x.end(), std::greater<>());
      break;
    case RootKind::B:
      for (double& v : x) v = std::abs(v);
      std::sort(x.begin(), x.end(), std::greater<>());
      break;
    case RootKind::D: {
      int negs = 0;
      for (double v : x)
        if (v < 0.0) ++negs;
      for (double& v : x) v = std::abs(v);
      std::sort(x.begin(), x.end(), std::greater<>());
      if (negs % 2 == 1) x[n - 1] = -x[n - 1];
      break;
    }
  }
  return in_chamber(x, sys, /*strict=*/true);
}

struct PathCounters {
  long long steps = 0;
  long long reflections = 0;
};

// Core Euler-Maruyama stepper. Invokes on_sample(k, x) at times[k].
template <class OnSample>
void run_path(const ChamberPoint& x0, const std::vector<double>& times,
              const SdeConfig& cfg, std::uint64_t path_index, OnSample&& on_sample,
              PathCounters& counters) {
  const auto& sys = x0.system;
  const int n = sys.n;
  const double sigma = std::isinf(cfg.beta) ? 0.0 : 1.0 / std::sqrt(cfg.beta);
  rng::Gaussian gauss(cfg.seed, path_index);

  std::vector<double> x = x0.coords, f(n), prop(n);
  double t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double target = times[k];
    while (t < target) {
      double h = std::min(cfg.dt, target - t);
      bool snap = h >= target - t;
      drift_into(x, sys, f);
      int halvings = 0;
      for (;;) {
        double sh = sigma * std::sqrt(h);
        for (int i = 0; i < n; ++i) prop[i] = x[i] + h * f[i] + sh * gauss();
        if (in_chamber(prop, sys, /*strict=*/true)) break;
        if (++halvings > 40) {
          ++counters.reflections;
          if (!reflect_into_chamber(prop, sys))
            throw SubstepExhausted("sde: proposal stuck on the chamber boundary");
          break;
        }
        h *= 0.5;
        snap = false;
      }
      x = prop;
      t = snap ? target : t + h;
      ++counters.steps;
    }
    on_sample(k, x);
  }
}

}  // namespace detail

/// One Euler-Maruyama path sampled at the requested times. beta = infinity
/// runs the same code path with zero noise, i.e. fixed-step deterministic
/// Euler on the drift. Deterministic for a fixed (seed, path_index).
inline Trajectory simulate_path(const ChamberPoint& x0, const std::vector<double>& times,
                                const SdeConfig& cfg, std::uint64_t path_index = 0) {
  cfg.validate();
  if (!in_chamber(x0.coords, x0.system, /*strict=*/true))
    throw std::invalid_argument("simulate_path: start must be strictly interior");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw std::invalid_argument("simulate_path: times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("simulate_path: times must be strictly increasing");
  }
  Trajectory traj;
  traj.system = x0.system;
  traj.method = SolveMethod::runge_kutta;
  traj.tolerances.dt = cfg.dt;
  detail::PathCounters counters;
  std::vector<std::vector<double>> samples(times.size());
  detail::run_path(x0, times, cfg, path_index,
                   [&](std::size_t k, const std::vector<double>& x) { samples[k] = x; },
                   counters);
  for (std::size_t k = 0; k < times.size(); ++k) traj.push(times[k], std::move(samples[k]));
  return traj;
}

struct FreezingPoint {
  double beta = 0.0;
  double mean_dev = 0.0;      // mean over paths of sup_t |X_t - x_ODE(t)|_inf
  double std_err = 0.0;
  double reflect_rate = 0.0;  // reflections per step
  long long paths_used = 0;   // paths not discarded by SubstepExhausted
};

namespace detail {

template <class PerPath>
void parallel_paths(int n_paths, unsigned threads, PerPath&& body) {
  unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  t = std::min<unsigned>(t, static_cast<unsigned>(n_paths));
  if (t <= 1) {
    for (int p = 0; p < n_paths; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      for (int p = static_cast<int>(w); p < n_paths; p += static_cast<int>(t)) body(p);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// For each beta, the Monte Carlo freezing deviation of the SDE ensemble from
/// the exact ODE solution: mean and standard error over cfg.n_paths paths of
/// sup over a checkpoint grid of the sup-norm distance. The result is ordered
/// by beta ascending (infinity last). Paths that exhaust sub-stepping are
/// discarded from the statistics.
inline std::vector<FreezingPoint> freezing_deviation(const ChamberPoint& x0, double t_end,
                                                     std::vector<double> betas,
                                                     const SdeConfig& cfg,
                                                     int n_checkpoints = 50,
                                                     unsigned threads = 0) {
  cfg.validate();
  if (betas.empty()) throw std::invalid_argument("freezing_deviation: betas must be nonempty");
  if (!(t_end > 0.0)) throw std::invalid_argument("freezing_deviation: t_end must be positive");
  for (double b : betas)
    if (!(b > 0.0)) throw std::invalid_argument("freezing_deviation: betas must be positive");
  std::sort(betas.begin(), betas.end());

  std::vector<double> checkpoints(n_checkpoints);
  for (int k = 1; k <= n_checkpoints; ++k)
    checkpoints[k - 1] = t_end * static_cast<double>(k) / n_checkpoints;
  const Trajectory ode = solve_trajectory(x0, checkpoints);

  std::vector<FreezingPoint> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    SdeConfig pcfg = cfg;
    pcfg.beta = beta;
    const int m = cfg.n_paths;
    std::vector<double> devs(m, std::numeric_limits<double>::quiet_NaN());
    std::vector<detail::PathCounters> counters(m);
    detail::parallel_paths(m, threads, [&](int p) {
      double sup = 0.0;
      try {
        detail::run_path(x0, checkpoints, pcfg, static_cast<std::uint64_t>(p),
                         [&](std::size_t k, const std::vector<double>& x) {
                           for (std::size_t i = 0; i < x.size(); ++i)
                             sup = std::max(sup, std::abs(x[i] - ode.points[k][i]));
                         },
                         counters[p]);
        devs[p] = sup;
      } catch (const SubstepExhausted&) {
        // discarded from statistics; counters still report its steps
      }
    });
    FreezingPoint fp;
    fp.beta = beta;
    double sum = 0.0;
    long long used = 0, steps = 0, refl = 0;
    for (int p = 0; p < m; ++p) {
      steps += counters[p].steps;
      refl += counters[p].reflections;
      if (!std::isnan(devs[p])) {
        sum += devs[p];
        ++used;
      }
    }
    fp.paths_used = used;
    fp.mean_dev = used ? sum / used : std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (int p = 0; p < m; ++p)
      if (!std::isnan(devs[p])) ss += (devs[p] - fp.mean_dev) * (devs[p] - fp.mean_dev);
    fp.std_err = used > 1 ? std::sqrt(ss / (used - 1.0) / used) : 0.0;
    fp.reflect_rate = steps ? static_cast<double>(refl) / static_cast<double>(steps) : 0.0;
    out.push_back(fp);
  }
  return out;
}

struct MeanSquareStats {
  double mean = 0.0;
  double std_err = 0.0;
  double predicted = 0.0;  // |x0|^2 + (kappa + N/beta) * t_end
  long long paths_used = 0;
};

/// Monte Carlo estimate of E|X(t_end)|^2 against the Ito prediction.
inline MeanSquareStats mean_square_at(const ChamberPoint& x0, double t_end,
                                      const SdeConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  const int m = cfg.n_paths;
  std::vector<double> vals(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<detail::PathCounters> counters(m);
  const std::vector<double> times{t_end};
  detail::parallel_paths(m, threads, [&](int p) {
    try {
      detail::run_path(x0, times, cfg, static_cast<std::uint64_t>(p),
                       [&](std::size_t, const std::vector<double>& x) {
                         double s = 0.0;
                         for (double v : x) s += v * v;
                         vals[p] = s;
                       },
                       counters[p]);
    } catch (const SubstepExhausted&) {
    }
  });
  MeanSquareStats st;
  double sum = 0.0;
  long long used = 0;
  for (double v : vals)
    if (!std::isnan(v)) {
      sum += v;
      ++used;
    }
  st.paths_used = used;
  st.mean = used ? sum / used : std::numeric_limits<double>::quiet_NaN();
  double ss = 0.0;
  for (double v : vals)
    if (!std::isnan(v)) ss += (v - st.mean) * (v - st.mean);
  st.std_err = used > 1 ? std::sqrt(ss / (used - 1.0) / used) : 0.0;
  const double nb = std::isinf(cfg.beta) ? 0.0 : x0.n() / cfg.beta;
  st.predicted = x0.norm() * x0.norm() + (growth_rate(x0.system) + nb) * t_end;
  return st;
}

}  // namespace cmsflow
