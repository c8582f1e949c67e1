#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lri/diagnostics.hpp"
#include "lri/grid.hpp"
#include "lri/schemes.hpp"

namespace lri {

/// u(x, y, t) = (1 - tanh((x - s t)/(2 sqrt(2) eps))) / 2 with wave speed
/// s = 3 eps / sqrt(2), sampled at the grid nodes (x is the first axis).
Field traveling_wave_field(const GridSpec& grid, double eps, double t);

/// i.i.d. uniform values in [lo, hi] from mt19937_64: each draw maps the
/// top 53 bits to [0,1). Same seed, same field, bitwise.
Field random_field(const GridSpec& grid, double lo, double hi, uint64_t seed);

/// Traveling-wave convergence study over Omega = (-1/2, 1/2)^2 with
/// homogeneous Neumann walls; T = 1/(4s). dt values are given as divisors
/// of T so steps*dt lands on T exactly.
struct WaveConfig {
  double eps = 0.02;
  int h_denom = 256;  // grid spacing 1/h_denom, so 257 nodes per axis
  int dim = 2;
  std::vector<int> dt_divisors = {32, 64, 128, 256, 512, 1024};
  std::vector<SchemeKind> schemes = {SchemeKind::Etd1, SchemeKind::Lri1a,
                                     SchemeKind::Lri1b, SchemeKind::Etdrk2,
                                     SchemeKind::Lri2};
  TransformPath path = TransformPath::Auto;
  int jobs = 1;  // parallel (scheme, dt) cells; output independent of jobs

  double wave_speed() const;
  double end_time() const;  // 1/(4s)
  GridSpec grid() const;
};

ConvergenceTable run_convergence(const WaveConfig& config);

struct CoarsenConfig {
  std::string potential = "double-well";  // or "flory-huggins"
  double theta = 0.8;
  double theta_c = 1.6;
  double eps = 0.01;
  int h_denom = 128;  // periodic grid, 128 nodes per axis
  int dim = 2;
  SchemeKind scheme = SchemeKind::Lri1a;
  double dt = 0.5;
  double T = 50.0;
  uint64_t seed = 2024;
  double init_lo = -1.0;
  double init_hi = 1.0;
  std::vector<double> snapshot_times;
  double mbp_tol = 1e-9;
  TransformPath path = TransformPath::Auto;

  GridSpec grid() const;
  long steps() const;  // round(T/dt)
  Potential make_potential() const;
};

struct Snapshot {
  double requested_time = 0.0;
  double realized_time = 0.0;  // nearest-step capture, no interpolation
  long step = 0;
  Field field;
};

struct RunReport {
  std::vector<double> sup_series;     // per recorded state (steps+1 entries)
  std::vector<double> energy_series;  // same length as sup_series
  std::vector<Snapshot> snapshots;
  Field final;
  long steps_completed = 0;
  double dt = 0.0;
  double beta = 0.0;
  double mbp_tol = 0.0;
  std::optional<long> divergence_step;
  std::optional<long> mbp_violation_step;  // first step with sup > beta + tol

  bool anomalous() const {
    return divergence_step.has_value() || mbp_violation_step.has_value();
  }
};

/// Seeded coarsening run with per-step sup-norm and energy recording and
/// nearest-step snapshot capture. A Flory-Huggins domain breach stops the
/// run and is reported as a divergence (an MBP-violation signal).
RunReport run_coarsening(const CoarsenConfig& config);

}  // namespace lri
