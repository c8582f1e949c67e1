#include "lri/experiments.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

namespace lri {

Field traveling_wave_field(const GridSpec& grid, double eps, double t) {
  if (!(eps > 0.0)) throw std::invalid_argument("traveling_wave_field: eps must be > 0");
  if (t < 0.0) throw std::invalid_argument("traveling_wave_field: t must be >= 0");
  const double s = 3.0 * eps / std::sqrt(2.0);
  const double w = 1.0 / (2.0 * std::sqrt(2.0) * eps);
  Field out = Field::zeros(grid);
  const long n0 = grid.n[0];
  const long rest = grid.total() / n0;
  for (long i = 0; i < n0; ++i) {
    const double x = grid.coord(0, static_cast<int>(i));
    const double v = 0.5 * (1.0 - std::tanh((x - s * t) * w));
    for (long r = 0; r < rest; ++r) out.values[i * rest + r] = v;
  }
  return out;
}

Field random_field(const GridSpec& grid, double lo, double hi, uint64_t seed) {
  if (!(lo < hi)) throw std::invalid_argument("random_field: need lo < hi");
  std::mt19937_64 eng(seed);
  Field out = Field::zeros(grid);
  const double span = hi - lo;
  for (double& v : out.values) {
    // top 53 bits to [0,1); keeps the stream independent of any library's
    // distribution implementation
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    v = lo + span * u;
  }
  return out;
}

double WaveConfig::wave_speed() const { return 3.0 * eps / std::sqrt(2.0); }

double WaveConfig::end_time() const { return 1.0 / (4.0 * wave_speed()); }

GridSpec WaveConfig::grid() const {
  const int n = h_denom + 1;
  return GridSpec::make(dim, {n, n, n}, {1.0, 1.0, 1.0}, Bc::Neumann);
}

namespace {

struct CellResult {
  ErrorNorms norms;
  bool diverged = false;
};

}  // namespace

ConvergenceTable run_convergence(const WaveConfig& config) {
  if (config.dt_divisors.empty() || config.schemes.empty())
    throw std::invalid_argument("run_convergence: empty sweep");
  for (size_t i = 1; i < config.dt_divisors.size(); ++i)
    if (config.dt_divisors[i] <= config.dt_divisors[i - 1])
      throw std::invalid_argument("run_convergence: dt divisors must increase");

  const GridSpec grid = config.grid();
  const auto axes = make_axes(grid);
  const double T = config.end_time();
  const Field u0 = traveling_wave_field(grid, config.eps, 0.0);
  const Field ref = traveling_wave_field(grid, config.eps, T);

  auto run_cell = [&](SchemeKind scheme, int divisor) -> CellResult {
    const double dt = T / divisor;
    Stepper stepper(grid, axes, config.eps, dt, scheme, double_well(),
                    config.path);
    IntegrationResult r = integrate(stepper, u0, divisor);
    if (r.divergence_step) return {{}, true};
    return {error_norms(r.final, ref), false};
  };

  const size_t n_cells = config.schemes.size() * config.dt_divisors.size();
  std::vector<CellResult> cells(n_cells);
  if (config.jobs > 1) {
    std::vector<std::future<CellResult>> futures(n_cells);
    size_t launched = 0, collected = 0;
    const size_t window = static_cast<size_t>(config.jobs);
    while (collected < n_cells) {
      while (launched < n_cells && launched - collected < window) {
        const SchemeKind scheme = config.schemes[launched / config.dt_divisors.size()];
        const int divisor = config.dt_divisors[launched % config.dt_divisors.size()];
        futures[launched] = std::async(std::launch::async, run_cell, scheme, divisor);
        ++launched;
      }
      cells[collected] = futures[collected].get();
      ++collected;
    }
  } else {
    for (size_t c = 0; c < n_cells; ++c)
      cells[c] = run_cell(config.schemes[c / config.dt_divisors.size()],
                          config.dt_divisors[c % config.dt_divisors.size()]);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ConvergenceTable table;
  for (size_t si = 0; si < config.schemes.size(); ++si) {
    std::vector<double> dts, l2s, linfs;
    for (size_t di = 0; di < config.dt_divisors.size(); ++di) {
      const CellResult& cell = cells[si * config.dt_divisors.size() + di];
      dts.push_back(T / config.dt_divisors[di]);
      l2s.push_back(cell.diverged ? nan : cell.norms.l2);
      linfs.push_back(cell.diverged ? nan : cell.norms.linf);
    }
    std::vector<double> l2r(dts.size(), nan), linfr(dts.size(), nan);
    if (dts.size() >= 2) {
      l2r = convergence_rates(l2s, dts);
      linfr = convergence_rates(linfs, dts);
    }
    for (size_t di = 0; di < dts.size(); ++di) {
      const CellResult& cell = cells[si * config.dt_divisors.size() + di];
      table.rows.push_back({config.schemes[si], dts[di], l2s[di], l2r[di],
                            linfs[di], linfr[di], cell.diverged});
    }
  }
  return table;
}

GridSpec CoarsenConfig::grid() const {
  return GridSpec::make(dim, {h_denom, h_denom, h_denom}, {1.0, 1.0, 1.0},
                        Bc::Periodic);
}

long CoarsenConfig::steps() const { return std::lround(T / dt); }

Potential CoarsenConfig::make_potential() const {
  if (potential == "double-well") return double_well();
  if (potential == "flory-huggins") return flory_huggins(theta, theta_c);
  throw std::invalid_argument("unknown potential: " + potential);
}

RunReport run_coarsening(const CoarsenConfig& config) {
  if (!(config.dt > 0.0) || !(config.T > 0.0))
    throw std::invalid_argument("run_coarsening: dt and T must be positive");
  const Potential pot = config.make_potential();
  if (config.init_lo < -pot.beta || config.init_hi > pot.beta ||
      !(config.init_lo < config.init_hi))
    throw std::invalid_argument(
        "run_coarsening: init range must lie inside [-beta, beta]");
  const long steps = config.steps();
  if (steps < 1) throw std::invalid_argument("run_coarsening: T/dt rounds to zero steps");
  for (double t : config.snapshot_times)
    if (t < 0.0 || t > config.T + 1e-12 * config.T)
      throw std::invalid_argument("run_coarsening: snapshot time beyond T");

  const GridSpec grid = config.grid();
  const auto axes = make_axes(grid);
  Stepper stepper(grid, axes, config.eps, config.dt, config.scheme, pot,
                  config.path);
  const Field u0 = random_field(grid, config.init_lo, config.init_hi, config.seed);

  std::vector<long> snap_steps;
  for (double t : config.snapshot_times) {
    long idx = std::lround(t / config.dt);
    snap_steps.push_back(std::min(idx, steps));
  }

  RunReport report;
  report.dt = config.dt;
  report.beta = pot.beta;
  report.mbp_tol = config.mbp_tol;
  report.sup_series.push_back(sup_norm(u0));
  report.energy_series.push_back(discrete_energy(u0, config.eps, pot));

  auto capture = [&](long step, const Field& u) {
    for (size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == step)
        report.snapshots.push_back({config.snapshot_times[i],
                                    step * config.dt, step, u});
  };
  capture(0, u0);

  auto monitor = [&](long step, const Field& u) {
    const double sup = sup_norm(u);
    report.sup_series.push_back(sup);
    double energy = std::numeric_limits<double>::quiet_NaN();
    try {
      energy = discrete_energy(u, config.eps, pot);
    } catch (const PotentialDomainError&) {
      // a breached iterate has no finite energy; the next step records the
      // divergence
    }
    report.energy_series.push_back(energy);
    if (!report.mbp_violation_step && sup > pot.beta + config.mbp_tol)
      report.mbp_violation_step = step;
    capture(step, u);
  };

  IntegrationResult r = integrate(stepper, u0, steps, monitor);
  report.final = std::move(r.final);
  report.steps_completed = r.steps_completed;
  report.divergence_step = r.divergence_step;
  return report;
}

}  // namespace lri
