#include "lri/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lri {

double discrete_energy(const Field& u, double eps, const Potential& pot) {
  if (u.values.size() != static_cast<size_t>(u.grid.total()))
    throw std::invalid_argument("discrete_energy: field does not match its grid");
  const Field lap = apply_laplacian(u);
  double potential_sum = 0.0;
  double quad = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i) {
    potential_sum += pot.F(u.values[i]);
    quad += u.values[i] * lap.values[i];
  }
  return potential_sum - 0.5 * eps * eps * quad;
}

MbpReport mbp_check(const Field& u, double beta, double tol) {
  if (tol < 0.0) throw std::invalid_argument("mbp_check: tol must be >= 0");
  MbpReport r;
  r.beta = beta;
  r.tol = tol;
  for (size_t i = 0; i < u.values.size(); ++i) {
    const double a = std::abs(u.values[i]);
    if (a > r.max_abs) {
      r.max_abs = a;
      r.argmax = static_cast<long>(i);
    }
  }
  r.pass = r.max_abs <= beta + tol;
  return r;
}

ErrorNorms error_norms(const Field& u, const Field& v) {
  if (u.values.size() != v.values.size() || u.grid.dim != v.grid.dim)
    throw std::invalid_argument("error_norms: shape mismatch");
  double sq = 0.0;
  double mx = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i) {
    const double d = u.values[i] - v.values[i];
    sq += d * d;
    mx = std::max(mx, std::abs(d));
  }
  double cell = 1.0;
  for (int a = 0; a < u.grid.dim; ++a) cell *= u.grid.h[a];
  return {std::sqrt(cell * sq), mx};
}

std::vector<double> convergence_rates(std::span<const double> errors,
                                      std::span<const double> dts) {
  if (errors.size() != dts.size() || errors.size() < 2)
    throw std::invalid_argument("convergence_rates: need matching lengths >= 2");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> rates(errors.size(), nan);
  for (size_t k = 1; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !(errors[k - 1] > 0.0) || !(dts[k] > 0.0) ||
        !(dts[k - 1] > 0.0) || dts[k] == dts[k - 1] ||
        !std::isfinite(errors[k]) || !std::isfinite(errors[k - 1]))
      continue;  // undefined-rate marker stays NaN
    rates[k] = std::log(errors[k - 1] / errors[k]) / std::log(dts[k - 1] / dts[k]);
  }
  return rates;
}

double increment_rate_bound(SchemeKind kind, const StabilityBounds& b,
                            double a_inf_norm) {
  double c = b.beta * a_inf_norm + b.F0;
  if (kind == SchemeKind::Lri2) c += b.delta0 * b.omega0 * b.F0 * b.F1;
  return c;
}

double energy_drift_bound(SchemeKind kind, const StabilityBounds& b,
                          double a_inf_norm, long n_unknowns, double T) {
  const double c = increment_rate_bound(kind, b, a_inf_norm);
  return c * static_cast<double>(n_unknowns) * T * (b.F0 + b.beta * a_inf_norm);
}

double theoretical_error_bound(SchemeKind kind, const StabilityBounds& b,
                               double a_inf_norm, double t, double dt) {
  if (t < 0.0) throw std::invalid_argument("theoretical_error_bound: t must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("theoretical_error_bound: dt must be > 0");
  if (scheme_order(kind) == 1) {
    if (dt > b.omega0)
      throw std::invalid_argument(
          "theoretical_error_bound: dt exceeds omega0, the estimate's hypothesis fails");
    const double c = 0.5 * ((b.F0 / b.F1 + b.beta) * a_inf_norm + b.F0);
    return c * std::expm1(b.F1 * t) * dt;
  }
  if (dt > b.delta0 * b.omega0)
    throw std::invalid_argument(
        "theoretical_error_bound: dt exceeds delta0*omega0, the estimate's hypothesis fails");
  const double c1 =
      0.5 * b.F1_tilde * ((3.0 * b.F0 + b.beta * b.F1) * a_inf_norm + b.F0 * b.F1);
  const double c2 = 0.5 * b.F0 * b.F0 * b.F2_tilde;
  const double c3 = b.F0 * (b.F1 + b.beta * b.F2) * a_inf_norm;
  const double c4 = 0.5 * (b.F0 + 3.0 * b.beta * b.F1 + b.beta * b.beta * b.F2) *
                    a_inf_norm * a_inf_norm;
  const double c = (c1 + c2 + c3) / 3.0 + c4 / 6.0;
  return c / b.F4 * std::expm1(b.F4 * t) * dt * dt;
}

EnergyReport check_energy_series(std::span<const double> series, double rel_tol) {
  EnergyReport r;
  r.energy.assign(series.begin(), series.end());
  if (series.empty()) return r;
  r.initial = series[0];
  r.max_observed = series[0];
  for (size_t m = 1; m < series.size(); ++m) {
    r.max_observed = std::max(r.max_observed, series[m]);
    const double slack = rel_tol * std::max(1.0, std::abs(series[m - 1]));
    const double rise = series[m] - series[m - 1];
    if (rise > slack) r.violations.emplace_back(static_cast<long>(m), rise);
  }
  return r;
}

}  // namespace lri
