#pragma once

#include <span>
#include <vector>

#include "lri/grid.hpp"
#include "lri/potential.hpp"
#include "lri/schemes.hpp"

namespace lri {

/// E_h(U) = sum_i F(U_i) - (eps^2/2) U^T (D_h U), with D_h U taken on the
/// stencil path.
double discrete_energy(const Field& u, double eps, const Potential& pot);

struct MbpReport {
  bool pass = false;
  double max_abs = 0.0;
  long argmax = -1;
  double beta = 0.0;
  double tol = 0.0;
};

/// pass iff ||u||_inf <= beta + tol.
MbpReport mbp_check(const Field& u, double beta, double tol);

struct ErrorNorms {
  double l2 = 0.0;    // sqrt(h^d * sum of squared differences)
  double linf = 0.0;  // max absolute difference
};

ErrorNorms error_norms(const Field& u, const Field& v);

/// rate_k = ln(e_{k-1}/e_k) / ln(dt_{k-1}/dt_k); NaN where undefined
/// (first entry, non-positive errors, non-finite inputs).
std::vector<double> convergence_rates(std::span<const double> errors,
                                      std::span<const double> dts);

/// A-priori error bound at time t for step size dt:
///   order 1:  C (e^{F1 t} - 1) dt,    C = [(F0/F1 + beta)||A|| + F0] / 2
///   order 2:  C (e^{F4 t} - 1) dt^2,  C = c / F4 with
///             c = (c1+c2+c3)/3 + c4/6,
///             c1 = F1~ [(3 F0 + beta F1)||A|| + F0 F1] / 2,
///             c2 = F0^2 F2~ / 2,
///             c3 = F0 (F1 + beta F2) ||A||,
///             c4 = (F0 + 3 beta F1 + beta^2 F2) ||A||^2 / 2.
/// dt beyond the estimate's hypothesis (omega0 for order 1, delta0*omega0
/// for order 2) is rejected.
double theoretical_error_bound(SchemeKind kind, const StabilityBounds& bounds,
                               double a_inf_norm, double t, double dt);

/// A-priori energy drift allowance over a whole run:
/// c * N * T * (F0 + beta ||A||) with c the per-step increment constant.
double energy_drift_bound(SchemeKind kind, const StabilityBounds& bounds,
                          double a_inf_norm, long n_unknowns, double T);

/// Per-step increment ceiling ||U_{m+1}-U_m||_inf / dt.
double increment_rate_bound(SchemeKind kind, const StabilityBounds& bounds,
                            double a_inf_norm);

struct ConvergenceRow {
  SchemeKind scheme = SchemeKind::Lri1a;
  double dt = 0.0;
  double l2_error = 0.0;
  double l2_rate = 0.0;  // NaN on the first row of a scheme block
  double linf_error = 0.0;
  double linf_rate = 0.0;
  bool diverged = false;  // errors are NaN
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // grouped by scheme, dt decreasing
};

struct EnergyReport {
  std::vector<double> energy;  // one value per recorded state
  double initial = 0.0;
  double max_observed = 0.0;
  // (step index, increase beyond the relative slack) pairs
  std::vector<std::pair<long, double>> violations;
};

/// Scans an energy series for monotone decay within a relative per-step
/// slack of rel_tol * max(1, |E_m|).
EnergyReport check_energy_series(std::span<const double> series, double rel_tol);

}  // namespace lri
