#include "lri/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lri {

namespace {

constexpr double kFhGuard = 1e-12;  // open-interval guard for (-1, 1)

double fh_check(double u) {
  if (!(std::abs(u) < 1.0 - kFhGuard))
    throw PotentialDomainError(
        "flory-huggins evaluated at |u| >= 1 - 1e-12 (bound violation or bad input)",
        u);
  return u;
}

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

// Dense scan (endpoints included exactly) followed by ternary refinement in
// the bracket around the best sample. The refined value never loses to the
// sampled one, so closed-form extrema at endpoints are hit exactly.
template <typename Fn>
Extremum minimize_on(Fn&& fn, double lo, double hi, int samples = 100001) {
  Extremum best{lo, fn(lo)};
  const double span = hi - lo;
  for (int i = 0; i <= samples - 1; ++i) {
    const double x = lo + span * (static_cast<double>(i) / (samples - 1));
    const double v = fn(x);
    if (!std::isfinite(v))
      throw std::runtime_error("compute_bounds: non-finite evaluation inside the domain");
    if (v < best.value) best = {x, v};
  }
  const double step = span / (samples - 1);
  double a = std::max(lo, best.arg - step);
  double b = std::min(hi, best.arg + step);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b));
       ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (fn(m1) < fn(m2))
      b = m2;
    else
      a = m1;
  }
  const double xm = 0.5 * (a + b);
  const double vm = fn(xm);
  return vm < best.value ? Extremum{xm, vm} : best;
}

}  // namespace

Potential double_well() {
  Potential p;
  p.name = "double-well";
  p.beta = 1.0;
  p.valid_lo = -std::numeric_limits<double>::infinity();
  p.valid_hi = std::numeric_limits<double>::infinity();
  p.f = [](double u) { return u - u * u * u; };
  p.df = [](double u) { return 1.0 - 3.0 * u * u; };
  p.d2f = [](double u) { return -6.0 * u; };
  p.F = [](double u) {
    const double w = u * u - 1.0;
    return 0.25 * w * w;
  };
  return p;
}

Potential flory_huggins(double theta, double theta_c) {
  if (!(theta > 0.0) || !(theta < theta_c))
    throw std::invalid_argument("flory_huggins requires 0 < theta < theta_c");
  Potential p;
  p.name = "flory-huggins";
  p.valid_lo = -1.0;
  p.valid_hi = 1.0;
  p.f = [theta, theta_c](double u) {
    fh_check(u);
    return 0.5 * theta * (std::log1p(-u) - std::log1p(u)) + theta_c * u;
  };
  p.df = [theta, theta_c](double u) {
    fh_check(u);
    return theta_c - theta / ((1.0 - u) * (1.0 + u));
  };
  p.d2f = [theta](double u) {
    fh_check(u);
    const double w = (1.0 - u) * (1.0 + u);
    return -2.0 * theta * u / (w * w);
  };
  p.F = [theta, theta_c](double u) {
    fh_check(u);
    return 0.5 * theta * ((1.0 + u) * std::log1p(u) + (1.0 - u) * std::log1p(-u)) -
           0.5 * theta_c * u * u;
  };

  // beta: positive root of f in (0,1), bisected to full precision.
  double lo = 1e-6, hi = 1.0 - 1e-11;
  if (!(p.f(lo) > 0.0) || !(p.f(hi) < 0.0))
    throw std::invalid_argument("flory_huggins: no sign change for beta in (0,1)");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p.f(mid) > 0.0 ? lo : hi) = mid;
  }
  p.beta = hi;  // bracket end with f <= 0, so (A1) holds with equality-or-less
  return p;
}

StabilityBounds compute_bounds(const Potential& pot) {
  const double beta = pot.beta;
  if (!(beta > 0.0)) throw std::invalid_argument("compute_bounds: beta must be positive");
  StabilityBounds b;
  b.beta = beta;

  const auto& f = pot.f;
  const auto& df = pot.df;
  const auto& d2f = pot.d2f;

  const double min_df = minimize_on(df, -beta, beta).value;
  if (!(min_df < 0.0))
    throw std::runtime_error("compute_bounds: min f' is not negative on [-beta, beta]");
  b.omega0 = -1.0 / min_df;

  b.omega1 = -minimize_on([&](double x) { return d2f(x) * f(x); }, -beta, beta).value;

  if (b.omega1 > 0.0) {
    const double w = b.omega0 * b.omega0 * b.omega1;
    b.delta = (-1.0 + std::sqrt(1.0 + 7.0 * w)) / (2.0 * w);
    b.delta0 = std::min(1.0, b.delta);
  } else {
    b.delta = std::numeric_limits<double>::quiet_NaN();
    b.delta0 = 1.0;
  }

  b.F0 = -minimize_on([&](double x) { return -std::abs(f(x)); }, -beta, beta).value;
  b.F1 = -minimize_on([&](double x) { return -std::abs(df(x)); }, -beta, beta).value;
  b.F2 = -minimize_on([&](double x) { return -std::abs(d2f(x)); }, -beta, beta).value;
  b.F3 = -minimize_on(
              [&](double x) {
                const double d = df(x);
                return -std::abs(d2f(x) * f(x) + d * d);
              },
              -beta, beta)
              .value;

  b.endpoint_roots =
      std::abs(f(beta)) <= 1e-9 && std::abs(f(-beta)) <= 1e-9;
  b.dt_max_first = b.omega0;
  b.dt_max_second_generic = b.delta0 * b.omega0;
  if (b.endpoint_roots && b.omega1 > 0.0) {
    b.dt_max_second_enlarged = b.delta * b.omega0;
    b.dt_max_second = b.dt_max_second_enlarged;
  } else {
    b.dt_max_second_enlarged = std::numeric_limits<double>::quiet_NaN();
    b.dt_max_second = b.dt_max_second_generic;
  }

  // Enlarged interval for the F~ constants, clipped to the validity interval
  // (minus a guard band) when the potential is not defined that far out.
  double radius = beta + b.delta0 * b.omega0 * b.F0;
  radius = std::min(radius, std::min(-pot.valid_lo, pot.valid_hi) - 1e-9);
  b.enlarged_radius = radius;
  b.F1_tilde =
      -minimize_on([&](double x) { return -std::abs(df(x)); }, -radius, radius).value;
  b.F2_tilde =
      -minimize_on([&](double x) { return -std::abs(d2f(x)); }, -radius, radius).value;
  b.F4 = b.F1 + 0.5 * b.delta0 * b.omega0 * b.F3;
  return b;
}

double stabilized_map(const Potential& pot, const StabilityBounds& bounds,
                      double omega, double x) {
  if (!(omega > 0.0) || !(omega <= bounds.omega0))
    throw std::invalid_argument("stabilized_map: omega outside (0, omega0]");
  if (!(std::abs(x) <= bounds.beta))
    throw std::invalid_argument("stabilized_map: |x| exceeds beta");
  return x + omega * pot.f(x);
}

}  // namespace lri
