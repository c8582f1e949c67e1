#include <doctest.h>

#include <cmath>

#include "lri/diagnostics.hpp"
#include "oracles.hpp"

using namespace lri;

TEST_CASE("discrete energy: closed cases and dense quadratic form") {
  Potential dw = double_well();

  GridSpec g = GridSpec::make(2, {5, 5, 5}, {1, 1, 1}, Bc::Neumann);
  Field zero = Field::zeros(g);
  CHECK(discrete_energy(zero, 0.3, dw) ==
        doctest::Approx(g.total() / 4.0).epsilon(1e-14));

  Field ones = Field::constant(g, 1.0);
  CHECK(discrete_energy(ones, 0.3, dw) == doctest::Approx(0.0).epsilon(1e-13));

  Field u = oracle::random_test_field(g, 44, -0.5, 0.5);
  const double eps = 0.2;
  Eigen::MatrixXd dense = oracle::kron_sum_laplacian(g);
  Eigen::Map<const Eigen::VectorXd> uv(u.values.data(), g.total());
  double ref = -0.5 * eps * eps * uv.dot(dense * uv);
  for (double v : u.values) ref += dw.F(v);
  CHECK(discrete_energy(u, eps, dw) ==
        doctest::Approx(ref).epsilon(1e-11));
}

TEST_CASE("mbp_check") {
  GridSpec g = GridSpec::make(1, {5, 1, 1}, {1, 1, 1}, Bc::Neumann);
  Field u = Field::constant(g, 0.9575);
  MbpReport ok = mbp_check(u, 0.9575, 0.0);
  CHECK(ok.pass);
  CHECK(ok.max_abs == 0.9575);

  u.values[3] = -(0.9575 + 1e-6);
  MbpReport bad = mbp_check(u, 0.9575, 1e-12);
  CHECK(!bad.pass);
  CHECK(bad.argmax == 3);
  CHECK(bad.max_abs == doctest::Approx(0.9575 + 1e-6).epsilon(1e-12));

  CHECK_THROWS_AS(mbp_check(u, 1.0, -1e-3), std::invalid_argument);
}

TEST_CASE("error_norms") {
  GridSpec g = GridSpec::make(1, {2 + 1, 1, 1}, {1.0, 1, 1}, Bc::Neumann);
  Field u = Field::zeros(g), v = Field::zeros(g);
  ErrorNorms z = error_norms(u, v);
  CHECK(z.l2 == 0.0);
  CHECK(z.linf == 0.0);

  // 1D, h = 0.5, difference (1, -1, 0)
  u.values = {1.0, -1.0, 0.0};
  ErrorNorms n = error_norms(u, v);
  CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(n.linf == 1.0);

  ErrorNorms sym = error_norms(v, u);
  CHECK(sym.l2 == n.l2);
  CHECK(sym.linf == n.linf);

  GridSpec g2 = GridSpec::make(2, {4, 4, 4}, {1, 1, 1}, Bc::Periodic);
  CHECK_THROWS_AS(error_norms(u, Field::zeros(g2)), std::invalid_argument);
}

TEST_CASE("convergence_rates") {
  std::vector<double> e1 = {0.4, 0.2}, d1 = {0.2, 0.1};
  auto r1 = convergence_rates(e1, d1);
  CHECK(std::isnan(r1[0]));
  CHECK(r1[1] == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> e2 = {0.04, 0.01}, d2 = {0.2, 0.1};
  CHECK(convergence_rates(e2, d2)[1] == doctest::Approx(2.0).epsilon(1e-14));

  // published table row pair: 4.24e-2 -> 2.24e-2 over a dt halving
  std::vector<double> e3 = {4.24e-2, 2.24e-2}, d3 = {1.0 / 32, 1.0 / 64};
  CHECK(std::abs(convergence_rates(e3, d3)[1] - 0.92) < 0.005);

  std::vector<double> e4 = {0.4, 0.0}, d4 = {0.2, 0.1};
  CHECK(std::isnan(convergence_rates(e4, d4)[1]));

  CHECK_THROWS_AS(convergence_rates(std::vector<double>{1.0}, d1),
                  std::invalid_argument);
}

TEST_CASE("theoretical_error_bound: structure and hypothesis checks") {
  StabilityBounds b = compute_bounds(double_well());
  const double a_norm = 2.56;

  for (SchemeKind kind : {SchemeKind::Lri1a, SchemeKind::Lri2}) {
    CHECK(theoretical_error_bound(kind, b, a_norm, 0.0, 0.1) == 0.0);
    const double b1 = theoretical_error_bound(kind, b, a_norm, 0.5, 0.1);
    const double b2 = theoretical_error_bound(kind, b, a_norm, 0.5, 0.05);
    const double factor = scheme_order(kind) == 1 ? 2.0 : 4.0;
    CHECK(b1 / b2 == doctest::Approx(factor).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theoretical_error_bound(SchemeKind::Lri1a, b, a_norm, 0.5, 0.51),
                  std::invalid_argument);
  CHECK_THROWS_AS(theoretical_error_bound(SchemeKind::Lri2, b, a_norm, 0.5, 0.51),
                  std::invalid_argument);
  CHECK_NOTHROW(theoretical_error_bound(SchemeKind::Lri2, b, a_norm, 0.5, 0.5));
}

TEST_CASE("measured error stays under the a-priori bound") {
  GridSpec g = GridSpec::make(1, {9, 1, 1}, {1, 1, 1}, Bc::Neumann);
  auto axes = make_axes(g);
  const double eps = 0.1, t_end = 0.5, dt = 0.05;
  Field u0 = oracle::random_test_field(g, 314, -0.9, 0.9);

  Stepper coarse(g, axes, eps, dt, SchemeKind::Lri1a, double_well());
  Field u_coarse = integrate(coarse, u0, 10).final;

  const double dt_ref = dt / 1000.0;
  Stepper fine(g, axes, eps, dt_ref, SchemeKind::Lri2, double_well());
  Field u_ref = integrate(fine, u0, 10000).final;

  double err = 0.0;
  for (int i = 0; i < 9; ++i)
    err = std::max(err, std::abs(u_coarse.values[i] - u_ref.values[i]));

  StabilityBounds b = compute_bounds(double_well());
  const double bound = theoretical_error_bound(
      SchemeKind::Lri1a, b, operator_inf_norm(g, eps), t_end, dt);
  CHECK(err <= bound);
  CHECK(bound < 1.0);  // sanity: the bound is not vacuous at this scale
}

TEST_CASE("energy series scan") {
  std::vector<double> good = {10.0, 5.0, 2.0, 1.999999999};
  EnergyReport r = check_energy_series(good, 1e-8);
  CHECK(r.violations.empty());
  CHECK(r.initial == 10.0);
  CHECK(r.max_observed == 10.0);

  std::vector<double> bad = {10.0, 5.0, 5.1, 1.0};
  EnergyReport rb = check_energy_series(bad, 1e-8);
  REQUIRE(rb.violations.size() == 1);
  CHECK(rb.violations[0].first == 2);
}

TEST_CASE("increment and energy-drift constants") {
  StabilityBounds b = compute_bounds(double_well());
  const double a_norm = 3.0;
  CHECK(increment_rate_bound(SchemeKind::Lri1a, b, a_norm) ==
        doctest::Approx(b.beta * a_norm + b.F0).epsilon(1e-14));
  CHECK(increment_rate_bound(SchemeKind::Lri2, b, a_norm) ==
        doctest::Approx(b.beta * a_norm + b.F0 +
                        b.delta0 * b.omega0 * b.F0 * b.F1)
            .epsilon(1e-14));
  CHECK(energy_drift_bound(SchemeKind::Lri1a, b, a_norm, 100, 2.0) ==
        doctest::Approx(increment_rate_bound(SchemeKind::Lri1a, b, a_norm) * 100 *
                        2.0 * (b.F0 + b.beta * a_norm))
            .epsilon(1e-14));
}
