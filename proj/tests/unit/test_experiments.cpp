#include <doctest.h>

#include <cmath>

#include "lri/experiments.hpp"

using namespace lri;

TEST_CASE("traveling wave field values") {
  GridSpec g = GridSpec::make(2, {9, 9, 9}, {1, 1, 1}, Bc::Neumann);
  const double eps = 0.02;
  const double s = 3.0 * eps / std::sqrt(2.0);

  // at x = s*t the profile crosses 1/2
  const double t = (-0.5 + 4 * g.h[0]) / s;  // wave centre at node 4
  Field u = traveling_wave_field(g, eps, t);
  CHECK(u.values[4 * 9] == doctest::Approx(0.5).epsilon(1e-12));

  // one interface width 2*sqrt(2)*eps to the right of the centre (the centre
  // sits at x=0 when t=0)
  GridSpec g1 = GridSpec::make(1, {3, 1, 1}, {2.0 * (2.0 * std::sqrt(2.0) * eps), 1, 1},
                               Bc::Neumann);
  Field w = traveling_wave_field(g1, eps, 0.0);
  CHECK(w.values[2] ==
        doctest::Approx(0.5 * (1.0 - std::tanh(1.0))).epsilon(1e-12));
  CHECK(0.5 * (1.0 - std::tanh(1.0)) == doctest::Approx(0.119203).epsilon(1e-5));

  // t = 0 reproduces the initial-condition formula exactly
  Field init = traveling_wave_field(g, eps, 0.0);
  for (int i = 0; i < 9; ++i) {
    const double x = g.coord(0, i);
    const double expected =
        0.5 * (1.0 - std::tanh(x / (2.0 * std::sqrt(2.0) * eps)));
    for (int j = 0; j < 9; ++j) CHECK(init.values[i * 9 + j] == expected);
  }

  CHECK_THROWS_AS(traveling_wave_field(g, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("random_field: determinism, range, mean") {
  GridSpec g = GridSpec::make(2, {100, 100, 1}, {1, 1, 1}, Bc::Periodic);
  Field a = random_field(g, -1.0, 1.0, 987654321);
  Field b = random_field(g, -1.0, 1.0, 987654321);
  CHECK(a.values == b.values);  // bitwise

  Field c = random_field(g, -1.0, 1.0, 987654322);
  CHECK(a.values != c.values);

  CHECK_THROWS_AS(random_field(g, 1.0, 1.0, 1), std::invalid_argument);

  GridSpec big = GridSpec::make(1, {1000000, 1, 1}, {1, 1, 1}, Bc::Periodic);
  Field m = random_field(big, -1.0, 1.0, 7);
  double sum = 0.0, lo = 1e300, hi = -1e300;
  for (double v : m.values) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= -1.0);
  CHECK(hi <= 1.0);
  CHECK(std::abs(sum / 1e6) < 0.01);
}

TEST_CASE("wave config derived quantities") {
  WaveConfig c;
  c.eps = 0.02;
  CHECK(c.wave_speed() == doctest::Approx(0.0424264068711929).epsilon(1e-13));
  CHECK(c.end_time() == doctest::Approx(5.892556509887896).epsilon(1e-13));
  CHECK(c.grid().n[0] == 257);
  CHECK(c.grid().bc == Bc::Neumann);
}

TEST_CASE("run_convergence on a desk-micro config") {
  WaveConfig c;
  c.eps = 0.02;
  c.h_denom = 32;
  c.dt_divisors = {8, 16, 32};
  c.schemes = {SchemeKind::Lri1a, SchemeKind::Lri2};

  ConvergenceTable t1 = run_convergence(c);
  REQUIRE(t1.rows.size() == 6);
  CHECK(std::isnan(t1.rows[0].l2_rate));
  CHECK(t1.rows[1].dt < t1.rows[0].dt);
  CHECK(t1.rows[1].l2_error < t1.rows[0].l2_error);
  for (const auto& row : t1.rows) CHECK(!row.diverged);

  // determinism across repeat runs and across the cell-parallel path
  ConvergenceTable t2 = run_convergence(c);
  WaveConfig cp = c;
  cp.jobs = 2;
  ConvergenceTable t3 = run_convergence(cp);
  REQUIRE(t2.rows.size() == t1.rows.size());
  REQUIRE(t3.rows.size() == t1.rows.size());
  for (size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].l2_error == t2.rows[i].l2_error);
    CHECK(t1.rows[i].linf_error == t2.rows[i].linf_error);
    CHECK(t1.rows[i].l2_error == t3.rows[i].l2_error);
    CHECK(t1.rows[i].linf_error == t3.rows[i].linf_error);
  }
}

TEST_CASE("fixed-dt error decreases under h-refinement, then plateaus") {
  // spatial error shrinks with h until the temporal component dominates
  std::vector<double> errs;
  for (int h_denom : {16, 32, 64, 128}) {
    WaveConfig c;
    c.eps = 0.05;
    c.h_denom = h_denom;
    c.dt_divisors = {16};
    c.schemes = {SchemeKind::Lri1a};
    errs.push_back(run_convergence(c).rows[0].linf_error);
  }
  for (size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
  const double early_drop = errs[0] - errs[1];
  const double late_drop = errs[2] - errs[3];
  CHECK(early_drop > 5.0 * late_drop);       // refinement pays off early
  CHECK(late_drop < 0.01 * errs.back());     // then hits the temporal floor
}

TEST_CASE("run_coarsening: series, snapshots, MBP bookkeeping") {
  CoarsenConfig c;
  c.h_denom = 32;
  c.eps = 0.02;
  c.dt = 0.5;
  c.T = 5.0;
  c.seed = 31337;
  c.scheme = SchemeKind::Lri2;
  c.dt = 0.6;
  c.snapshot_times = {0.0, 3.0, 5.0};

  RunReport r = run_coarsening(c);
  CHECK(r.steps_completed == 8);  // round(5/0.6)
  CHECK(r.sup_series.size() == 9);
  CHECK(r.energy_series.size() == 9);
  REQUIRE(r.snapshots.size() == 3);
  CHECK(r.snapshots[0].step == 0);
  CHECK(r.snapshots[0].realized_time == 0.0);
  CHECK(r.snapshots[1].step == 5);  // round(3/0.6)
  CHECK(r.snapshots[1].realized_time == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(!r.divergence_step);
  CHECK(!r.mbp_violation_step);
  for (double s : r.sup_series) CHECK(s <= 1.0 + 1e-12);

  // snapshot at t=0 equals the initial field exactly
  Field u0 = random_field(c.grid(), c.init_lo, c.init_hi, c.seed);
  CHECK(r.snapshots[0].field.values == u0.values);

  SUBCASE("snapshot beyond T is a usage error") {
    CoarsenConfig bad = c;
    bad.snapshot_times = {6.0};
    CHECK_THROWS_AS(run_coarsening(bad), std::invalid_argument);
  }
  SUBCASE("init range outside [-beta, beta] is rejected") {
    CoarsenConfig bad = c;
    bad.potential = "flory-huggins";
    bad.init_lo = -1.0;
    bad.init_hi = 1.0;
    CHECK_THROWS_AS(run_coarsening(bad), std::invalid_argument);
  }
}

TEST_CASE("run_coarsening: oversized Flory-Huggins step is surfaced") {
  CoarsenConfig c;
  c.potential = "flory-huggins";
  c.h_denom = 32;
  c.eps = 0.01;
  c.scheme = SchemeKind::Lri1a;
  c.dt = 0.5;  // far above the 0.1247 ceiling
  c.T = 25.0;
  c.seed = 99;
  c.init_lo = -0.9;
  c.init_hi = 0.9;
  RunReport r = run_coarsening(c);
  CHECK(r.anomalous());
}
