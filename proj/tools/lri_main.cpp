#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lri/diagnostics.hpp"
#include "lri/experiments.hpp"
#include "lri/expops.hpp"
#include "lri/grid.hpp"
#include "lri/potential.hpp"
#include "lri/report_io.hpp"
#include "lri/schemes.hpp"

namespace {

using namespace lri;

// exit codes: 0 ok, 1 verification failure, 2 usage error, 3 dynamics anomaly

Potential make_potential_cli(const std::string& name, double theta, double theta_c) {
  if (name == "double-well") return double_well();
  if (name == "flory-huggins") return flory_huggins(theta, theta_c);
  throw std::invalid_argument("unknown potential: " + name);
}

int cmd_bounds(const std::string& pot_name, double theta, double theta_c) {
  const Potential pot = make_potential_cli(pot_name, theta, theta_c);
  const StabilityBounds b = compute_bounds(pot);
  std::printf("MBP stability bounds for %s\n", pot.name.c_str());
  std::printf("  %-28s %s\n", "bound beta", format_double(b.beta).c_str());
  std::printf("  %-28s %s\n", "omega0", format_double(b.omega0).c_str());
  std::printf("  %-28s %s\n", "omega1", format_double(b.omega1).c_str());
  std::printf("  %-28s %s\n", "delta", format_double(b.delta).c_str());
  std::printf("  %-28s %s\n", "delta0", format_double(b.delta0).c_str());
  std::printf("  %-28s %s\n", "dt ceiling, order 1", format_double(b.dt_max_first).c_str());
  std::printf("  %-28s %s\n", "dt ceiling, order 2", format_double(b.dt_max_second).c_str());
  std::printf("  %-28s %s\n", "  generic (delta0*omega0)",
              format_double(b.dt_max_second_generic).c_str());
  std::printf("  %-28s %s\n", "  enlarged (delta*omega0)",
              format_double(b.dt_max_second_enlarged).c_str());
  std::printf("  %-28s %s\n", "endpoint roots f(+-beta)=0",
              b.endpoint_roots ? "yes" : "no");
  std::printf("  F0..F3: %s %s %s %s   F1~ F2~: %s %s   F4: %s\n",
              format_double(b.F0).c_str(), format_double(b.F1).c_str(),
              format_double(b.F2).c_str(), format_double(b.F3).c_str(),
              format_double(b.F1_tilde).c_str(), format_double(b.F2_tilde).c_str(),
              format_double(b.F4).c_str());
  std::printf("beta=%s\n", format_double(b.beta).c_str());
  std::printf("omega0=%s\n", format_double(b.omega0).c_str());
  std::printf("omega1=%s\n", format_double(b.omega1).c_str());
  std::printf("delta=%s\n", format_double(b.delta).c_str());
  std::printf("delta0=%s\n", format_double(b.delta0).c_str());
  std::printf("dt_max_first=%s\n", format_double(b.dt_max_first).c_str());
  std::printf("dt_max_second=%s\n", format_double(b.dt_max_second).c_str());
  std::printf("dt_max_second_generic=%s\n",
              format_double(b.dt_max_second_generic).c_str());
  std::printf("remark_enlarged=%d\n", b.endpoint_roots ? 1 : 0);
  for (SchemeKind k : {SchemeKind::Lri1a, SchemeKind::Lri1b, SchemeKind::Lri2,
                       SchemeKind::Etd1, SchemeKind::Etdrk2})
    std::printf("dt_max_%s=%s\n", std::string(scheme_name(k)).c_str(),
                format_double(certified_dt_ceiling(k, b)).c_str());
  return 0;
}

int cmd_check_operator(int n, const std::string& bc_str, int dim, double eps,
                       std::optional<double> t_flag) {
  if (n < 3 || n > 32) {
    std::fprintf(stderr, "check-operator: n must be in [3, 32] (dense oracle cost cap)\n");
    return 2;
  }
  if (dim < 1 || dim > 2) {
    std::fprintf(stderr, "check-operator: dim must be 1 or 2\n");
    return 2;
  }
  const Bc bc = bc_str == "periodic" ? Bc::Periodic : Bc::Neumann;
  const GridSpec grid = GridSpec::make(dim, {n, n, n}, {1.0, 1.0, 1.0}, bc);
  const auto axes = make_axes(grid);
  const Eigen::MatrixXd dense = dense_tensor_laplacian(grid);
  const long total = grid.total();

  std::mt19937_64 eng(12345);
  Field u = Field::zeros(grid);
  for (double& v : u.values)
    v = 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
  Eigen::Map<const Eigen::VectorXd> uv(u.values.data(), total);

  bool ok = true;
  const std::vector<double> times =
      t_flag ? std::vector<double>{*t_flag} : std::vector<double>{0.01, 0.3, 2.0};
  for (double t : times) {
    const Eigen::MatrixXd em = dense_expm(eps * eps * dense, t);
    const Eigen::VectorXd exp_ref = em * uv;
    const Eigen::VectorXd phi1_ref = dense_phi(eps * eps * dense, t, 1) * uv;
    const Eigen::VectorXd phi2_ref = dense_phi(eps * eps * dense, t, 2) * uv;
    const double ref_scale = exp_ref.cwiseAbs().maxCoeff();
    for (TransformPath path : {TransformPath::Matrix, TransformPath::Fft}) {
      const char* path_name = path == TransformPath::Matrix ? "matrix" : "fft";
      Propagator prop(grid, axes, eps, t, path, true);
      const Field fe = prop.apply_exp(u);
      const Field f1 = prop.apply_phi(1, u);
      const Field f2 = prop.apply_phi(2, u);
      double de = 0.0, d1 = 0.0, d2 = 0.0;
      for (long i = 0; i < total; ++i) {
        de = std::max(de, std::abs(fe.values[i] - exp_ref[i]));
        d1 = std::max(d1, std::abs(f1.values[i] - phi1_ref[i]));
        d2 = std::max(d2, std::abs(f2.values[i] - phi2_ref[i]));
      }
      de /= ref_scale;
      d1 /= std::max(1e-300, phi1_ref.cwiseAbs().maxCoeff());
      d2 /= std::max(1e-300, phi2_ref.cwiseAbs().maxCoeff());
      std::printf("t=%-6s path=%-6s  exp %.3e  phi1 %.3e  phi2 %.3e\n",
                  format_double(t).c_str(), path_name, de, d1, d2);
      if (de > 1e-10 || d1 > 1e-10 || d2 > 1e-10) {
        std::printf("FAIL: discrepancy above 1e-10 (t=%s, %s path)\n",
                    format_double(t).c_str(), path_name);
        ok = false;
      }
    }
  }
  for (double gamma : {0.1, 1.0, 10.0}) {
    const double norm = dense_expm(dense, gamma).cwiseAbs().rowwise().sum().maxCoeff();
    std::printf("contraction gamma=%-4s  ||e^{gamma D}||_inf = %.15f\n",
                format_double(gamma).c_str(), norm);
    if (norm > 1.0 + 1e-12) {
      std::printf("FAIL: contraction bound violated\n");
      ok = false;
    }
  }
  std::printf(ok ? "all operator checks passed\n" : "operator checks FAILED\n");
  return ok ? 0 : 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SchemeKind> parse_scheme_names(const std::vector<std::string>& names) {
  std::vector<SchemeKind> out;
  for (const auto& s : names) {
    auto k = parse_scheme(s);
    if (!k) throw std::invalid_argument("unknown scheme: " + s);
    out.push_back(*k);
  }
  return out;
}

struct ConvergeFlags {
  std::string config_path;
  std::optional<double> eps;
  std::optional<int> h_denom;
  std::vector<std::string> schemes;
  std::vector<int> dt_divisors;
  std::optional<int> jobs;
  std::string out = "convergence.csv";
  bool dump_config = false;
  bool full_scale = false;
};

int cmd_converge(const ConvergeFlags& flags) {
  WaveConfig config;
  if (!flags.config_path.empty())
    config = wave_config_from_json(read_file(flags.config_path));
  if (flags.full_scale) {
    config.h_denom = 2048;
    config.dt_divisors = {16, 32, 64, 128, 256, 512, 1024};
  }
  if (flags.eps) config.eps = *flags.eps;
  if (flags.h_denom) config.h_denom = *flags.h_denom;
  if (!flags.schemes.empty()) config.schemes = parse_scheme_names(flags.schemes);
  if (!flags.dt_divisors.empty()) config.dt_divisors = flags.dt_divisors;
  if (flags.jobs) config.jobs = *flags.jobs;

  if (flags.dump_config) {
    std::fputs(wave_config_to_json(config).c_str(), stdout);
    return 0;
  }

  const ConvergenceTable table = run_convergence(config);
  const StabilityBounds bounds = compute_bounds(double_well());
  const std::string csv = convergence_csv(table, bounds);
  std::ofstream out(flags.out, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "converge: cannot write %s\n", flags.out.c_str());
    return 2;
  }
  out << csv;
  if (!out.good()) {
    std::fprintf(stderr, "converge: write failed for %s\n", flags.out.c_str());
    return 2;
  }
  std::printf("wrote %s (%zu rows)\n", flags.out.c_str(), table.rows.size());
  return 0;
}

struct CoarsenFlags {
  std::string config_path;
  std::optional<std::string> potential;
  std::optional<double> theta, theta_c, eps, dt, T, init_lo, init_hi, mbp_tol;
  std::optional<int> h_denom;
  std::optional<std::string> scheme;
  std::optional<uint64_t> seed;
  std::vector<double> snapshot_times;
  bool snapshots_given = false;
  std::string out_dir = "coarsen_out";
  bool dump_config = false;
};

int cmd_coarsen(const CoarsenFlags& flags) {
  CoarsenConfig config;
  if (!flags.config_path.empty())
    config = coarsen_config_from_json(read_file(flags.config_path));
  if (flags.potential) config.potential = *flags.potential;
  if (flags.theta) config.theta = *flags.theta;
  if (flags.theta_c) config.theta_c = *flags.theta_c;
  if (flags.eps) config.eps = *flags.eps;
  if (flags.h_denom) config.h_denom = *flags.h_denom;
  if (flags.scheme) {
    auto k = parse_scheme(*flags.scheme);
    if (!k) throw std::invalid_argument("unknown scheme: " + *flags.scheme);
    config.scheme = *k;
  }
  if (flags.dt) config.dt = *flags.dt;
  if (flags.T) config.T = *flags.T;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.init_lo) config.init_lo = *flags.init_lo;
  if (flags.init_hi) config.init_hi = *flags.init_hi;
  if (flags.mbp_tol) config.mbp_tol = *flags.mbp_tol;
  if (flags.snapshots_given) config.snapshot_times = flags.snapshot_times;

  if (flags.dump_config) {
    std::fputs(coarsen_config_to_json(config).c_str(), stdout);
    return 0;
  }

  const RunReport report = run_coarsening(config);

  std::filesystem::create_directories(flags.out_dir);
  const std::filesystem::path series_path =
      std::filesystem::path(flags.out_dir) / "series.csv";
  {
    std::ofstream out(series_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "coarsen: cannot write %s\n", series_path.string().c_str());
      return 2;
    }
    out << series_csv(report);
  }
  for (size_t i = 0; i < report.snapshots.size(); ++i)
    write_snapshot(flags.out_dir, report.snapshots[i], config, static_cast<int>(i));

  std::printf("steps completed: %ld\n", report.steps_completed);
  std::printf("max sup-norm: %s (beta %s)\n",
              format_double(*std::max_element(report.sup_series.begin(),
                                              report.sup_series.end()))
                  .c_str(),
              format_double(report.beta).c_str());
  if (report.divergence_step)
    std::printf("DIVERGENCE at step %ld\n", *report.divergence_step);
  if (report.mbp_violation_step)
    std::printf("MBP VIOLATION first at step %ld\n", *report.mbp_violation_step);
  std::printf("wrote %s and %zu snapshot(s)\n", series_path.string().c_str(),
              report.snapshots.size());
  return report.anomalous() ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low regularity and exponential integrators for Allen-Cahn type dynamics"};
  app.require_subcommand(1);

  std::string pot_name = "double-well";
  double theta = 0.8, theta_c = 1.6;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Report MBP bound and time-step ceilings");
  bounds_cmd->add_option("--potential", pot_name, "double-well | flory-huggins");
  bounds_cmd->add_option("--theta", theta, "Flory-Huggins theta");
  bounds_cmd->add_option("--theta-c", theta_c, "Flory-Huggins theta_c");

  int co_n = 8, co_dim = 2;
  std::string co_bc = "neumann";
  double co_eps = 1.0;
  std::optional<double> co_t;
  auto* check_cmd = app.add_subcommand(
      "check-operator", "Fast-vs-dense exponential and phi comparison");
  check_cmd->add_option("--n", co_n, "points per axis (<= 32)");
  check_cmd->add_option("--bc", co_bc, "neumann | periodic");
  check_cmd->add_option("--dim", co_dim, "1 or 2");
  check_cmd->add_option("--eps", co_eps, "interfacial parameter");
  check_cmd->add_option("--t", co_t, "single time increment (default sweep)");

  ConvergeFlags cf;
  auto* conv_cmd =
      app.add_subcommand("converge", "Traveling-wave convergence table (CSV)");
  conv_cmd->add_option("--config", cf.config_path, "JSON config file");
  conv_cmd->add_option("--eps", cf.eps);
  conv_cmd->add_option("--h-denom", cf.h_denom, "grid spacing denominator");
  conv_cmd->add_option("--schemes", cf.schemes, "comma-separated scheme list")
      ->delimiter(',');
  conv_cmd->add_option("--dt-divisors", cf.dt_divisors, "dt = T/divisor list")
      ->delimiter(',');
  conv_cmd->add_option("--jobs", cf.jobs, "parallel sweep cells");
  conv_cmd->add_option("--out", cf.out, "output CSV path");
  conv_cmd->add_flag("--dump-config", cf.dump_config, "echo effective config and exit");
  conv_cmd->add_flag("--full-scale", cf.full_scale,
                     "full-size preset (h=1/2048; slow)");

  CoarsenFlags kf;
  auto* coarsen_cmd =
      app.add_subcommand("coarsen", "Seeded coarsening run with MBP/energy series");
  coarsen_cmd->add_option("--config", kf.config_path, "JSON config file");
  coarsen_cmd->add_option("--potential", kf.potential);
  coarsen_cmd->add_option("--theta", kf.theta);
  coarsen_cmd->add_option("--theta-c", kf.theta_c);
  coarsen_cmd->add_option("--eps", kf.eps);
  coarsen_cmd->add_option("--h-denom", kf.h_denom);
  coarsen_cmd->add_option("--scheme", kf.scheme);
  coarsen_cmd->add_option("--dt", kf.dt);
  coarsen_cmd->add_option("--T", kf.T);
  coarsen_cmd->add_option("--seed", kf.seed);
  coarsen_cmd->add_option("--init-lo", kf.init_lo);
  coarsen_cmd->add_option("--init-hi", kf.init_hi);
  coarsen_cmd->add_option("--mbp-tol", kf.mbp_tol);
  auto* snap_opt =
      coarsen_cmd->add_option("--snapshot-times", kf.snapshot_times)->delimiter(',');
  coarsen_cmd->add_option("--out-dir", kf.out_dir);
  coarsen_cmd->add_flag("--dump-config", kf.dump_config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(pot_name, theta, theta_c);
    if (check_cmd->parsed())
      return cmd_check_operator(co_n, co_bc, co_dim, co_eps, co_t);
    if (conv_cmd->parsed()) return cmd_converge(cf);
    if (coarsen_cmd->parsed()) {
      kf.snapshots_given = snap_opt->count() > 0;
      return cmd_coarsen(kf);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
