#include "lri/report_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lri {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string convergence_csv(const ConvergenceTable& table,
                            const StabilityBounds& bounds) {
  std::string out = "scheme,dt,l2_error,l2_rate,linf_error,linf_rate\n";
  SchemeKind block = SchemeKind::Lri1a;
  bool first_of_block = true;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const ConvergenceRow& row = table.rows[i];
    first_of_block = i == 0 || row.scheme != block;
    block = row.scheme;
    if (row.dt > certified_dt_ceiling(row.scheme, bounds)) {
      out += "# WARNING uncertified dt ";
      out += format_double(row.dt);
      out += " for ";
      out += scheme_name(row.scheme);
      out += '\n';
    }
    out += scheme_name(row.scheme);
    out += ',';
    out += format_double(row.dt);
    out += ',';
    out += format_double(row.l2_error);
    out += ',';
    out += first_of_block && !row.diverged ? "" : format_double(row.l2_rate);
    out += ',';
    out += format_double(row.linf_error);
    out += ',';
    out += first_of_block && !row.diverged ? "" : format_double(row.linf_rate);
    out += '\n';
  }
  return out;
}

std::string series_csv(const RunReport& report) {
  std::string out = "step,time,sup_norm,energy\n";
  for (size_t m = 0; m < report.sup_series.size(); ++m) {
    out += std::to_string(m);
    out += ',';
    out += format_double(static_cast<double>(m) * report.dt);
    out += ',';
    out += format_double(report.sup_series[m]);
    out += ',';
    out += format_double(report.energy_series[m]);
    out += '\n';
  }
  return out;
}

std::filesystem::path write_snapshot(const std::filesystem::path& dir,
                                     const Snapshot& snap,
                                     const CoarsenConfig& config, int index) {
  std::filesystem::create_directories(dir);
  char stem[32];
  std::snprintf(stem, sizeof(stem), "snapshot_%04d", index);
  const std::filesystem::path data_path = dir / (std::string(stem) + ".f64");
  const std::filesystem::path meta_path = dir / (std::string(stem) + ".json");

  std::ofstream data(data_path, std::ios::binary);
  if (!data) throw std::runtime_error("cannot write " + data_path.string());
  for (double v : snap.field.values) {
    uint64_t bits = std::bit_cast<uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) {
      uint64_t sw = 0;
      for (int b = 0; b < 8; ++b) sw |= ((bits >> (8 * b)) & 0xff) << (8 * (7 - b));
      bits = sw;
    }
    data.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
  }
  if (!data.good()) throw std::runtime_error("write failed: " + data_path.string());
  data.close();

  nlohmann::json meta;
  meta["nx"] = snap.field.grid.n[0];
  meta["ny"] = snap.field.grid.dim > 1 ? snap.field.grid.n[1] : 1;
  meta["h"] = snap.field.grid.h[0];
  meta["t"] = snap.realized_time;
  meta["requested_t"] = snap.requested_time;
  meta["eps"] = config.eps;
  meta["bc"] = bc_name(snap.field.grid.bc);
  meta["potential"] = config.potential;
  meta["seed"] = config.seed;
  std::ofstream meta_out(meta_path);
  meta_out << meta.dump(2) << "\n";
  if (!meta_out.good()) throw std::runtime_error("write failed: " + meta_path.string());
  return data_path;
}

namespace {

using nlohmann::json;

std::vector<SchemeKind> parse_scheme_list(const json& arr) {
  std::vector<SchemeKind> out;
  for (const auto& s : arr) {
    auto k = parse_scheme(s.get<std::string>());
    if (!k) throw std::invalid_argument("unknown scheme: " + s.get<std::string>());
    out.push_back(*k);
  }
  return out;
}

}  // namespace

WaveConfig wave_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  WaveConfig c;
  if (j.contains("eps")) c.eps = j.at("eps").get<double>();
  if (j.contains("h_denom")) c.h_denom = j.at("h_denom").get<int>();
  if (j.contains("dim")) c.dim = j.at("dim").get<int>();
  if (j.contains("dt_divisors"))
    c.dt_divisors = j.at("dt_divisors").get<std::vector<int>>();
  if (j.contains("schemes")) c.schemes = parse_scheme_list(j.at("schemes"));
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
  return c;
}

std::string wave_config_to_json(const WaveConfig& c) {
  json j;
  j["eps"] = c.eps;
  j["h_denom"] = c.h_denom;
  j["dim"] = c.dim;
  j["dt_divisors"] = c.dt_divisors;
  std::vector<std::string> names;
  for (SchemeKind k : c.schemes) names.emplace_back(scheme_name(k));
  j["schemes"] = names;
  j["jobs"] = c.jobs;
  return j.dump(2) + "\n";
}

CoarsenConfig coarsen_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  CoarsenConfig c;
  if (j.contains("potential")) c.potential = j.at("potential").get<std::string>();
  if (j.contains("theta")) c.theta = j.at("theta").get<double>();
  if (j.contains("theta_c")) c.theta_c = j.at("theta_c").get<double>();
  if (j.contains("eps")) c.eps = j.at("eps").get<double>();
  if (j.contains("h_denom")) c.h_denom = j.at("h_denom").get<int>();
  if (j.contains("dim")) c.dim = j.at("dim").get<int>();
  if (j.contains("scheme")) {
    auto k = parse_scheme(j.at("scheme").get<std::string>());
    if (!k) throw std::invalid_argument("unknown scheme: " + j.at("scheme").get<std::string>());
    c.scheme = *k;
  }
  if (j.contains("dt")) c.dt = j.at("dt").get<double>();
  if (j.contains("T")) c.T = j.at("T").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("init_lo")) c.init_lo = j.at("init_lo").get<double>();
  if (j.contains("init_hi")) c.init_hi = j.at("init_hi").get<double>();
  if (j.contains("snapshot_times"))
    c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
  if (j.contains("mbp_tol")) c.mbp_tol = j.at("mbp_tol").get<double>();
  return c;
}

std::string coarsen_config_to_json(const CoarsenConfig& c) {
  json j;
  j["potential"] = c.potential;
  if (c.potential == "flory-huggins") {
    j["theta"] = c.theta;
    j["theta_c"] = c.theta_c;
  }
  j["eps"] = c.eps;
  j["h_denom"] = c.h_denom;
  j["dim"] = c.dim;
  j["scheme"] = std::string(scheme_name(c.scheme));
  j["dt"] = c.dt;
  j["T"] = c.T;
  j["seed"] = c.seed;
  j["init_lo"] = c.init_lo;
  j["init_hi"] = c.init_hi;
  j["snapshot_times"] = c.snapshot_times;
  j["mbp_tol"] = c.mbp_tol;
  return j.dump(2) + "\n";
}

}  // namespace lri
