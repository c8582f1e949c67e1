#pragma once

#include <filesystem>
#include <string>

#include "lri/diagnostics.hpp"
#include "lri/experiments.hpp"

namespace lri {

/// Shortest decimal that round-trips the value (locale-independent);
/// non-finite values print as "nan"/"inf".
std::string format_double(double v);

/// CSV with header scheme,dt,l2_error,l2_rate,linf_error,linf_rate.
/// Rates are empty on the first row of a scheme block, "nan" on divergence.
/// A "# WARNING uncertified dt" comment precedes rows whose dt exceeds the
/// scheme's certified ceiling. Newlines are '\n'.
std::string convergence_csv(const ConvergenceTable& table,
                            const StabilityBounds& bounds);

/// CSV with header step,time,sup_norm,energy.
std::string series_csv(const RunReport& report);

/// Raw little-endian float64 snapshot (row-major) plus a JSON sidecar
/// {nx, ny, h, t, eps, bc, potential, seed}. Returns the data-file path.
std::filesystem::path write_snapshot(const std::filesystem::path& dir,
                                     const Snapshot& snap,
                                     const CoarsenConfig& config, int index);

// JSON config ingestion; flag values override file values in the CLI layer.
WaveConfig wave_config_from_json(const std::string& text);
std::string wave_config_to_json(const WaveConfig& config);
CoarsenConfig coarsen_config_from_json(const std::string& text);
std::string coarsen_config_to_json(const CoarsenConfig& config);

}  // namespace lri
