#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wcett/dag.hpp"
#include "wcett/estimator.hpp"
#include "wcett/platform.hpp"
#include "wcett/spanner.hpp"

namespace wcett::io {

/// DAG JSON: {"vertices":[...],"edges":[{"id":..,"from":..,"to":..}],
/// "source":..,"sink":..,"exclusions":[[...]]}. Field order on write is
/// deterministic. Loading validates the full invariant set.
ProgramDag load_dag(const std::filesystem::path& file);
void save_dag(const ProgramDag& dag, const std::filesystem::path& file);

/// Platform JSON: {"weights":[...],"mu_max":x,"law":"uniform"|"adversarial",
/// "seed":n} plus, for the adversarial law, "adversarial":[{"path":[...],"d":x}].
PlatformModel load_platform(const std::filesystem::path& file);
void save_platform(const PlatformModel& platform, const std::filesystem::path& file);

/// Measurement CSV: header "path;length"; path as comma-separated edge ids.
MeasurementSet load_measurements(const std::filesystem::path& file, const ProgramDag& dag);
void save_measurements(const MeasurementSet& measurements,
                       const std::filesystem::path& file);

/// Basis JSON: {"paths":[[edge ids],...],"rank":r}.
std::vector<PathVec> load_basis(const std::filesystem::path& file, const ProgramDag& dag);
void save_basis(const std::vector<PathVec>& paths, int rank,
                const std::filesystem::path& file);

/// Estimate report JSON. Wall-clock seconds are zeroed unless emit_times
/// is set, keeping default artifacts byte-reproducible.
void save_report(const EstimateReport& report, const std::filesystem::path& file,
                 bool emit_times);

/// Decimal with at most 6 fraction digits, trailing zeros stripped.
std::string format_length(double value);

/// FNV-1a-64 hex digest of a file's bytes (manifest checksums).
std::string file_checksum(const std::filesystem::path& file);

}  // namespace wcett::io
