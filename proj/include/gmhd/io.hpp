#pragma once

// Plain-text artifacts: CSV with 17 significant digits and a '#' header line,
// written atomically (temp file + rename).

#include <filesystem>
#include <string>
#include <vector>

#include "gmhd/lagrangian.hpp"
#include "gmhd/verify.hpp"

namespace gmhd {

/// Scientific notation, 17 significant digits, '.' decimal point regardless
/// of locale. "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// Writes to <path>.tmp and renames over path. Throws IoFault.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string series_csv(const RunRecord& rec);
/// One row per (snapshot, label); b-trace columns b_d0..b_dM.
std::string trajectories_csv(const TrackedRun& run);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace gmhd
