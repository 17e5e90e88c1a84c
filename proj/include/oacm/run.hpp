#pragma once

#include <optional>

#include "oacm/config.hpp"
#include "oacm/diagnostics.hpp"

namespace oacm {

struct RunResult {
    double t_end = 0.0;
    int frozen_count = 0;
    std::optional<double> blowup_t;
    std::vector<DiagnosticsRecord> records;
    std::string csv_path;
};

// Execute the configured mode for the configured horizon, emitting one CSV
// row per output interval and (optionally) snapshots at the same times.
// Bit-identical reruns for a fixed config and seed.
RunResult run(const RunConfig& cfg);

// Recompute the diagnostics rows from the snapshots in a run's output
// directory; writes diagnostics_recomputed.csv next to the originals.
std::vector<DiagnosticsRecord> diag_recompute(const std::string& dir);

void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records,
               const std::optional<double>& blowup_t = std::nullopt);
std::string format_record(const DiagnosticsRecord& r);

}  // namespace oacm
