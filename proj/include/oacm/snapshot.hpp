#pragma once

#include <string>

#include "oacm/diagnostics.hpp"

namespace oacm {

// Text header + little-endian float64 payload, one block of `rows` values
// per named field, FNV-1a checksum over the payload bytes.
struct Snapshot {
    int format_version = 1;
    int n = 0;          // grid points per dimension (0 for non-field payloads)
    double L = 0.0;
    double t = 0.0;
    std::string mode;
    int member = 0;     // -1 marks the expectation state
    double frozen_at = std::numeric_limits<double>::quiet_NaN();
    int rows = 0;       // values per field
    std::vector<std::string> field_names;
    std::vector<std::vector<double>> payload;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
// Throws CompatibilityError on version mismatch, truncation, or checksum
// failure.
Snapshot read_snapshot(const std::string& path);

Snapshot snapshot_of_state(const StateVector& psi, double t, const std::string& mode,
                           int member, double frozen_at);
StateVector state_from_snapshot(const Snapshot& snap);

Snapshot snapshot_of_sam(const CompressibleState& state, double t);
CompressibleState sam_from_snapshot(const Snapshot& snap, double kappa, double alpha,
                                    double Ro, const CoriolisField& coriolis);

Snapshot snapshot_of_loop(const MaterialLoop& loop, double t, const std::string& mode);
MaterialLoop loop_from_snapshot(const Snapshot& snap);

Snapshot snapshot_of_basis(const NoiseBasis& basis, const Grid& g);
NoiseBasis basis_from_snapshot(const Snapshot& snap);

}  // namespace oacm
