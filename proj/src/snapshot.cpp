#include "oacm/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "oacm/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot payload layout assumes a little-endian host");

namespace oacm {

namespace {

uint64_t fnv1a(const unsigned char* data, size_t len) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hexd(double v) {
    char buf[48];
    snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
    std::vector<unsigned char> payload;
    payload.reserve(snap.field_names.size() * snap.rows * sizeof(double));
    for (const auto& block : snap.payload) {
        if (static_cast<int>(block.size()) != snap.rows)
            throw std::invalid_argument("write_snapshot: payload block size mismatch");
        const auto* b = reinterpret_cast<const unsigned char*>(block.data());
        payload.insert(payload.end(), b, b + block.size() * sizeof(double));
    }
    std::ostringstream hdr;
    hdr << "OACMSNAP " << snap.format_version << "\n";
    hdr << "n " << snap.n << "\n";
    hdr << "L " << hexd(snap.L) << "\n";
    hdr << "t " << hexd(snap.t) << "\n";
    hdr << "mode " << (snap.mode.empty() ? "-" : snap.mode) << "\n";
    hdr << "member " << snap.member << "\n";
    hdr << "frozen " << (std::isnan(snap.frozen_at) ? std::string("-") : hexd(snap.frozen_at))
        << "\n";
    hdr << "rows " << snap.rows << "\n";
    hdr << "fields " << join(snap.field_names) << "\n";
    char csum[32];
    snprintf(csum, sizeof csum, "%016llx",
             static_cast<unsigned long long>(fnv1a(payload.data(), payload.size())));
    hdr << "checksum " << csum << "\n";
    hdr << "END\n";

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    const std::string h = hdr.str();
    os.write(h.data(), static_cast<std::streamsize>(h.size()));
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size()));
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    Snapshot snap;
    std::string line;
    uint64_t expect_csum = 0;
    bool have_end = false;
    while (std::getline(is, line)) {
        if (line == "END") {
            have_end = true;
            break;
        }
        std::istringstream ls(line);
        std::string key, val;
        ls >> key;
        std::getline(ls, val);
        if (!val.empty() && val.front() == ' ') val.erase(0, 1);
        if (key == "OACMSNAP") {
            snap.format_version = std::stoi(val);
            if (snap.format_version != 1)
                throw CompatibilityError("read_snapshot: unsupported format version " + val);
        } else if (key == "n") snap.n = std::stoi(val);
        else if (key == "L") snap.L = std::strtod(val.c_str(), nullptr);
        else if (key == "t") snap.t = std::strtod(val.c_str(), nullptr);
        else if (key == "mode") snap.mode = (val == "-") ? "" : val;
        else if (key == "member") snap.member = std::stoi(val);
        else if (key == "frozen")
            snap.frozen_at = (val == "-") ? std::numeric_limits<double>::quiet_NaN()
                                          : std::strtod(val.c_str(), nullptr);
        else if (key == "rows") snap.rows = std::stoi(val);
        else if (key == "fields") snap.field_names = split(val);
        else if (key == "checksum") expect_csum = std::stoull(val, nullptr, 16);
        else throw CompatibilityError("read_snapshot: unknown header key '" + key + "'");
    }
    if (!have_end) throw CompatibilityError("read_snapshot: missing END marker");

    const size_t nbytes = snap.field_names.size() * static_cast<size_t>(snap.rows) * sizeof(double);
    std::vector<unsigned char> payload(nbytes);
    is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(nbytes));
    if (static_cast<size_t>(is.gcount()) != nbytes)
        throw CompatibilityError("read_snapshot: truncated payload in " + path);
    if (fnv1a(payload.data(), payload.size()) != expect_csum)
        throw CompatibilityError("read_snapshot: checksum failure in " + path);

    snap.payload.resize(snap.field_names.size());
    for (size_t f = 0; f < snap.payload.size(); ++f) {
        snap.payload[f].resize(snap.rows);
        std::memcpy(snap.payload[f].data(), payload.data() + f * snap.rows * sizeof(double),
                    snap.rows * sizeof(double));
    }
    return snap;
}

Snapshot snapshot_of_state(const StateVector& psi, double t, const std::string& mode,
                           int member, double frozen_at) {
    const Grid& g = psi.grid();
    Snapshot s;
    s.n = g.n;
    s.L = g.L;
    s.t = t;
    s.mode = mode;
    s.member = member;
    s.frozen_at = frozen_at;
    s.rows = g.size();
    s.field_names = {"u_a_x", "u_a_y", "theta_a", "u_o_x", "u_o_y", "theta_o"};
    s.payload = {to_physical(psi.u_a.x()), to_physical(psi.u_a.y()), to_physical(psi.th_a),
                 to_physical(psi.u_o.x()), to_physical(psi.u_o.y()), to_physical(psi.th_o)};
    return s;
}

StateVector state_from_snapshot(const Snapshot& snap) {
    Grid g{snap.n, snap.L};
    StateVector psi(g);
    if (snap.field_names.size() != 6)
        throw CompatibilityError("state_from_snapshot: expected 6 fields");
    psi.u_a = VectorField(to_spectral(g, snap.payload[0]), to_spectral(g, snap.payload[1]));
    psi.th_a = to_spectral(g, snap.payload[2]);
    psi.u_o = VectorField(to_spectral(g, snap.payload[3]), to_spectral(g, snap.payload[4]));
    psi.th_o = to_spectral(g, snap.payload[5]);
    return psi;
}

Snapshot snapshot_of_sam(const CompressibleState& state, double t) {
    const Grid& g = state.u.grid();
    Snapshot s;
    s.n = g.n;
    s.L = g.L;
    s.t = t;
    s.mode = "sam";
    s.rows = g.size();
    s.field_names = {"u_x", "u_y", "D", "theta"};
    s.payload = {to_physical(state.u.x()), to_physical(state.u.y()), to_physical(state.D),
                 to_physical(state.theta)};
    return s;
}

CompressibleState sam_from_snapshot(const Snapshot& snap, double kappa, double alpha,
                                    double Ro, const CoriolisField& coriolis) {
    Grid g{snap.n, snap.L};
    CompressibleState st;
    st.u = VectorField(to_spectral(g, snap.payload[0]), to_spectral(g, snap.payload[1]));
    st.D = to_spectral(g, snap.payload[2]);
    st.theta = to_spectral(g, snap.payload[3]);
    st.kappa = kappa;
    st.alpha = alpha;
    st.Ro = Ro;
    st.coriolis = coriolis;
    return st;
}

Snapshot snapshot_of_loop(const MaterialLoop& loop, double t, const std::string& mode) {
    Snapshot s;
    s.t = t;
    s.mode = mode;
    s.rows = loop.size();
    s.field_names = {"x", "y"};
    s.payload.assign(2, std::vector<double>(loop.size()));
    for (int i = 0; i < loop.size(); ++i) {
        s.payload[0][i] = loop.points[i][0];
        s.payload[1][i] = loop.points[i][1];
    }
    return s;
}

MaterialLoop loop_from_snapshot(const Snapshot& snap) {
    MaterialLoop loop;
    loop.points.resize(snap.rows);
    for (int i = 0; i < snap.rows; ++i)
        loop.points[i] = {snap.payload[0][i], snap.payload[1][i]};
    return loop;
}

Snapshot snapshot_of_basis(const NoiseBasis& basis, const Grid& g) {
    Snapshot s;
    s.n = g.n;
    s.L = g.L;
    s.mode = "basis";
    s.rows = g.size();
    for (int i = 0; i < basis.M(); ++i) {
        s.field_names.push_back("xi_" + std::to_string(i) + "_x");
        s.field_names.push_back("xi_" + std::to_string(i) + "_y");
        s.payload.push_back(to_physical(basis.xis[i].x()));
        s.payload.push_back(to_physical(basis.xis[i].y()));
    }
    return s;
}

NoiseBasis basis_from_snapshot(const Snapshot& snap) {
    Grid g{snap.n, snap.L};
    NoiseBasis basis;
    for (size_t i = 0; i + 1 < snap.payload.size(); i += 2)
        basis.xis.emplace_back(to_spectral(g, snap.payload[i]), to_spectral(g, snap.payload[i + 1]));
    return basis;
}

}  // namespace oacm
