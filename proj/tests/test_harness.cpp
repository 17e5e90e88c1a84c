#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oacm/config.hpp"
#include "oacm/errors.hpp"
#include "oacm/run.hpp"
#include "oacm/snapshot.hpp"

using namespace oacm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("oacm_test_" + tag);
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("empty document parses to the defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.n == 64);
    CHECK(c.mode == Mode::Deterministic);
    CHECK(c.scheme == Scheme::RK3);
    CHECK(c.dt == 1e-3);
    CHECK(c.members == 1);
    CHECK(std::isinf(c.Re_a));
}

TEST_CASE("resolved document round trips") {
    const std::string text = "mode = salt\nmembers = 4\nnoise.M = 2\nseed = 9\n";
    const RunConfig c = parse_config(text);
    CHECK(c.mode == Mode::SALT);
    CHECK(c.members == 4);
    const std::string resolved = parse_config(c.to_text()).to_text();
    CHECK(resolved == c.to_text());
}

TEST_CASE("stochastic modes default to the Heun scheme unless a scheme is named") {
    CHECK(parse_config("mode = salt\n").scheme == Scheme::HeunStratonovich);
    CHECK(parse_config("mode = lasalt\n").scheme == Scheme::HeunStratonovich);
    CHECK(parse_config("mode = salt\nscheme = em-ito\n").scheme == Scheme::EulerMaruyamaIto);
    CHECK(parse_config("mode = deterministic\n").scheme == Scheme::RK3);
}

TEST_CASE("validation failures name the offending keys and are aggregated") {
    try {
        parse_config("dt = 0\ngrid.n = 7\nmembers = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("config validation failed") != std::string::npos);
        CHECK(msg.find("dt") != std::string::npos);
        CHECK(msg.find("grid.n") != std::string::npos);
        CHECK(msg.find("members") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config("no_such_key = 1\n"),
                         doctest::Contains("unknown key: 'no_such_key'"), ConfigError);
}

TEST_CASE("deterministic mode only accepts the RK3 scheme") {
    CHECK_THROWS_AS(parse_config("mode = deterministic\nscheme = heun\n"), ConfigError);
}

TEST_CASE("strict sign policy on the coupling constants") {
    // negative couplings pass
    CHECK_NOTHROW(parse_config("strict_signs = true\ngamma = -0.1\nsigma = -0.2\n"));
    try {
        parse_config("strict_signs = true\ngamma = 0.1\nsigma = -0.2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("strict_signs") != std::string::npos);
        CHECK(msg.find("gamma") != std::string::npos);
    }
}

TEST_CASE("state snapshot round trip is exact") {
    TempDir tmp("snap");
    fs::create_directories(tmp.path);
    const Grid g{32, 2.0 * std::numbers::pi};
    const StateVector psi = random_state(g, 4, 0.1, 91);
    const Snapshot snap = snapshot_of_state(psi, 0.25, "salt", 3, 0.125);
    const std::string path = (tmp.path / "state.snap").string();
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    CHECK(back.t == 0.25);
    CHECK(back.member == 3);
    CHECK(back.frozen_at == 0.125);
    CHECK(back.mode == "salt");
    // fields are serialized as physical samples: one transform pair of roundoff
    const StateVector again = state_from_snapshot(back);
    CHECK(l2_norm(again - psi) < 1e-13);

    // NaN frozen_at (an active member) survives the round trip
    const Snapshot active = snapshot_of_state(psi, 0.25, "salt", 0,
                                              std::numeric_limits<double>::quiet_NaN());
    write_snapshot(path, active);
    CHECK(std::isnan(read_snapshot(path).frozen_at));
}

TEST_CASE("corrupted snapshots are rejected") {
    TempDir tmp("corrupt");
    fs::create_directories(tmp.path);
    const Grid g{32, 2.0 * std::numbers::pi};
    const std::string path = (tmp.path / "state.snap").string();
    write_snapshot(path, snapshot_of_state(random_state(g, 4, 0.1, 92), 0.0, "salt", 0, NAN));
    std::string bytes = slurp(path);
    bytes[bytes.size() - 17] ^= 0x40;  // flip a payload bit
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK_THROWS_AS(read_snapshot(path), CompatibilityError);
    // truncation is also caught
    std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
    CHECK_THROWS_AS(read_snapshot(path), CompatibilityError);
}

TEST_CASE("loop and basis snapshots round trip") {
    TempDir tmp("loopsnap");
    fs::create_directories(tmp.path);
    const Grid g{32, 2.0 * std::numbers::pi};
    MaterialLoop loop = make_circle_loop(1.0, 2.0, 0.7, 33);
    const std::string lp = (tmp.path / "loop.snap").string();
    write_snapshot(lp, snapshot_of_loop(loop, 0.5, "deterministic"));
    const MaterialLoop lback = loop_from_snapshot(read_snapshot(lp));
    REQUIRE(lback.size() == loop.size());
    for (int i = 0; i < loop.size(); ++i) {
        CHECK(lback.points[i][0] == loop.points[i][0]);
        CHECK(lback.points[i][1] == loop.points[i][1]);
    }

    const NoiseBasis basis = default_xi_basis(g, 3, 0.1, 2.0);
    const std::string bp = (tmp.path / "basis.snap").string();
    write_snapshot(bp, snapshot_of_basis(basis, g));
    const NoiseBasis bback = basis_from_snapshot(read_snapshot(bp));
    REQUIRE(bback.M() == 3);
    // the payload is stored in physical space, so reconstruction round-trips
    // through one transform pair
    for (int i = 0; i < 3; ++i) CHECK(l2_norm(bback.xis[i] - basis.xis[i]) < 1e-14);
}

TEST_CASE("record formatting uses the nan literal") {
    DiagnosticsRecord r;
    r.t = 0.5;
    const std::string line = format_record(r);
    CHECK(line.find("nan") != std::string::npos);
    CHECK(line.substr(0, 3) == "0.5");
}

TEST_CASE("runs are bit-identical for a fixed config and seed") {
    TempDir tmp1("run_a"), tmp2("run_b");
    auto cfg_for = [](const fs::path& dir) {
        RunConfig c = parse_config(
            "mode = salt\ngrid.n = 32\ndt = 1e-3\nT = 0.01\noutput_interval = 0.005\n"
            "members = 2\nnoise.M = 2\nseed = 11\n");
        c.output_dir = dir.string();
        return c;
    };
    const RunResult r1 = run(cfg_for(tmp1.path));
    const RunResult r2 = run(cfg_for(tmp2.path));
    CHECK(r1.records.size() == 3);
    CHECK(!r1.blowup_t.has_value());
    CHECK(slurp(tmp1.path / "diagnostics.csv") == slurp(tmp2.path / "diagnostics.csv"));
}

TEST_CASE("diagnostics recompute from snapshots matches the live run") {
    for (const std::string mode : {"deterministic", "salt", "lasalt", "sam"}) {
        TempDir tmp("recompute_" + mode);
        RunConfig c = parse_config(
            "mode = " + mode +
            "\ngrid.n = 32\ndt = 1e-3\nT = 0.01\noutput_interval = 0.005\n"
            "members = 2\nnoise.M = 2\nseed = 13\n");
        c.output_dir = tmp.path.string();
        const RunResult live = run(c);
        const auto rec = diag_recompute(tmp.path.string());
        REQUIRE(rec.size() == live.records.size());
        const auto a = csv_rows(tmp.path / "diagnostics.csv");
        const auto b = csv_rows(tmp.path / "diagnostics_recomputed.csv");
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i].size() == b[i].size());
            for (size_t j = 0; j < a[i].size(); ++j) {
                if (std::isnan(a[i][j])) {
                    CHECK(std::isnan(b[i][j]));
                } else {
                    CHECK(std::abs(a[i][j] - b[i][j]) <=
                          1e-9 * std::max(1.0, std::abs(a[i][j])));
                }
            }
        }
    }
}
