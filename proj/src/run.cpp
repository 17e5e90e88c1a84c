#include "oacm/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oacm/errors.hpp"
#include "oacm/snapshot.hpp"

namespace fs = std::filesystem;

namespace oacm {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string snap_name(const std::string& stem, int idx, int member) {
    char buf[96];
    if (member >= 0)
        snprintf(buf, sizeof buf, "%s_%05d_m%03d.snap", stem.c_str(), idx, member);
    else
        snprintf(buf, sizeof buf, "%s_%05d.snap", stem.c_str(), idx);
    return buf;
}

struct Context {
    RunConfig cfg;
    Grid g;
    PhysParams params;
    StepperConfig scfg;
    NoiseBasis basis;
};

Context make_context(const RunConfig& cfg) {
    Context ctx{cfg, cfg.grid(), cfg.phys_params(), cfg.stepper(), {}};
    if (cfg.noise_M > 0)
        ctx.basis = default_xi_basis(ctx.g, cfg.noise_M, cfg.noise_amplitude, cfg.noise_decay,
                                     cfg.noise_solenoidal);
    return ctx;
}

double state_energy(const StateVector& psi) {
    const double n = l2_norm(psi);
    return 0.5 * n * n;
}

DiagnosticsRecord record_deterministic(const Context& ctx, double t, const StateVector& psi,
                                       const MaterialLoop& la, const MaterialLoop& lo) {
    DiagnosticsRecord r;
    r.t = t;
    r.circulation_a = circulation(la, psi.u_a, ctx.params.coriolis, ctx.params.Ro_a);
    r.circulation_o = circulation(lo, psi.u_o, ctx.params.coriolis, ctx.params.Ro_o);
    r.energy = state_energy(psi);
    r.h_s_norm_det = sobolev_norm(psi, ctx.cfg.s);
    return r;
}

DiagnosticsRecord record_salt(const Context& ctx, double t, const Ensemble& ens,
                              const MaterialLoop& la, const MaterialLoop& lo) {
    DiagnosticsRecord r;
    r.t = t;
    const StateVector& m0 = ens.members.front();
    r.circulation_a = circulation(la, m0.u_a, ctx.params.coriolis, ctx.params.Ro_a);
    r.circulation_o = circulation(lo, m0.u_o, ctx.params.coriolis, ctx.params.Ro_o);
    double e = 0.0;
    for (const StateVector& m : ens.members) e += state_energy(m);
    r.energy = e / ens.size();
    const StateVector mean = ens.mean_state();
    r.theta_variance = ensemble_variance(ens, mean);
    r.h_s_norm_mean = sobolev_norm(mean, ctx.cfg.s);
    r.member_frozen_count = ens.frozen_count();
    return r;
}

DiagnosticsRecord record_lasalt(const Context& ctx, double t, const StateVector& expectation,
                                const Ensemble& ens, const MaterialLoop& la,
                                const MaterialLoop& lo) {
    DiagnosticsRecord r;
    r.t = t;
    r.circulation_a = circulation(la, expectation.u_a, ctx.params.coriolis, ctx.params.Ro_a);
    r.circulation_o = circulation(lo, expectation.u_o, ctx.params.coriolis, ctx.params.Ro_o);
    r.energy = state_energy(expectation);
    r.theta_variance = ensemble_variance(ens, expectation);
    r.variance_rhs = variance_rhs(ens, expectation, ctx.params, ctx.basis);
    r.h_s_norm_det = sobolev_norm(expectation, ctx.cfg.s);
    r.h_s_norm_mean = sobolev_norm(ens.mean_state(), ctx.cfg.s);
    r.member_frozen_count = ens.frozen_count();
    return r;
}

DiagnosticsRecord record_sam(const Context& ctx, double t, const CompressibleState& st,
                             const MaterialLoop& la) {
    DiagnosticsRecord r;
    r.t = t;
    r.circulation_a = circulation(la, st.u, st.coriolis, st.Ro);
    r.energy = energy_sam(st);
    r.casimir_q2 = casimir(st, [](double q) { return q * q; });
    return r;
}

CompressibleState make_sam_state(const Context& ctx) {
    CompressibleState st;
    st.u = VectorField(random_band_limited(ctx.g, ctx.cfg.init_kmax, ctx.cfg.init_amplitude,
                                           ctx.cfg.seed ^ 0x5a01),
                       random_band_limited(ctx.g, ctx.cfg.init_kmax, ctx.cfg.init_amplitude,
                                           ctx.cfg.seed ^ 0x5a02));
    ScalarField one(ctx.g);
    one.at(0, 0) = cplx{1.0, 0.0};
    st.D = one;
    st.D += random_band_limited(ctx.g, ctx.cfg.init_kmax, ctx.cfg.sam_D_perturb,
                                ctx.cfg.seed ^ 0x5a03);
    ScalarField th(ctx.g);
    th.at(0, 0) = cplx{ctx.cfg.sam_theta0, 0.0};
    st.theta = th;
    st.kappa = ctx.cfg.sam_kappa;
    st.alpha = ctx.cfg.sam_alpha;
    st.Ro = ctx.cfg.Ro_a;
    st.coriolis = ctx.params.coriolis;
    return st;
}

}  // namespace

std::string format_record(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << num(r.t) << ',' << num(r.circulation_a) << ',' << num(r.circulation_o) << ','
       << num(r.energy) << ',' << num(r.casimir_q2) << ',' << num(r.theta_variance) << ','
       << num(r.variance_rhs) << ',' << num(r.h_s_norm_det) << ',' << num(r.h_s_norm_mean)
       << ',' << r.member_frozen_count;
    return os.str();
}

void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records,
               const std::optional<double>& blowup_t) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    os << "t,circulation_a,circulation_o,energy,casimir_q2,theta_variance,variance_rhs,"
          "h_s_norm_det,h_s_norm_mean,member_frozen_count\n";
    for (const auto& r : records) os << format_record(r) << "\n";
    if (blowup_t) os << "# blowup t=" << num(*blowup_t) << "\n";
}

RunResult run(const RunConfig& cfg) {
    Context ctx = make_context(cfg);
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "config_resolved.cfg", std::ios::trunc);
        os << cfg.to_text();
    }
    if (cfg.snapshots && ctx.basis.M() > 0)
        write_snapshot((dir / "basis.snap").string(), snapshot_of_basis(ctx.basis, ctx.g));

    const long n_steps = std::lround(cfg.T / cfg.dt);
    const long out_every = std::max(1L, std::lround(cfg.output_interval / cfg.dt));
    const double max_spacing = 4.0 * ctx.g.dx();

    MaterialLoop la = make_circle_loop(cfg.loop_cx, cfg.loop_cy, cfg.loop_radius, cfg.loop_K);
    MaterialLoop lo = la;
    const NoiseBasis no_noise;

    RunResult result;
    result.csv_path = (dir / "diagnostics.csv").string();

    StateVector psi;
    StateVector expectation;
    Ensemble ens;
    CompressibleState sam;
    BrownianDriver sam_driver{cfg.seed, cfg.dt};
    uint64_t sam_step = 0;

    switch (cfg.mode) {
        case Mode::Deterministic:
            psi = random_state(ctx.g, cfg.init_kmax, cfg.init_amplitude, cfg.seed);
            break;
        case Mode::SALT:
            ens = Ensemble(cfg.members, ctx.g);
            psi = random_state(ctx.g, cfg.init_kmax, cfg.init_amplitude, cfg.seed);
            for (auto& m : ens.members) m = psi;
            ens.driver = BrownianDriver{cfg.seed, cfg.dt};
            break;
        case Mode::LASALT:
            expectation = random_state(ctx.g, cfg.init_kmax, cfg.init_amplitude, cfg.seed);
            ens = Ensemble(cfg.members, ctx.g);
            for (auto& m : ens.members) m = expectation;
            ens.driver = BrownianDriver{cfg.seed, cfg.dt};
            break;
        case Mode::SAM:
            sam = make_sam_state(ctx);
            break;
    }

    int out_idx = 0;
    auto emit = [&](double t) {
        DiagnosticsRecord r;
        switch (cfg.mode) {
            case Mode::Deterministic: r = record_deterministic(ctx, t, psi, la, lo); break;
            case Mode::SALT: r = record_salt(ctx, t, ens, la, lo); break;
            case Mode::LASALT: r = record_lasalt(ctx, t, expectation, ens, la, lo); break;
            case Mode::SAM: r = record_sam(ctx, t, sam, la); break;
        }
        result.records.push_back(r);
        if (cfg.snapshots) {
            switch (cfg.mode) {
                case Mode::Deterministic:
                    write_snapshot((dir / snap_name("state", out_idx, 0)).string(),
                                   snapshot_of_state(psi, t, "deterministic", 0, NAN));
                    break;
                case Mode::SALT:
                    for (int k = 0; k < ens.size(); ++k)
                        write_snapshot((dir / snap_name("state", out_idx, k)).string(),
                                       snapshot_of_state(ens.members[k], t, "salt", k,
                                                         ens.frozen_at[k]));
                    break;
                case Mode::LASALT:
                    write_snapshot((dir / snap_name("exp", out_idx, -1)).string(),
                                   snapshot_of_state(expectation, t, "lasalt", -1, NAN));
                    for (int k = 0; k < ens.size(); ++k)
                        write_snapshot((dir / snap_name("state", out_idx, k)).string(),
                                       snapshot_of_state(ens.members[k], t, "lasalt", k,
                                                         ens.frozen_at[k]));
                    break;
                case Mode::SAM:
                    write_snapshot((dir / snap_name("state", out_idx, 0)).string(),
                                   snapshot_of_sam(sam, t));
                    break;
            }
            write_snapshot((dir / snap_name("loop_a", out_idx, -1)).string(),
                           snapshot_of_loop(la, t, mode_name(cfg.mode)));
            if (cfg.mode != Mode::SAM)
                write_snapshot((dir / snap_name("loop_o", out_idx, -1)).string(),
                               snapshot_of_loop(lo, t, mode_name(cfg.mode)));
        }
        ++out_idx;
    };

    emit(0.0);
    for (long step = 0; step < n_steps; ++step) {
        const double t_next = (step + 1) * cfg.dt;
        try {
            switch (cfg.mode) {
                case Mode::Deterministic: {
                    StateVector next = step_deterministic(psi, ctx.params, ctx.scfg);
                    la = advect_loop(la, psi.u_a, &next.u_a, no_noise, {}, cfg.dt);
                    lo = advect_loop(lo, psi.u_o, &next.u_o, no_noise, {}, cfg.dt);
                    psi = std::move(next);
                    break;
                }
                case Mode::SALT: {
                    const VectorField prev_ua = ens.members.front().u_a;
                    const VectorField prev_uo = ens.members.front().u_o;
                    const auto dW0 =
                        sample_increments(ens.driver, 0, ens.step, ctx.basis.M());
                    step_salt_ensemble(ens, ctx.params, ctx.basis, ctx.scfg);
                    la = advect_loop(la, prev_ua, &ens.members.front().u_a, ctx.basis, dW0,
                                     cfg.dt, cfg.noise_sign);
                    lo = advect_loop(lo, prev_uo, &ens.members.front().u_o, no_noise, {},
                                     cfg.dt);
                    break;
                }
                case Mode::LASALT: {
                    const VectorField prev_ua = expectation.u_a;
                    const VectorField prev_uo = expectation.u_o;
                    const auto dW0 =
                        sample_increments(ens.driver, 0, ens.step, ctx.basis.M());
                    step_lasalt(expectation, ens, ctx.params, ctx.basis, ctx.scfg);
                    la = advect_loop(la, prev_ua, &expectation.u_a, ctx.basis, dW0, cfg.dt,
                                     cfg.noise_sign);
                    lo = advect_loop(lo, prev_uo, &expectation.u_o, no_noise, {}, cfg.dt);
                    break;
                }
                case Mode::SAM: {
                    const auto dW = sample_increments(sam_driver, 0, sam_step, ctx.basis.M());
                    CompressibleState next = step_sam_compressible(sam, ctx.basis, ctx.scfg, dW);
                    la = advect_loop(la, sam.u, &next.u, ctx.basis, dW, cfg.dt, cfg.noise_sign);
                    sam = std::move(next);
                    ++sam_step;
                    break;
                }
            }
        } catch (const BlowupError&) {
            result.blowup_t = step * cfg.dt;
            break;
        } catch (const PositivityError&) {
            result.blowup_t = step * cfg.dt;
            break;
        }
        resample_loop(la, max_spacing);
        resample_loop(lo, max_spacing);
        if ((step + 1) % out_every == 0) emit(t_next);
        result.t_end = t_next;
    }

    result.frozen_count = (cfg.mode == Mode::SALT || cfg.mode == Mode::LASALT)
                              ? ens.frozen_count()
                              : 0;
    write_csv(result.csv_path, result.records, result.blowup_t);
    return result;
}

std::vector<DiagnosticsRecord> diag_recompute(const std::string& dir_s) {
    const fs::path dir(dir_s);
    std::ifstream cfs(dir / "config_resolved.cfg");
    if (!cfs) throw std::runtime_error("diag: missing config_resolved.cfg in " + dir_s);
    std::stringstream buf;
    buf << cfs.rdbuf();
    const RunConfig cfg = parse_config(buf.str());
    Context ctx = make_context(cfg);
    if (fs::exists(dir / "basis.snap"))
        ctx.basis = basis_from_snapshot(read_snapshot((dir / "basis.snap").string()));

    std::vector<DiagnosticsRecord> records;
    for (int idx = 0;; ++idx) {
        const fs::path la_path = dir / snap_name("loop_a", idx, -1);
        if (!fs::exists(la_path)) break;
        const Snapshot la_snap = read_snapshot(la_path.string());
        const MaterialLoop la = loop_from_snapshot(la_snap);
        MaterialLoop lo;
        const fs::path lo_path = dir / snap_name("loop_o", idx, -1);
        if (fs::exists(lo_path)) lo = loop_from_snapshot(read_snapshot(lo_path.string()));
        const double t = la_snap.t;

        switch (cfg.mode) {
            case Mode::Deterministic: {
                const StateVector psi = state_from_snapshot(
                    read_snapshot((dir / snap_name("state", idx, 0)).string()));
                records.push_back(record_deterministic(ctx, t, psi, la, lo));
                break;
            }
            case Mode::SALT:
            case Mode::LASALT: {
                Ensemble ens(cfg.members, ctx.g);
                for (int k = 0; k < cfg.members; ++k) {
                    const Snapshot s =
                        read_snapshot((dir / snap_name("state", idx, k)).string());
                    ens.members[k] = state_from_snapshot(s);
                    ens.frozen_at[k] = s.frozen_at;
                }
                ens.t = t;
                if (cfg.mode == Mode::SALT) {
                    records.push_back(record_salt(ctx, t, ens, la, lo));
                } else {
                    const StateVector expectation = state_from_snapshot(
                        read_snapshot((dir / snap_name("exp", idx, -1)).string()));
                    records.push_back(record_lasalt(ctx, t, expectation, ens, la, lo));
                }
                break;
            }
            case Mode::SAM: {
                const Snapshot s =
                    read_snapshot((dir / snap_name("state", idx, 0)).string());
                const CompressibleState st = sam_from_snapshot(
                    s, cfg.sam_kappa, cfg.sam_alpha, cfg.Ro_a, ctx.params.coriolis);
                records.push_back(record_sam(ctx, t, st, la));
                break;
            }
        }
    }
    write_csv((dir / "diagnostics_recomputed.csv").string(), records);
    return records;
}

}  // namespace oacm
