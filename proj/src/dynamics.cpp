#include "oacm/dynamics.hpp"

#include <cmath>

#include "oacm/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oacm {

VectorField Ensemble::mean_u_a() const {
    VectorField acc(members.front().grid());
    for (const StateVector& m : members) acc += m.u_a;
    acc *= 1.0 / size();
    return acc;
}

StateVector Ensemble::mean_state() const {
    StateVector acc(members.front().grid());
    for (const StateVector& m : members) acc += m;
    acc *= 1.0 / size();
    return acc;
}

AtmosPair Ensemble::mean_atmos() const {
    AtmosPair acc(members.front().grid());
    for (const StateVector& m : members) {
        acc.u += m.u_a;
        acc.th += m.th_a;
    }
    acc *= 1.0 / size();
    return acc;
}

namespace {

// SSP-RK3 with a per-stage post-processing hook (ocean reprojection)
template <class State, class Drift, class Post>
State ssp_rk3(const State& s0, double dt, Drift&& f, Post&& post) {
    State s1 = s0;
    s1.axpy(dt, f(s0, 0));
    post(s1);
    State s2 = s0;
    s2 *= 3.0;
    s2 += s1;
    State k1 = f(s1, 1);
    s2.axpy(dt, k1);
    s2 *= 0.25;
    post(s2);
    State s3 = s0;
    State k2 = f(s2, 2);
    State tmp = s2;
    tmp.axpy(dt, k2);
    tmp *= 2.0;
    s3 += tmp;
    s3 *= 1.0 / 3.0;
    post(s3);
    return s3;
}

void check_finite(const StateVector& psi, const char* where) {
    if (!all_finite(psi)) throw BlowupError(std::string(where) + ": non-finite state", NAN);
}

}  // namespace

StateVector step_deterministic(const StateVector& psi, const PhysParams& params,
                               const StepperConfig& cfg) {
    StateVector out = ssp_rk3(
        psi, cfg.dt,
        [&](const StateVector& s, int) { return rhs_deterministic(s, params, cfg.trunc); },
        [](StateVector& s) { project_ocean(s); });
    check_finite(out, "step_deterministic");
    return out;
}

StateVector salt_drift(const StateVector& psi, const VectorField& mean_u_a,
                       const PhysParams& params, const NoiseBasis& basis,
                       const StepperConfig& cfg, StochasticMode smode) {
    if (!all_finite(psi)) throw BlowupError("salt_drift: non-finite state", NAN);
    const double g = cutoff_g(sobolev_norm(psi, cfg.trunc.s), cfg.trunc);
    StateVector out = dissipation_L(psi, params);
    out -= transport_B(psi);
    out -= linear_C(psi, params);
    out -= coupling_D(psi, mean_u_a, params);
    if (smode == StochasticMode::Ito && basis.M() > 0) {
        AtmosPair corr = ito_correction_salt(psi.atmos(), basis, params);
        out.u_a += corr.u;
        out.th_a += corr.th;
    }
    out *= g;
    return out;
}

namespace {

// E_i is linear in xi_i, so sum_i dW_i E_i(psi) = E(psi, sum_i dW_i xi_i):
// one operator evaluation per increment vector regardless of M
VectorField effective_xi(const NoiseBasis& basis, const std::vector<double>& dW) {
    VectorField eff(basis.xis.front().grid());
    for (int i = 0; i < basis.M(); ++i) eff.axpy(dW[i], basis.xis[i]);
    return eff;
}

// sum_i dW_i * (-g E_i(psi_a)) folded into a StateVector-shaped increment
StateVector salt_noise_increment(const StateVector& psi, const PhysParams& params,
                                 const NoiseBasis& basis, const TruncationConfig& trunc,
                                 const std::vector<double>& dW) {
    StateVector out(psi.grid());
    if (basis.M() == 0) return out;
    const double g = cutoff_g(sobolev_norm(psi, trunc.s), trunc);
    if (g == 0.0) return out;
    AtmosPair acc = salt_E(psi.atmos(), effective_xi(basis, dW), params);
    acc *= -g;
    out.u_a = std::move(acc.u);
    out.th_a = std::move(acc.th);
    return out;
}

}  // namespace

StateVector step_salt_member(const StateVector& psi, const VectorField& mean_u_a,
                             const PhysParams& params, const NoiseBasis& basis,
                             const StepperConfig& cfg, const std::vector<double>& dW) {
    if (basis.M() == 0) return step_deterministic(psi, params, cfg);
    if (static_cast<int>(dW.size()) < basis.M())
        throw std::invalid_argument("step_salt_member: increment count below basis size");
    StateVector out(psi.grid());
    if (cfg.scheme == Scheme::EulerMaruyamaIto) {
        out = psi;
        out.axpy(cfg.dt, salt_drift(psi, mean_u_a, params, basis, cfg, StochasticMode::Ito));
        out += salt_noise_increment(psi, params, basis, cfg.trunc, dW);
        project_ocean(out);
    } else {
        // Heun (Stratonovich midpoint)
        const StateVector a0 = salt_drift(psi, mean_u_a, params, basis, cfg, StochasticMode::Stratonovich);
        const StateVector n0 = salt_noise_increment(psi, params, basis, cfg.trunc, dW);
        StateVector pred = psi;
        pred.axpy(cfg.dt, a0);
        pred += n0;
        project_ocean(pred);
        const StateVector a1 = salt_drift(pred, mean_u_a, params, basis, cfg, StochasticMode::Stratonovich);
        const StateVector n1 = salt_noise_increment(pred, params, basis, cfg.trunc, dW);
        out = psi;
        out.axpy(0.5 * cfg.dt, a0);
        out.axpy(0.5 * cfg.dt, a1);
        out.axpy(0.5, n0);
        out.axpy(0.5, n1);
        project_ocean(out);
    }
    check_finite(out, "step_salt_member");
    return out;
}

namespace {

template <class StepFn>
void advance_members(Ensemble& ens, const StepperConfig& cfg, StepFn&& step_one) {
    const int N = ens.size();
    bool blew_up = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < N; ++k) {
        if (ens.frozen(k)) continue;
        try {
            ens.members[k] = step_one(k);
        } catch (const BlowupError&) {
            // freeze-and-flag; optionally escalated after the loop (throwing
            // across a parallel region is not allowed)
            ens.frozen_at[k] = ens.t;
            ens.error_flag[k] = 1;
            blew_up = true;
            continue;
        }
        if (detect_stop(ens.members[k], cfg.trunc)) ens.frozen_at[k] = ens.t + cfg.dt;
    }
    if (blew_up && cfg.abort_on_member_blowup)
        throw BlowupError("ensemble member blow-up", ens.t);
}

}  // namespace

void step_salt_ensemble(Ensemble& ens, const PhysParams& params, const NoiseBasis& basis,
                        const StepperConfig& cfg) {
    if (ens.size() < 1) throw std::invalid_argument("step_salt_ensemble: empty ensemble");
    ens.driver.dt = cfg.dt;
    const VectorField mean = ens.mean_u_a();
    const uint64_t step = ens.step;
    advance_members(ens, cfg, [&](int k) {
        const auto dW = sample_increments(ens.driver, static_cast<uint64_t>(k), step, basis.M());
        return step_salt_member(ens.members[k], mean, params, basis, cfg, dW);
    });
    ens.t += cfg.dt;
    ens.step += 1;
}

StateVector lasalt_expectation_drift(const StateVector& psi_hat, const PhysParams& params,
                                     const NoiseBasis& basis, const StepperConfig& cfg) {
    StateVector out = rhs_deterministic(psi_hat, params, cfg.trunc);
    if (basis.M() > 0) {
        const AtmosPair e2 = lasalt_E2_explicit(psi_hat.u_a, psi_hat.th_a, basis, params);
        out.u_a += e2.u;    // +1/2 sum L_xi^2((u_hat + R/Ro).dx)
        out.th_a -= e2.th;  // +1/2 sum (xi.grad)^2 theta_hat
    }
    return out;
}

AtmosPair lasalt_member_drift(const AtmosPair& psi_a, const StateVector& expectation,
                              const PhysParams& params) {
    const VectorField& u_hat = expectation.u_a;
    AtmosPair out(psi_a.grid());

    VectorField vel = advect(u_hat, psi_a.u);
    VectorField diff = psi_a.u;
    diff -= u_hat;
    {  // (u - u_hat)_j grad u_hat^j
        ScalarField cx = multiply(diff.x(), ddx(u_hat.x())) + multiply(diff.y(), ddx(u_hat.y()));
        ScalarField cy = multiply(diff.x(), ddy(u_hat.x())) + multiply(diff.y(), ddy(u_hat.y()));
        vel += VectorField(std::move(cx), std::move(cy));
    }
    VectorField rot = scale(params.coriolis.f, perp(u_hat));
    rot += gradient(psi_a.th);
    vel.axpy(1.0 / params.Ro_a, rot);
    out.u = -1.0 * vel;
    if (params.nu_u_a() != 0.0) out.u.axpy(params.nu_u_a(), laplacian(psi_a.u));

    ScalarField th = advect(u_hat, psi_a.th);
    if (params.gamma != 0.0) {
        ScalarField cpl = psi_a.th - expectation.th_o;
        cpl *= params.gamma;
        th += cpl;
    }
    out.th = -1.0 * th;
    if (params.nu_th_a() != 0.0) out.th.axpy(params.nu_th_a(), laplacian(psi_a.th));
    return out;
}

namespace {

AtmosPair lasalt_noise_increment(const AtmosPair& psi_a, const PhysParams& params,
                                 const NoiseBasis& basis, const std::vector<double>& dW) {
    if (basis.M() == 0) return AtmosPair(psi_a.grid());
    AtmosPair acc = salt_E(psi_a, effective_xi(basis, dW), params);
    acc *= -1.0;
    return acc;
}

}  // namespace

AtmosPair step_lasalt_member(const AtmosPair& psi_a, const StateVector& exp_t,
                             const StateVector& exp_next, const PhysParams& params,
                             const NoiseBasis& basis, const StepperConfig& cfg,
                             const std::vector<double>& dW) {
    AtmosPair out(psi_a.grid());
    if (cfg.scheme == Scheme::EulerMaruyamaIto) {
        out = psi_a;
        AtmosPair drift = lasalt_member_drift(psi_a, exp_t, params);
        drift += ito_correction_salt(psi_a, basis, params);
        out.axpy(cfg.dt, drift);
        out += lasalt_noise_increment(psi_a, params, basis, dW);
    } else {
        const AtmosPair a0 = lasalt_member_drift(psi_a, exp_t, params);
        const AtmosPair n0 = lasalt_noise_increment(psi_a, params, basis, dW);
        AtmosPair pred = psi_a;
        pred.axpy(cfg.dt, a0);
        pred += n0;
        const AtmosPair a1 = lasalt_member_drift(pred, exp_next, params);
        const AtmosPair n1 = lasalt_noise_increment(pred, params, basis, dW);
        out = psi_a;
        out.axpy(0.5 * cfg.dt, a0);
        out.axpy(0.5 * cfg.dt, a1);
        out.axpy(0.5, n0);
        out.axpy(0.5, n1);
    }
    if (!all_finite(out.u.x()) || !all_finite(out.u.y()) || !all_finite(out.th))
        throw BlowupError("step_lasalt_member: non-finite state", NAN);
    return out;
}

void step_lasalt(StateVector& expectation, Ensemble& ens, const PhysParams& params,
                 const NoiseBasis& basis, const StepperConfig& cfg) {
    ens.driver.dt = cfg.dt;
    const StateVector exp_old = expectation;
    StateVector exp_new;
    if (basis.M() == 0) {
        // zero-noise reduction: expectation and members take the identical
        // deterministic RK3 path, so equal states stay bit-equal
        exp_new = step_deterministic(exp_old, params, cfg);
        advance_members(ens, cfg,
                        [&](int k) { return step_deterministic(ens.members[k], params, cfg); });
    } else {
        exp_new = ssp_rk3(
            exp_old, cfg.dt,
            [&](const StateVector& s, int) { return lasalt_expectation_drift(s, params, basis, cfg); },
            [](StateVector& s) { project_ocean(s); });
        check_finite(exp_new, "step_lasalt");
        const uint64_t step = ens.step;
        advance_members(ens, cfg, [&](int k) {
            const auto dW = sample_increments(ens.driver, static_cast<uint64_t>(k), step, basis.M());
            StateVector m = ens.members[k];
            m.set_atmos(step_lasalt_member(m.atmos(), exp_old, exp_new, params, basis, cfg, dW));
            m.u_o = exp_new.u_o;  // ocean is shared and deterministic
            m.th_o = exp_new.th_o;
            return m;
        });
    }
    expectation = exp_new;
    ens.t += cfg.dt;
    ens.step += 1;
}

AtmosPair fluctuation(const AtmosPair& member_psi_a, const AtmosPair& expectation_psi_a) {
    AtmosPair out = member_psi_a;
    out -= expectation_psi_a;
    return out;
}

namespace {

// internal SAM state: (u, D, m = D*theta), all advanced together
struct SamCore {
    VectorField u;
    ScalarField D;
    ScalarField m;
    SamCore() = default;
    explicit SamCore(const Grid& g) : u(g), D(g), m(g) {}
    SamCore& operator+=(const SamCore& o) {
        u += o.u;
        D += o.D;
        m += o.m;
        return *this;
    }
    SamCore& operator*=(double a) {
        u *= a;
        D *= a;
        m *= a;
        return *this;
    }
    void axpy(double a, const SamCore& o) {
        u.axpy(a, o.u);
        D.axpy(a, o.D);
        m.axpy(a, o.m);
    }
};

ScalarField pointwise_ratio(const ScalarField& num, const ScalarField& den) {
    std::vector<double> pn = to_physical(num), pd = to_physical(den);
    for (size_t i = 0; i < pn.size(); ++i) pn[i] /= pd[i];
    return to_spectral(num.grid(), pn);
}

SamCore sam_drift(const SamCore& s, const CompressibleState& ref) {
    SamCore out(s.u.grid());
    const ScalarField th = pointwise_ratio(s.m, s.D);
    // pressure force -kappa*alpha*theta*grad((D theta)^(alpha-1)), the
    // variational form that pairs with the energy integral
    const double ex = ref.alpha - 1.0;
    const ScalarField pm = apply_pointwise(s.m, [ex](double v) { return std::pow(v, ex); });
    VectorField force = scale(th, gradient(pm));
    force *= ref.kappa * ref.alpha;

    out.u = -1.0 * advect(s.u, s.u);
    out.u.axpy(-1.0 / ref.Ro, scale(ref.coriolis.f, perp(s.u)));
    out.u -= force;
    out.D = -1.0 * divergence(scale(s.D, s.u));
    out.m = -1.0 * divergence(scale(s.m, s.u));
    return out;
}

SamCore sam_noise_increment(const SamCore& s, const CompressibleState& ref,
                            const NoiseBasis& basis, const std::vector<double>& dW) {
    SamCore out(s.u.grid());
    PhysParams p;
    p.Ro_a = ref.Ro;
    p.coriolis = ref.coriolis;
    const AtmosPair pa{s.u, ScalarField(s.u.grid())};
    const VectorField eff = effective_xi(basis, dW);
    out.u.axpy(-1.0, salt_E(pa, eff, p).u);
    out.D.axpy(-1.0, divergence(scale(s.D, eff)));
    out.m.axpy(-1.0, divergence(scale(s.m, eff)));
    return out;
}

}  // namespace

CompressibleState step_sam_compressible(const CompressibleState& state, const NoiseBasis& basis,
                                        const StepperConfig& cfg,
                                        const std::vector<double>& dW) {
    SamCore s(state.u.grid());
    s.u = state.u;
    s.D = state.D;
    s.m = multiply(state.D, state.theta);
    SamCore out;
    if (basis.M() == 0) {
        out = ssp_rk3(s, cfg.dt, [&](const SamCore& c, int) { return sam_drift(c, state); },
                      [](SamCore&) {});
    } else {
        if (static_cast<int>(dW.size()) < basis.M())
            throw std::invalid_argument("step_sam_compressible: increment count below basis size");
        const SamCore a0 = sam_drift(s, state);
        const SamCore n0 = sam_noise_increment(s, state, basis, dW);
        SamCore pred = s;
        pred.axpy(cfg.dt, a0);
        pred += n0;
        const SamCore a1 = sam_drift(pred, state);
        const SamCore n1 = sam_noise_increment(pred, state, basis, dW);
        out = s;
        out.axpy(0.5 * cfg.dt, a0);
        out.axpy(0.5 * cfg.dt, a1);
        out.axpy(0.5, n0);
        out.axpy(0.5, n1);
    }
    CompressibleState next = state;
    next.u = std::move(out.u);
    next.D = std::move(out.D);
    next.theta = pointwise_ratio(out.m, next.D);
    const auto pd = to_physical(next.D);
    const auto pt = to_physical(next.theta);
    for (size_t i = 0; i < pd.size(); ++i)
        if (!(pd[i] > 0.0) || !(pt[i] > 0.0))
            throw PositivityError("step_sam_compressible: D or theta lost positivity");
    return next;
}

bool detect_stop(const StateVector& psi, const TruncationConfig& cfg) {
    return sobolev_norm(psi, cfg.s) >= cfg.R_cut;
}

}  // namespace oacm
