#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "oacm/dynamics.hpp"
#include "oacm/errors.hpp"

using namespace oacm;

namespace {

constexpr double kPi = std::numbers::pi;

const Grid g32{32, 2.0 * kPi};

PhysParams base_params() {
    PhysParams p;
    p.coriolis = make_coriolis(g32, 1.0);
    p.gamma = -0.1;
    p.sigma = -0.2;
    return p;
}

StepperConfig base_cfg() {
    StepperConfig c;
    c.dt = 1e-3;
    c.trunc = TruncationConfig{1e6, 1.0, 2};
    return c;
}

bool fields_identical(const ScalarField& a, const ScalarField& b) {
    return a.coeffs().size() == b.coeffs().size() &&
           std::memcmp(a.coeffs().data(), b.coeffs().data(),
                       a.coeffs().size() * sizeof(cplx)) == 0;
}

bool states_identical(const StateVector& a, const StateVector& b) {
    return fields_identical(a.u_a.x(), b.u_a.x()) && fields_identical(a.u_a.y(), b.u_a.y()) &&
           fields_identical(a.th_a, b.th_a) && fields_identical(a.u_o.x(), b.u_o.x()) &&
           fields_identical(a.u_o.y(), b.u_o.y()) && fields_identical(a.th_o, b.th_o);
}

double l2(const AtmosPair& p) { return std::sqrt(l2_norm_sq(p)); }

}  // namespace

TEST_CASE("rest state is a fixed point") {
    const PhysParams p = base_params();
    const StepperConfig cfg = base_cfg();
    StateVector psi(g32);
    for (int s = 0; s < 5; ++s) psi = step_deterministic(psi, p, cfg);
    CHECK(l2_norm(psi) == 0.0);
}

TEST_CASE("uniform temperatures in thermal balance are an equilibrium") {
    const PhysParams p = base_params();
    const StepperConfig cfg = base_cfg();
    StateVector psi(g32);
    psi.th_a.at(0, 0) = 0.7;
    psi.th_o.at(0, 0) = 0.7;  // equal means: the gamma coupling cancels
    StateVector out = psi;
    for (int s = 0; s < 5; ++s) out = step_deterministic(out, p, cfg);
    CHECK(l2_norm(out - psi) < 1e-14);
}

TEST_CASE("empty basis reduces every stepper to the deterministic path") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    const NoiseBasis empty;
    const StateVector psi0 = random_state(g32, 4, 0.1, 51);
    const StateVector det = step_deterministic(psi0, p, cfg);

    cfg.scheme = Scheme::HeunStratonovich;
    cfg.mode = Mode::SALT;
    CHECK(states_identical(step_salt_member(psi0, psi0.u_a, p, empty, cfg, {}), det));

    Ensemble ens(2, g32);
    ens.members[0] = psi0;
    ens.members[1] = psi0;
    step_salt_ensemble(ens, p, empty, cfg);
    CHECK(states_identical(ens.members[0], det));
    CHECK(states_identical(ens.members[1], det));

    cfg.mode = Mode::LASALT;
    StateVector expectation = psi0;
    Ensemble la(1, g32);
    la.members[0] = psi0;
    step_lasalt(expectation, la, p, empty, cfg);
    CHECK(states_identical(expectation, det));
    CHECK(states_identical(la.members[0], det));
}

TEST_CASE("SALT drift: cutoff scales the whole bracket and Ito adds the correction") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.1, 2.0);
    const StateVector psi = random_state(g32, 4, 0.1, 52);

    const StateVector strat = salt_drift(psi, psi.u_a, p, basis, cfg, StochasticMode::Stratonovich);
    CHECK(l2_norm(strat - rhs_deterministic(psi, p, cfg.trunc)) < 1e-13);

    StateVector ito = salt_drift(psi, psi.u_a, p, basis, cfg, StochasticMode::Ito);
    ito -= strat;
    const AtmosPair corr = ito_correction_salt(psi.atmos(), basis, p);
    CHECK(l2_norm(ito.u_a - corr.u) < 1e-13);
    CHECK(l2_norm(ito.th_a - corr.th) < 1e-13);

    // a zero cutoff kills the drift entirely
    cfg.trunc = TruncationConfig{0.0, 1e-12, 2};
    CHECK(l2_norm(salt_drift(psi, psi.u_a, p, basis, cfg, StochasticMode::Stratonovich)) == 0.0);
}

TEST_CASE("stop detection uses a closed threshold") {
    const StateVector psi = random_state(g32, 4, 0.1, 53);
    const double norm = sobolev_norm(psi, 2);
    CHECK(detect_stop(psi, TruncationConfig{norm, 1.0, 2}));
    CHECK(detect_stop(psi, TruncationConfig{norm * 0.5, 1.0, 2}));
    CHECK(!detect_stop(psi, TruncationConfig{norm * 1.0001, 1.0, 2}));
}

TEST_CASE("members at the truncation radius freeze and stay bit-identical") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    cfg.scheme = Scheme::HeunStratonovich;
    cfg.mode = Mode::SALT;
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.05, 2.0);
    const StateVector psi0 = random_state(g32, 4, 0.1, 54);
    cfg.trunc = TruncationConfig{0.5 * sobolev_norm(psi0, 2), 0.01, 2};

    Ensemble ens(2, g32);
    ens.members[0] = psi0;
    ens.members[1] = psi0;
    ens.driver = BrownianDriver{54, cfg.dt};
    step_salt_ensemble(ens, p, basis, cfg);
    CHECK(ens.frozen_count() == 2);
    CHECK(ens.error_flag[0] == 0);  // frozen by the radius, not by blow-up
    const StateVector frozen0 = ens.members[0];
    for (int s = 0; s < 5; ++s) step_salt_ensemble(ens, p, basis, cfg);
    CHECK(states_identical(ens.members[0], frozen0));
}

TEST_CASE("member blow-up freezes and flags, or aborts when requested") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    cfg.scheme = Scheme::HeunStratonovich;
    cfg.mode = Mode::SALT;
    const NoiseBasis basis = default_xi_basis(g32, 1, 0.05, 2.0);
    Ensemble ens(2, g32);
    ens.members[0] = random_state(g32, 4, 0.1, 55);
    ens.members[1] = ens.members[0];
    ens.members[1].th_a.at(1, 1) = cplx{std::nan(""), 0.0};
    ens.driver = BrownianDriver{55, cfg.dt};
    step_salt_ensemble(ens, p, basis, cfg);
    CHECK(ens.frozen_count() == 1);
    CHECK(ens.error_flag[1] == 1);
    CHECK(ens.error_flag[0] == 0);

    Ensemble ens2(1, g32);
    ens2.members[0] = ens.members[1];
    ens2.driver = BrownianDriver{55, cfg.dt};
    cfg.abort_on_member_blowup = true;
    CHECK_THROWS_AS(step_salt_ensemble(ens2, p, basis, cfg), BlowupError);
}

TEST_CASE("ensemble means use a fixed summation order") {
    Ensemble ens(3, g32);
    ens.members[0] = random_state(g32, 4, 0.1, 56);
    ens.members[1] = random_state(g32, 4, 0.1, 57);
    ens.members[2] = random_state(g32, 4, 0.1, 58);
    StateVector mean(g32);
    for (const auto& m : ens.members) mean += m;
    mean *= 1.0 / 3.0;
    CHECK(l2_norm(ens.mean_state() - mean) < 1e-15);
    CHECK(l2_norm(ens.mean_u_a() - mean.u_a) < 1e-15);
}

TEST_CASE("LA-SALT expectation drift is deterministic tendency plus the expected-drift term") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.1, 2.0);
    const StateVector psi = random_state(g32, 4, 0.1, 59);
    const StateVector drift = lasalt_expectation_drift(psi, p, basis, cfg);
    StateVector direct = rhs_deterministic(psi, p, cfg.trunc);
    const AtmosPair e2 = lasalt_E2_explicit(psi.u_a, psi.th_a, basis, p);
    direct.u_a += e2.u;
    direct.th_a -= e2.th;
    CHECK(l2_norm(drift - direct) < 1e-14);
    // the ocean block carries no noise contribution
    CHECK(l2_norm(drift.u_o - rhs_deterministic(psi, p, cfg.trunc).u_o) < 1e-14);
}

TEST_CASE("LA-SALT member map is affine in the member for a fixed expectation path") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    cfg.scheme = Scheme::HeunStratonovich;
    cfg.mode = Mode::LASALT;
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.1, 2.0);
    const StateVector exp_t = random_state(g32, 4, 0.1, 60);
    const StateVector exp_next = random_state(g32, 4, 0.1, 61);
    const AtmosPair base = exp_t.atmos();
    AtmosPair delta(VectorField(random_band_limited(g32, 3, 0.05, 62),
                                random_band_limited(g32, 3, 0.05, 63)),
                    random_band_limited(g32, 3, 0.05, 64));
    const std::vector<double> dW = sample_increments(BrownianDriver{66, cfg.dt}, 0, 0, basis.M());

    auto step = [&](const AtmosPair& a) {
        return step_lasalt_member(a, exp_t, exp_next, p, basis, cfg, dW);
    };
    const AtmosPair s0 = step(base);
    AtmosPair d1 = step(base + delta);
    d1 -= s0;
    AtmosPair d2 = step(base + 2.0 * delta);
    d2 -= s0;
    d2 -= 2.0 * d1;
    CHECK(l2(d2) < 1e-10 * std::max(1.0, l2(d1)));
}

TEST_CASE("LA-SALT members inherit the expectation ocean") {
    const PhysParams p = base_params();
    StepperConfig cfg = base_cfg();
    cfg.scheme = Scheme::HeunStratonovich;
    cfg.mode = Mode::LASALT;
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.05, 2.0);
    StateVector expectation = random_state(g32, 4, 0.1, 65);
    Ensemble ens(2, g32);
    ens.members[0] = expectation;
    ens.members[1] = random_state(g32, 4, 0.1, 66);
    ens.driver = BrownianDriver{67, cfg.dt};
    step_lasalt(expectation, ens, p, basis, cfg);
    for (const auto& m : ens.members) {
        CHECK(fields_identical(m.u_o.x(), expectation.u_o.x()));
        CHECK(fields_identical(m.u_o.y(), expectation.u_o.y()));
        CHECK(fields_identical(m.th_o, expectation.th_o));
    }
}

TEST_CASE("compressible step conserves the integrated buoyancy exactly") {
    const StepperConfig cfg = base_cfg();
    CompressibleState st;
    st.u = VectorField(random_band_limited(g32, 4, 0.2, 68), random_band_limited(g32, 4, 0.2, 69));
    st.D = random_band_limited(g32, 4, 0.1, 70);
    st.D.at(0, 0) += 1.0;
    st.theta = ScalarField(g32);
    st.theta.at(0, 0) = 1.0;
    st.coriolis = make_coriolis(g32, 1.0);
    const double mass0 = integral(multiply(st.D, st.theta));
    CompressibleState out = st;
    for (int s = 0; s < 10; ++s) out = step_sam_compressible(out, NoiseBasis{}, cfg);
    const double mass1 = integral(multiply(out.D, out.theta));
    CHECK(std::abs(mass1 - mass0) < 1e-12 * std::abs(mass0));
}

TEST_CASE("compressible step rejects non-positive density") {
    const StepperConfig cfg = base_cfg();
    CompressibleState st;
    st.u = VectorField(g32);
    st.D = random_band_limited(g32, 2, 2.0, 71);  // dips far below zero
    st.theta = ScalarField(g32);
    st.theta.at(0, 0) = 1.0;
    st.coriolis = make_coriolis(g32, 1.0);
    CHECK_THROWS_AS(step_sam_compressible(st, NoiseBasis{}, cfg), PositivityError);
}
