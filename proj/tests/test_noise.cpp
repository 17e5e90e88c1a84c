#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oacm/noise.hpp"

using namespace oacm;

namespace {

constexpr double kPi = std::numbers::pi;

const Grid g32{32, 2.0 * kPi};

ScalarField from_fn(const Grid& g, const std::function<double(double, double)>& fn) {
    std::vector<double> s(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) s[ix * g.n + iy] = fn(g.coord(ix), g.coord(iy));
    return to_spectral(g, s);
}

double max_err(const ScalarField& f, const std::function<double(double, double)>& fn) {
    const Grid& g = f.grid();
    const std::vector<double> s = to_physical(f);
    double m = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            m = std::max(m, std::abs(s[ix * g.n + iy] - fn(g.coord(ix), g.coord(iy))));
    return m;
}

PhysParams base_params() {
    PhysParams p;
    p.coriolis = make_coriolis(g32, 1.0);
    return p;
}

VectorField const_xi(double a, double b) {
    VectorField xi(g32);
    xi.x().at(0, 0) = a;
    xi.y().at(0, 0) = b;
    return xi;
}

double l2(const AtmosPair& p) { return std::sqrt(l2_norm_sq(p)); }

// Cartan-formula Lie derivative of a circulation 1-form:
// (L_xi (v.dx))^sharp = (curl v) xi^perp + grad(xi . v)
VectorField lie_oneform(const VectorField& xi, const VectorField& v) {
    VectorField out = scale(curl_z(v), perp(xi));
    out += gradient(dot(xi, v));
    return out;
}

}  // namespace

TEST_CASE("noise operator splits into linear and affine parts") {
    const PhysParams p = base_params();
    const VectorField xi = default_xi_basis(g32, 3, 0.2, 1.0).xis[2];
    const AtmosPair psi(
        VectorField(random_band_limited(g32, 4, 0.5, 41), random_band_limited(g32, 4, 0.5, 42)),
        random_band_limited(g32, 4, 0.5, 43));
    AtmosPair whole = salt_E(psi, xi, p);
    whole -= salt_E_linear(psi, xi);
    whole -= salt_E_affine(xi, p);
    CHECK(l2(whole) < 1e-13);
    // the affine part carries no temperature component
    CHECK(l2_norm(salt_E_affine(xi, p).th) == 0.0);
}

TEST_CASE("affine part vanishes for a uniform x-translation") {
    // the rotation potential R = f0 cos(y) e_x is invariant under
    // translation in x, so L_xi(R.dx) = 0 for constant xi = e_x
    const PhysParams p = base_params();
    CHECK(l2(salt_E_affine(const_xi(1.0, 0.0), p)) < 1e-12);
    // a y-translation does not leave R invariant
    CHECK(l2(salt_E_affine(const_xi(0.0, 1.0), p)) > 1e-2);
}

TEST_CASE("noise operator against closed forms") {
    const PhysParams p = base_params();
    AtmosPair psi(g32);
    psi.th = from_fn(g32, [](double x, double) { return std::sin(x); });
    psi.u = VectorField(ScalarField(g32), from_fn(g32, [](double x, double) { return std::cos(x); }));
    // transport by a constant x-translation
    const AtmosPair e1 = salt_E(psi, const_xi(1.0, 0.0), p);
    CHECK(max_err(e1.th, [](double x, double) { return std::cos(x); }) < 1e-12);
    CHECK(max_err(e1.u.y(), [](double x, double) { return -std::sin(x); }) < 1e-12);
    CHECK(l2_norm(e1.u.x()) < 1e-12);
    // shear xi = (sin y, 0): transport + the u_j grad xi^j stretch term
    const VectorField xi(from_fn(g32, [](double, double y) { return std::sin(y); }),
                         ScalarField(g32));
    const AtmosPair lin = salt_E_linear(psi, xi);
    // (xi.grad)u = (0, -sin y sin x); u_j grad xi^j = u_x grad(sin y) = 0
    CHECK(l2_norm(lin.u.x()) < 1e-12);
    CHECK(max_err(lin.u.y(), [](double x, double y) { return -std::sin(y) * std::sin(x); }) <
          1e-12);
    CHECK(max_err(lin.th, [](double x, double y) { return std::sin(y) * std::cos(x); }) < 1e-12);
}

TEST_CASE("Ito correction is even in the noise sign and matches its definition") {
    const PhysParams p = base_params();
    const AtmosPair psi(
        VectorField(random_band_limited(g32, 4, 0.5, 44), random_band_limited(g32, 4, 0.5, 45)),
        random_band_limited(g32, 4, 0.5, 46));
    NoiseBasis plus = default_xi_basis(g32, 2, 0.1, 2.0);
    NoiseBasis minus = plus;
    for (auto& xi : minus.xis) xi *= -1.0;
    const AtmosPair cp = ito_correction_salt(psi, plus, p);
    const AtmosPair cm = ito_correction_salt(psi, minus, p);
    CHECK(l2(cp - cm) < 1e-12);
    // M = 1: correction = (1/2) A[E(psi)] with A the linear part
    NoiseBasis one;
    one.xis.push_back(plus.xis[0]);
    AtmosPair direct = salt_E_linear(salt_E(psi, one.xis[0], p), one.xis[0]);
    direct *= 0.5;
    CHECK(l2(ito_correction_salt(psi, one, p) - direct) < 1e-13);
}

TEST_CASE("expected-drift correction: temperature closed form") {
    PhysParams p = base_params();
    NoiseBasis basis;
    basis.xis.push_back(const_xi(1.0, 0.0));
    const ScalarField theta = from_fn(g32, [](double x, double) { return std::sin(x); });
    const AtmosPair e2 = lasalt_E2_explicit(VectorField(g32), theta, basis, p);
    // -(1/2)(xi.grad)^2 sin x = +(1/2) sin x
    CHECK(max_err(e2.th, [](double x, double) { return 0.5 * std::sin(x); }) < 1e-12);
}

TEST_CASE("expected-drift correction: velocity against the Cartan-formula oracle") {
    const PhysParams p = base_params();
    // keep everything band-limited so dealiasing is inert and the comparison exact
    const NoiseBasis basis = default_xi_basis(g32, 2, 0.15, 1.5);
    const VectorField u_hat(random_band_limited(g32, 3, 0.4, 47),
                            random_band_limited(g32, 3, 0.4, 48));
    const AtmosPair e2 = lasalt_E2_explicit(u_hat, ScalarField(g32), basis, p);
    VectorField v = u_hat;
    v.axpy(1.0 / p.Ro_a, p.coriolis.R);
    VectorField oracle(g32);
    for (const VectorField& xi : basis.xis) oracle += lie_oneform(xi, lie_oneform(xi, v));
    oracle *= 0.5;
    CHECK(l2_norm(e2.u - oracle) < 1e-10);
}

TEST_CASE("Wiener increments are a pure function of the counter") {
    const BrownianDriver d{123, 1e-3};
    const auto a = sample_increments(d, 2, 17, 4);
    const auto b = sample_increments(d, 2, 17, 4);
    CHECK(a == b);
    // distinct counters decorrelate
    const auto c = sample_increments(d, 3, 17, 4);
    CHECK(a != c);
    const auto e = sample_increments(d, 2, 18, 4);
    CHECK(a != e);
}

TEST_CASE("Wiener increment statistics") {
    const double dt = 0.01;
    const BrownianDriver d{7, dt};
    const int N = 20000;
    double sum = 0.0, sq = 0.0;
    for (int s = 0; s < N; ++s) {
        const double w = sample_increments(d, 0, s, 1)[0];
        sum += w;
        sq += w * w;
    }
    const double mean = sum / N;
    const double var = sq / N - mean * mean;
    // 4-sigma bands
    CHECK(std::abs(mean) < 4.0 * std::sqrt(dt / N));
    CHECK(std::abs(var - dt) < 4.0 * dt * std::sqrt(2.0 / N));
}

TEST_CASE("default basis layout") {
    const double a = 0.3;
    const NoiseBasis basis = default_xi_basis(g32, 2, a, 2.0);
    REQUIRE(basis.M() == 2);
    // first wavevector is (0,1): xi_1 = a (sin y, cos y), unit pointwise norm
    CHECK(max_err(basis.xis[0].x(), [&](double, double y) { return a * std::sin(y); }) < 1e-12);
    CHECK(max_err(basis.xis[0].y(), [&](double, double y) { return a * std::cos(y); }) < 1e-12);
    // second mode decays by 2^-decay and uses the next wavevector (1,0)
    CHECK(max_err(basis.xis[1].x(), [&](double x, double) { return a / 4.0 * std::sin(x); }) <
          1e-12);
    // solenoidal option produces divergence-free fields
    const NoiseBasis sol = default_xi_basis(g32, 3, a, 2.0, true);
    for (const VectorField& xi : sol.xis) CHECK(l2_norm(divergence(xi)) < 1e-11);
}

TEST_CASE("regularity sum for a single shear mode") {
    const double a = 0.25;
    const NoiseBasis basis = default_xi_basis(g32, 1, a, 2.0);
    // xi = a(sin y, cos y): every pure-y derivative has sup norm a, the
    // x-derivatives vanish, and |alpha| <= 5 leaves six contributing orders
    CHECK(xiassumpt_sum(basis, 2) == doctest::Approx(36.0 * a * a).epsilon(1e-10));
}
