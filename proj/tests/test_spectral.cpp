#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oacm/errors.hpp"
#include "oacm/rng.hpp"
#include "oacm/spectral.hpp"
#include "oacm/state.hpp"

using namespace oacm;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const Grid& g, const std::function<double(double, double)>& fn) {
    std::vector<double> out(g.size());
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            out[ix * g.n + iy] = fn(g.coord(ix), g.coord(iy));
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_err(const ScalarField& f, const std::function<double(double, double)>& fn) {
    const Grid& g = f.grid();
    return max_abs_diff(to_physical(f), sample(g, fn));
}

}  // namespace

TEST_CASE("transform round trip on random samples") {
    const Grid g{64, 2.0 * kPi};
    std::vector<double> samples(g.size());
    for (int i = 0; i < g.size(); ++i) samples[i] = 2.0 * rng_uniform(11, 0, 0, i) - 1.0;
    const std::vector<double> back = to_physical(to_spectral(g, samples));
    CHECK(max_abs_diff(back, samples) < 1e-12);
}

TEST_CASE("analytic derivatives of a band-limited field") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f =
        to_spectral(g, sample(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y); }));
    CHECK(max_err(ddx(f), [](double x, double y) { return std::cos(x) * std::cos(2 * y); }) < 1e-12);
    CHECK(max_err(ddy(f), [](double x, double y) { return -2 * std::sin(x) * std::sin(2 * y); }) <
          1e-12);
    CHECK(max_err(laplacian(f),
                  [](double x, double y) { return -5 * std::sin(x) * std::cos(2 * y); }) < 1e-11);
    CHECK(max_err(spectral_derivative(f, 1, 1),
                  [](double x, double y) { return -2 * std::cos(x) * std::sin(2 * y); }) < 1e-12);
}

TEST_CASE("derivative matches an 8th-order finite difference") {
    const Grid g{64, 2.0 * kPi};
    const std::vector<double> s = sample(g, [](double x, double y) {
        return std::sin(x + 2 * y) + 0.5 * std::cos(2 * x - y);
    });
    const std::vector<double> dfdx = to_physical(ddx(to_spectral(g, s)));
    const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    double worst = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy) {
            double fd = 0.0;
            for (int j = 1; j <= 4; ++j)
                fd += c[j - 1] *
                      (s[((ix + j) % g.n) * g.n + iy] - s[((ix - j + g.n) % g.n) * g.n + iy]);
            fd /= g.dx();
            worst = std::max(worst, std::abs(fd - dfdx[ix * g.n + iy]));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("Nyquist mode is zeroed by odd derivatives") {
    const Grid g{32, 2.0 * kPi};
    ScalarField f(g);
    f.at(g.n / 2, 0) = 0.5;  // cos(16 x) up to the conjugate convention
    CHECK(l2_norm(ddx(f)) == 0.0);
    CHECK(l2_norm(ddy(f)) == 0.0);
    // even order keeps it
    CHECK(l2_norm(spectral_derivative(f, 2, 0)) > 0.0);
}

TEST_CASE("vector calculus identities") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f = random_band_limited(g, 6, 1.0, 3);
    CHECK(l2_norm(divergence(gradient(f)) - laplacian(f)) < 1e-11);
    CHECK(l2_norm(curl_z(gradient(f))) < 1e-12);
    const VectorField u(random_band_limited(g, 6, 1.0, 4), random_band_limited(g, 6, 1.0, 5));
    // perp rotates by +90 degrees: div(perp u) = -curl_z u
    CHECK(l2_norm(divergence(perp(u)) + curl_z(u)) < 1e-11);
}

TEST_CASE("Leray-Helmholtz projector") {
    const Grid g{32, 2.0 * kPi};
    const VectorField u(random_band_limited(g, 8, 1.0, 7), random_band_limited(g, 8, 1.0, 8));
    const auto [sol, q] = leray_helmholtz(u);
    CHECK(l2_norm(divergence(sol)) < 1e-11);
    // reconstruction u = sol + grad q
    CHECK(l2_norm(u - (sol + gradient(q))) < 1e-11);
    // idempotent and orthogonal
    const VectorField again = leray(sol);
    CHECK(l2_norm(again - sol) < 1e-12);
    CHECK(std::abs(l2_inner(sol, u - sol)) < 1e-11);
    // a gradient projects to zero (its mean part is zero already)
    CHECK(l2_norm(leray(gradient(q))) < 1e-11);
}

TEST_CASE("Parseval: spectral norm equals physical quadrature") {
    const Grid g{64, 2.0 * kPi};
    const ScalarField f = random_band_limited(g, 10, 1.0, 9);
    const std::vector<double> s = to_physical(f);
    double quad = 0.0;
    for (double v : s) quad += v * v;
    quad = std::sqrt(quad * g.area() / g.size());
    CHECK(std::abs(quad - l2_norm(f)) / quad < 1e-10);
}

TEST_CASE("invert_laplacian is a right inverse on zero-mean fields") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f = remove_space_mean(random_band_limited(g, 6, 1.0, 10));
    const ScalarField q = invert_laplacian(f);
    CHECK(l2_norm(laplacian(q) - f) < 1e-11);
    CHECK(std::abs(integral(q)) < 1e-12);
    ScalarField bad = f;
    bad.at(0, 0) += 1.0;  // nonzero mean has no periodic potential
    CHECK_THROWS_AS(invert_laplacian(bad), CompatibilityError);
}

TEST_CASE("dealias keeps modes up to the 2/3 cut and kills the rest") {
    const Grid g{64, 2.0 * kPi};
    const int cut = g.dealias_cut();
    CHECK(cut == 21);
    ScalarField f(g);
    f.at(cut, 0) = 1.0;
    f.at(cut + 1, 0) = 1.0;
    const ScalarField d = dealias(f);
    CHECK(std::abs(d.at(cut, 0)) == 1.0);
    CHECK(std::abs(d.at(cut + 1, 0)) == 0.0);
}

TEST_CASE("pointwise products against closed forms") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField sx =
        to_spectral(g, sample(g, [](double x, double) { return std::sin(x); }));
    // sin^2 x = 1/2 - cos(2x)/2
    CHECK(max_err(multiply(sx, sx),
                  [](double x, double) { return 0.5 - 0.5 * std::cos(2 * x); }) < 1e-12);

    const ScalarField sy =
        to_spectral(g, sample(g, [](double, double y) { return std::sin(y); }));
    const VectorField u(sy, ScalarField(g));  // u = (sin y, 0)
    CHECK(max_err(advect(u, sx), [](double x, double y) { return std::sin(y) * std::cos(x); }) <
          1e-12);
    // dot against components
    const VectorField v(sx, sy);
    CHECK(max_err(dot(u, v), [](double x, double y) { return std::sin(y) * std::sin(x); }) <
          1e-12);
    // vector advection: (u.grad)v with v = (sin x, sin y)
    const VectorField adv = advect(u, v);
    CHECK(max_err(adv.x(), [](double x, double y) { return std::sin(y) * std::cos(x); }) < 1e-12);
    CHECK(l2_norm(adv.y()) < 1e-12);
    // scale
    const VectorField su = scale(sx, u);
    CHECK(max_err(su.x(), [](double x, double y) { return std::sin(x) * std::sin(y); }) < 1e-12);
}

TEST_CASE("integral of a constant plus oscillation") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f =
        to_spectral(g, sample(g, [](double x, double) { return 2.0 + std::sin(x); }));
    CHECK(integral(f) == doctest::Approx(2.0 * g.area()).epsilon(1e-13));
}

TEST_CASE("off-grid spectral evaluation is exact for band-limited data") {
    const Grid g{32, 2.0 * kPi};
    auto fn = [](double x, double y) {
        return std::sin(2 * x + y) + 0.3 * std::cos(x - 3 * y);
    };
    const ScalarField f = to_spectral(g, sample(g, fn));
    const double x = 0.7321, y = 4.1113;
    const auto v = evaluate_at({&f}, x, y);
    CHECK(std::abs(v[0] - fn(x, y)) < 1e-12);
    // periodic in both coordinates
    const auto w = evaluate_at({&f}, x + g.L, y - 2 * g.L);
    CHECK(std::abs(w[0] - v[0]) < 1e-12);
}

TEST_CASE("regrid round trip and refinement") {
    const Grid g32{32, 2.0 * kPi}, g64{64, 2.0 * kPi};
    const ScalarField f = random_band_limited(g32, 6, 1.0, 12);
    const ScalarField up = regrid(f, g64);
    const ScalarField back = regrid(up, g32);
    CHECK(l2_norm(back - f) < 1e-12);
    // refinement represents the same function
    const auto a = evaluate_at({&f}, 1.234, 2.345);
    const auto b = evaluate_at({&up}, 1.234, 2.345);
    CHECK(std::abs(a[0] - b[0]) < 1e-12);
}

TEST_CASE("Sobolev norm of a single mode") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f =
        to_spectral(g, sample(g, [](double x, double) { return std::cos(3 * x); }));
    const double l2sq = l2_norm(f) * l2_norm(f);
    // sum over |alpha| <= 2 of |D^alpha f|^2: orders (0,0), (1,0), (2,0) give
    // factors 1, 9, 81 (all y-derivatives vanish)
    CHECK(sobolev_sq(f, 2) == doctest::Approx(91.0 * l2sq).epsilon(1e-12));
    CHECK(sobolev_sq(f, 0) == doctest::Approx(l2sq).epsilon(1e-12));
}

TEST_CASE("apply_pointwise matches sample-wise application") {
    const Grid g{32, 2.0 * kPi};
    const ScalarField f = random_band_limited(g, 4, 0.5, 13);
    const ScalarField e = apply_pointwise(f, [](double v) { return std::exp(v); });
    const std::vector<double> fs = to_physical(f);
    const std::vector<double> es = to_physical(e);
    for (int i = 0; i < g.size(); ++i) CHECK(std::abs(es[i] - std::exp(fs[i])) < 1e-12);
}

TEST_CASE("all_finite flags NaN coefficients") {
    const Grid g{32, 2.0 * kPi};
    ScalarField f(g);
    CHECK(all_finite(f));
    f.at(3, 4) = cplx{std::nan(""), 0.0};
    CHECK(!all_finite(f));
}
