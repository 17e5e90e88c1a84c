#include "oacm/state.hpp"

#include <cmath>

#include "oacm/rng.hpp"

namespace oacm {

CoriolisField make_coriolis(const Grid& g, double f0) {
    std::vector<double> fv(g.size()), rx(g.size());
    const double two_pi = 2.0 * std::numbers::pi;
    for (int ix = 0; ix < g.n; ++ix) {
        for (int iy = 0; iy < g.n; ++iy) {
            const double y = g.coord(iy);
            fv[ix * g.n + iy] = f0 * std::sin(two_pi * y / g.L);
            rx[ix * g.n + iy] = f0 * (g.L / two_pi) * std::cos(two_pi * y / g.L);
        }
    }
    CoriolisField c;
    c.f = to_spectral(g, fv);
    c.R = VectorField(to_spectral(g, rx), ScalarField(g));
    return c;
}

double sobolev_norm(const StateVector& psi, int s) {
    const double sq = sobolev_sq(psi.u_a, s) + sobolev_sq(psi.th_a, s) +
                      sobolev_sq(psi.u_o, s) + sobolev_sq(psi.th_o, s);
    return std::sqrt(std::max(0.0, sq));
}

double sobolev_norm(const AtmosPair& psi_a, int s) {
    return std::sqrt(std::max(0.0, sobolev_sq(psi_a.u, s) + sobolev_sq(psi_a.th, s)));
}

double l2_norm(const StateVector& psi) { return sobolev_norm(psi, 0); }

double l2_norm_sq(const AtmosPair& psi_a) {
    return sobolev_sq(psi_a.u, 0) + sobolev_sq(psi_a.th, 0);
}

bool all_finite(const StateVector& psi) {
    return all_finite(psi.u_a.x()) && all_finite(psi.u_a.y()) && all_finite(psi.th_a) &&
           all_finite(psi.u_o.x()) && all_finite(psi.u_o.y()) && all_finite(psi.th_o);
}

ScalarField random_band_limited(const Grid& g, int kmax, double amplitude, uint64_t seed) {
    ScalarField f(g);
    if (amplitude == 0.0 || kmax < 0) return f;
    uint64_t ctr = 0;
    for (int kx = 0; kx <= kmax; ++kx) {
        for (int ky = -kmax; ky <= kmax; ++ky) {
            if (kx == 0 && ky <= 0) continue;  // one representative per conjugate pair
            const double re = 2.0 * rng_uniform(seed, 0x5eedf1e1dULL, ctr++, 0) - 1.0;
            const double im = 2.0 * rng_uniform(seed, 0x5eedf1e1dULL, ctr++, 0) - 1.0;
            const int ix = (kx >= 0) ? kx : kx + g.n;
            const int iy = (ky >= 0) ? ky : ky + g.n;
            const int cx = (kx == 0) ? 0 : g.n - ix;
            const int cy = (ky == 0) ? 0 : g.n - iy;
            f.at(ix, iy) = cplx{re, im};
            f.at(cx, cy) = cplx{re, -im};
        }
    }
    std::vector<double> p = to_physical(f);
    double mx = 0.0;
    for (double v : p) mx = std::max(mx, std::abs(v));
    if (mx > 0.0) f *= amplitude / mx;
    return f;
}

StateVector random_state(const Grid& g, int kmax, double amplitude, uint64_t seed) {
    StateVector psi(g);
    psi.u_a = VectorField(random_band_limited(g, kmax, amplitude, seed ^ 0x01),
                          random_band_limited(g, kmax, amplitude, seed ^ 0x02));
    psi.th_a = random_band_limited(g, kmax, amplitude, seed ^ 0x03);
    psi.u_o = VectorField(random_band_limited(g, kmax, amplitude, seed ^ 0x04),
                          random_band_limited(g, kmax, amplitude, seed ^ 0x05));
    psi.th_o = random_band_limited(g, kmax, amplitude, seed ^ 0x06);
    project_ocean(psi);
    return psi;
}

void project_ocean(StateVector& psi) {
    psi.u_o = remove_space_mean(leray(psi.u_o));
}

}  // namespace oacm
