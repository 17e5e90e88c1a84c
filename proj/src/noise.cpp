#include "oacm/noise.hpp"

#include <algorithm>
#include <cmath>

#include "oacm/rng.hpp"

namespace oacm {

namespace {

// (a_j grad w^j)_i = sum_j a_j d_i w_j
VectorField a_j_grad_wj(const VectorField& a, const VectorField& w) {
    ScalarField cx = multiply(a.x(), ddx(w.x())) + multiply(a.y(), ddx(w.y()));
    ScalarField cy = multiply(a.x(), ddy(w.x())) + multiply(a.y(), ddy(w.y()));
    return {std::move(cx), std::move(cy)};
}

}  // namespace

AtmosPair salt_E_linear(const AtmosPair& psi_a, const VectorField& xi) {
    AtmosPair out(psi_a.grid());
    out.u = advect(xi, psi_a.u);
    out.u += a_j_grad_wj(psi_a.u, xi);
    out.th = advect(xi, psi_a.th);
    return out;
}

AtmosPair salt_E_affine(const VectorField& xi, const PhysParams& params) {
    AtmosPair out(xi.grid());
    out.u = scale(params.coriolis.f, perp(xi));
    out.u += gradient(dot(params.coriolis.R, xi));
    out.u *= 1.0 / params.Ro_a;
    return out;
}

AtmosPair salt_E(const AtmosPair& psi_a, const VectorField& xi, const PhysParams& params) {
    AtmosPair out = salt_E_linear(psi_a, xi);
    out += salt_E_affine(xi, params);
    return out;
}

AtmosPair ito_correction_salt(const AtmosPair& psi_a, const NoiseBasis& basis,
                              const PhysParams& params) {
    AtmosPair acc(psi_a.grid());
    for (const VectorField& xi : basis.xis)
        acc += salt_E_linear(salt_E(psi_a, xi, params), xi);
    acc *= 0.5;
    return acc;
}

AtmosPair lasalt_E2_explicit(const VectorField& u_hat, const ScalarField& theta,
                             const NoiseBasis& basis, const PhysParams& params) {
    const Grid& g = u_hat.grid();
    AtmosPair acc(g);
    VectorField v = u_hat;
    v.axpy(1.0 / params.Ro_a, params.coriolis.R);
    const ScalarField w = curl_z(v);
    for (const VectorField& xi : basis.xis) {
        ScalarField d = divergence(scale(w, xi));
        acc.u += scale(d, perp(xi));
        acc.u += gradient(advect(xi, dot(xi, v)));
        acc.th -= advect(xi, advect(xi, theta));
    }
    acc.u *= 0.5;
    acc.th *= 0.5;
    return acc;
}

std::vector<double> sample_increments(const BrownianDriver& driver, uint64_t member,
                                      uint64_t step, int M) {
    std::vector<double> out(std::max(M, 0));
    const double sd = std::sqrt(driver.dt);
    for (int i = 0; i < M; ++i)
        out[i] = sd * rng_normal(driver.seed, member, step, static_cast<uint64_t>(i));
    return out;
}

NoiseBasis default_xi_basis(const Grid& g, int M, double amplitude, double decay,
                            bool solenoidal) {
    // fixed enumeration of low wavevectors in the upper half-plane,
    // ordered by |k|^2 then lexicographically
    std::vector<std::pair<int, int>> ks;
    const int km = 6;
    for (int kx = -km; kx <= km; ++kx)
        for (int ky = 0; ky <= km; ++ky) {
            if (kx == 0 && ky == 0) continue;
            if (ky == 0 && kx < 0) continue;
            ks.emplace_back(kx, ky);
        }
    std::sort(ks.begin(), ks.end(), [](auto a, auto b) {
        const int na = a.first * a.first + a.second * a.second;
        const int nb = b.first * b.first + b.second * b.second;
        return na != nb ? na < nb : a < b;
    });

    NoiseBasis basis;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 1; i <= M; ++i) {
        const auto [kx, ky] = ks[(i - 1) % ks.size()];
        const double a = amplitude * std::pow(static_cast<double>(i), -decay);
        std::vector<double> sx(g.size()), sy(g.size());
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy) {
                const double ph = two_pi * (kx * g.coord(ix) + ky * g.coord(iy)) / g.L;
                sx[ix * g.n + iy] = a * std::sin(ph);
                sy[ix * g.n + iy] = a * std::cos(ph);
            }
        VectorField xi(to_spectral(g, sx), to_spectral(g, sy));
        if (solenoidal) xi = leray(xi);
        basis.xis.push_back(std::move(xi));
    }
    return basis;
}

namespace {

double sup_norm(const VectorField& v) {
    auto [px, py] = to_physical(v);
    double mx = 0.0;
    for (size_t i = 0; i < px.size(); ++i)
        mx = std::max(mx, std::hypot(px[i], py[i]));
    return mx;
}

}  // namespace

double xiassumpt_sum(const NoiseBasis& basis, int s) {
    const int m = s + 3;
    double total = 0.0;
    for (const VectorField& xi : basis.xis) {
        double cm = 0.0;
        for (int a1 = 0; a1 <= m; ++a1)
            for (int a2 = 0; a1 + a2 <= m; ++a2)
                cm += sup_norm({spectral_derivative(xi.x(), a1, a2),
                                spectral_derivative(xi.y(), a1, a2)});
        total += cm * cm;
    }
    return total;
}

}  // namespace oacm
