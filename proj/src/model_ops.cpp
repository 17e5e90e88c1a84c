#include "oacm/model_ops.hpp"

#include <cmath>

#include "oacm/errors.hpp"

namespace oacm {

VectorField bar_sol(const VectorField& u) { return remove_space_mean(leray(u)); }

StateVector transport_B(const StateVector& psi) {
    StateVector out(psi.grid());
    out.u_a = advect(psi.u_a, psi.u_a);
    out.th_a = advect(psi.u_a, psi.th_a);
    out.u_o = leray(advect(psi.u_o, psi.u_o));
    out.th_o = advect(psi.u_o, psi.th_o);
    return out;
}

StateVector linear_C(const StateVector& psi, const PhysParams& params) {
    StateVector out(psi.grid());
    const ScalarField& f = params.coriolis.f;
    VectorField rot_a = scale(f, perp(psi.u_a));
    rot_a += gradient(psi.th_a);
    rot_a *= 1.0 / params.Ro_a;
    out.u_a = std::move(rot_a);
    out.u_o = leray(scale(f, perp(psi.u_o)));
    out.u_o *= 1.0 / params.Ro_o;
    return out;
}

StateVector coupling_D(const StateVector& psi, const VectorField& expected_u_a,
                       const PhysParams& params) {
    if (!(psi.grid() == expected_u_a.grid()))
        throw std::invalid_argument("coupling_D: grid mismatch");
    StateVector out(psi.grid());
    if (params.gamma != 0.0) {
        out.th_a = psi.th_a - psi.th_o;
        out.th_a *= params.gamma;
    }
    if (params.sigma != 0.0) {
        VectorField forcing = psi.u_o;
        forcing -= bar_sol(expected_u_a);
        forcing *= params.sigma;
        out.u_o = remove_space_mean(leray(forcing));
    }
    return out;
}

StateVector dissipation_L(const StateVector& psi, const PhysParams& params) {
    StateVector out(psi.grid());
    if (params.nu_u_a() != 0.0) {
        out.u_a = laplacian(psi.u_a);
        out.u_a *= params.nu_u_a();
    }
    if (params.nu_th_a() != 0.0) {
        out.th_a = laplacian(psi.th_a);
        out.th_a *= params.nu_th_a();
    }
    if (params.nu_u_o() != 0.0) {
        out.u_o = laplacian(psi.u_o);
        out.u_o *= params.nu_u_o();
    }
    if (params.nu_th_o() != 0.0) {
        out.th_o = laplacian(psi.th_o);
        out.th_o *= params.nu_th_o();
    }
    return out;
}

ScalarField pressure_recover(const StateVector& psi) {
    const ScalarField q_a = leray_helmholtz(psi.u_a).second;
    VectorField src = advect(psi.u_o, psi.u_o);
    src += gradient(q_a);
    ScalarField rhs = divergence(src);
    rhs.at(0, 0) = cplx{0.0, 0.0};  // zero mean by construction, clear roundoff
    return invert_laplacian(rhs);
}

double cutoff_g(double x, const TruncationConfig& cfg) {
    if (x <= cfg.R_cut) return 1.0;
    if (x >= cfg.R_cut + cfg.delta) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (x - cfg.R_cut) / cfg.delta));
}

StateVector rhs_deterministic(const StateVector& psi, const PhysParams& params,
                              const TruncationConfig& cfg) {
    if (!all_finite(psi)) throw BlowupError("rhs_deterministic: non-finite state", NAN);
    const double g = cutoff_g(sobolev_norm(psi, cfg.s), cfg);
    StateVector out = dissipation_L(psi, params);
    if (g != 0.0) out.axpy(-g, transport_B(psi));
    out -= linear_C(psi, params);
    out -= coupling_D(psi, psi.u_a, params);
    return out;
}

}  // namespace oacm
