#pragma once

#include <array>
#include <functional>

#include "oacm/dynamics.hpp"

namespace oacm {

// Closed discrete material curve; coordinates are unwrapped (the fields are
// periodic, so points may leave [0,L) freely).
struct MaterialLoop {
    std::vector<std::array<double, 2>> points;
    int size() const { return static_cast<int>(points.size()); }
};

MaterialLoop make_circle_loop(double cx, double cy, double radius, int K);

// Insert midpoints wherever adjacent spacing exceeds max_spacing (typically
// 4x the grid spacing).
void resample_loop(MaterialLoop& loop, double max_spacing);

// Advance every loop point one step of dx = u dt + sign * sum_i xi_i o dW_i.
// Deterministic points use the RK3 stage pattern with the velocity linearly
// interpolated between u_t and u_next (pass u_next = nullptr to advect in the
// frozen field); stochastic points use the Heun predictor-corrector.
MaterialLoop advect_loop(const MaterialLoop& loop, const VectorField& u_t,
                         const VectorField* u_next, const NoiseBasis& basis,
                         const std::vector<double>& dW, double dt,
                         double noise_sign = 1.0);

// Trapezoidal line integral of (u + R/Ro).dx around the loop with spectral
// off-grid evaluation.
double circulation(const MaterialLoop& loop, const VectorField& u,
                   const CoriolisField& coriolis, double Ro);

// q = z.curl(u + R/Ro) / (D theta), pointwise on the grid.
ScalarField potential_vorticity(const CompressibleState& state);

// C_phi = integral of (D theta) phi(q) by grid quadrature.
double casimir(const CompressibleState& state, const std::function<double(double)>& phi);

// E = integral of (D/2)|u|^2 + kappa (D theta)^alpha.
double energy_sam(const CompressibleState& state);

// Empirical mean over members of the squared L2 norm of the atmospheric
// fluctuation against `expectation`.
double ensemble_variance(const Ensemble& ens, const StateVector& expectation);

// Empirical right-hand side of the variance dynamics:
//   -2 E<psi~, F~ psi~> + sum_i E||E_i(psi^a)||^2
// with F~ = B^L + C^L - 1/2 sum (E_i^lin)^2 - nu Lap acting on the
// fluctuation, and the full (affine included) noise operator in the
// quadratic-variation sum.
double variance_rhs(const Ensemble& ens, const StateVector& expectation,
                    const PhysParams& params, const NoiseBasis& basis);

struct DiagnosticsRecord {
    double t = 0.0;
    double circulation_a = std::numeric_limits<double>::quiet_NaN();
    double circulation_o = std::numeric_limits<double>::quiet_NaN();
    double energy = std::numeric_limits<double>::quiet_NaN();
    double casimir_q2 = std::numeric_limits<double>::quiet_NaN();
    double theta_variance = std::numeric_limits<double>::quiet_NaN();
    double variance_rhs = std::numeric_limits<double>::quiet_NaN();
    double h_s_norm_det = std::numeric_limits<double>::quiet_NaN();
    double h_s_norm_mean = std::numeric_limits<double>::quiet_NaN();
    int member_frozen_count = 0;
};

}  // namespace oacm
