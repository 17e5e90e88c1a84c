#pragma once

#include <cstdint>
#include <vector>

#include "oacm/state.hpp"

namespace oacm {

struct NoiseBasis {
    std::vector<VectorField> xis;
    int M() const { return static_cast<int>(xis.size()); }
};

struct BrownianDriver {
    uint64_t seed = 0;
    double dt = 0.0;
};

enum class StochasticMode { Stratonovich, Ito };

// Transport-noise operator on the atmospheric pair:
//   velocity: xi.grad u + u_j grad xi^j + (1/Ro_a)(f xi^perp + grad(R.xi))
//   temperature: xi.grad theta
// The rotation part is the geometric form (1/Ro_a) L_xi(R.dx); it is the
// state-independent (affine) part of the operator.
AtmosPair salt_E(const AtmosPair& psi_a, const VectorField& xi, const PhysParams& params);

// State-dependent (linear) part only: (xi.grad u + u_j grad xi^j, xi.grad theta).
AtmosPair salt_E_linear(const AtmosPair& psi_a, const VectorField& xi);

// State-independent part only.
AtmosPair salt_E_affine(const VectorField& xi, const PhysParams& params);

// (1/2) sum_i A_i[E_i(psi)] where A_i is the linear part of E_i — the
// Stratonovich-to-Ito drift correction; the affine part is differentiated
// through exactly once.
AtmosPair ito_correction_salt(const AtmosPair& psi_a, const NoiseBasis& basis,
                              const PhysParams& params);

// Expected-drift Ito correction built from the expected velocity:
//   velocity component: +(1/2) sum_i L_xi(L_xi((u_hat + R/Ro).dx))
//                     = (1/2) sum_i [xi^perp div(xi w) + grad(xi.grad(xi.v))],
//     w = z.curl(v), v = u_hat + R/Ro (a right-hand-side drift term);
//   temperature component: -(1/2) sum_i (xi.grad)^2 theta (the term as it
//     stands on the left side of the evolution equation — negate for a drift).
AtmosPair lasalt_E2_explicit(const VectorField& u_hat, const ScalarField& theta,
                             const NoiseBasis& basis, const PhysParams& params);

// Wiener increments N(0, dt), a pure function of (seed, member, step, i).
std::vector<double> sample_increments(const BrownianDriver& driver, uint64_t member,
                                      uint64_t step, int M);

// xi_i = amplitude * i^{-decay} * (sin(k_i.x), cos(k_i.x)) over a fixed
// enumeration of low wavevectors; optionally Leray-projected.
NoiseBasis default_xi_basis(const Grid& g, int M, double amplitude, double decay,
                            bool solenoidal = false);

// sum_i ||xi_i||^2_{s+3,inf} with ||f||_{m,inf} = sum_{|alpha|<=m} ||D^alpha f||_inf,
// the sup taken over grid points of the Euclidean component norm.
double xiassumpt_sum(const NoiseBasis& basis, int s);

}  // namespace oacm
