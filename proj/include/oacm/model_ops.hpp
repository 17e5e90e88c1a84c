#pragma once

#include "oacm/state.hpp"

namespace oacm {

// Bilinear transport (u_a.grad u_a, u_a.grad th_a, Leray(u_o.grad u_o),
// u_o.grad th_o); every product dealiased.
StateVector transport_B(const StateVector& psi);

// Rotation/gradient terms: atmosphere (1/Ro_a)(f u_a^perp + grad th_a),
// ocean Leray((1/Ro_o) f u_o^perp); temperatures zero.
StateVector linear_C(const StateVector& psi, const PhysParams& params);

// Coupling (0, gamma(th_a - th_o), Leray(sigma(u_o - bar_sol(expected_u_a))), 0).
// expected_u_a is the instantaneous atmospheric velocity in deterministic
// mode and the ensemble-empirical mean in the stochastic modes.
StateVector coupling_D(const StateVector& psi, const VectorField& expected_u_a,
                       const PhysParams& params);

// Componentwise dissipation (Lap u_a/Re_a, Lap th_a/Pe_a, ...); exact zero
// for infinite coefficients.
StateVector dissipation_L(const StateVector& psi, const PhysParams& params);

// Diagnostic ocean pressure: zero-mean p with Lap p = div(u_o.grad u_o + grad q_a).
ScalarField pressure_recover(const StateVector& psi);

// Smooth norm cutoff: 1 on [0,R], cosine bridge on (R,R+delta), 0 beyond.
double cutoff_g(double x, const TruncationConfig& cfg);

// Assembled truncated tendency L psi - g_R(|psi|_{H^s}) B(psi,psi) - C psi - D.
// Throws BlowupError on non-finite input.
StateVector rhs_deterministic(const StateVector& psi, const PhysParams& params,
                              const TruncationConfig& cfg);

// Solenoidal, mean-removed part of a velocity field (the bar_sol of the
// coupling operator).
VectorField bar_sol(const VectorField& u);

}  // namespace oacm
