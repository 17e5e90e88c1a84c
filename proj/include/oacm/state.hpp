#pragma once

#include <limits>

#include "oacm/field.hpp"
#include "oacm/spectral.hpp"

namespace oacm {

// Atmospheric pair (velocity, temperature); the unit the noise operators
// and fluctuation diagnostics act on.
struct AtmosPair {
    VectorField u;
    ScalarField th;

    AtmosPair() = default;
    explicit AtmosPair(const Grid& g) : u(g), th(g) {}
    AtmosPair(VectorField uu, ScalarField tt) : u(std::move(uu)), th(std::move(tt)) {}

    const Grid& grid() const { return u.grid(); }

    AtmosPair& operator+=(const AtmosPair& o) {
        u += o.u;
        th += o.th;
        return *this;
    }
    AtmosPair& operator-=(const AtmosPair& o) {
        u -= o.u;
        th -= o.th;
        return *this;
    }
    AtmosPair& operator*=(double a) {
        u *= a;
        th *= a;
        return *this;
    }
    friend AtmosPair operator+(AtmosPair a, const AtmosPair& b) { return a += b; }
    friend AtmosPair operator-(AtmosPair a, const AtmosPair& b) { return a -= b; }
    friend AtmosPair operator*(double a, AtmosPair p) { return p *= a; }
    void axpy(double a, const AtmosPair& o) {
        u.axpy(a, o.u);
        th.axpy(a, o.th);
    }
};

// psi = (u_a, theta_a, u_o, theta_o)
struct StateVector {
    VectorField u_a;
    ScalarField th_a;
    VectorField u_o;
    ScalarField th_o;

    StateVector() = default;
    explicit StateVector(const Grid& g) : u_a(g), th_a(g), u_o(g), th_o(g) {}

    const Grid& grid() const { return u_a.grid(); }

    AtmosPair atmos() const { return {u_a, th_a}; }
    void set_atmos(const AtmosPair& p) {
        u_a = p.u;
        th_a = p.th;
    }

    StateVector& operator+=(const StateVector& o) {
        u_a += o.u_a;
        th_a += o.th_a;
        u_o += o.u_o;
        th_o += o.th_o;
        return *this;
    }
    StateVector& operator-=(const StateVector& o) {
        u_a -= o.u_a;
        th_a -= o.th_a;
        u_o -= o.u_o;
        th_o -= o.th_o;
        return *this;
    }
    StateVector& operator*=(double a) {
        u_a *= a;
        th_a *= a;
        u_o *= a;
        th_o *= a;
        return *this;
    }
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend StateVector operator*(double a, StateVector s) { return s *= a; }
    void axpy(double a, const StateVector& o) {
        u_a.axpy(a, o.u_a);
        th_a.axpy(a, o.th_a);
        u_o.axpy(a, o.u_o);
        th_o.axpy(a, o.th_o);
    }
};

// Coriolis parameter f (zero mean) and its periodic vector potential R,
// with curl R = f and R zero-mean.
struct CoriolisField {
    ScalarField f;
    VectorField R;
};

// f(x,y) = f0 * sin(2 pi y / L), R = (f0 L/(2 pi) cos(2 pi y / L), 0)
CoriolisField make_coriolis(const Grid& g, double f0);

struct PhysParams {
    double Ro_a = 1.0;
    double Ro_o = 1.0;
    double Re_a = std::numeric_limits<double>::infinity();
    double Re_o = std::numeric_limits<double>::infinity();
    double Pe_a = std::numeric_limits<double>::infinity();
    double Pe_o = std::numeric_limits<double>::infinity();
    double gamma = 0.0;
    double sigma = 0.0;
    CoriolisField coriolis;

    double nu_u_a() const { return std::isinf(Re_a) ? 0.0 : 1.0 / Re_a; }
    double nu_u_o() const { return std::isinf(Re_o) ? 0.0 : 1.0 / Re_o; }
    double nu_th_a() const { return std::isinf(Pe_a) ? 0.0 : 1.0 / Pe_a; }
    double nu_th_o() const { return std::isinf(Pe_o) ? 0.0 : 1.0 / Pe_o; }
};

struct TruncationConfig {
    double R_cut = 1e6;
    double delta = 1.0;
    int s = 2;
};

double sobolev_norm(const StateVector& psi, int s);
double sobolev_norm(const AtmosPair& psi_a, int s);
double l2_norm(const StateVector& psi);
double l2_norm_sq(const AtmosPair& psi_a);

bool all_finite(const StateVector& psi);

// Band-limited random field with modes |k_j| <= kmax, rescaled so the max
// physical amplitude is `amplitude`; deterministic in `seed`.
ScalarField random_band_limited(const Grid& g, int kmax, double amplitude, uint64_t seed);

// Reference-style random initial state: band-limited u_a, th_a, th_o and a
// solenoidal zero-mean u_o.
StateVector random_state(const Grid& g, int kmax, double amplitude, uint64_t seed);

// Enforce the ocean-side invariants (Leray projection + mean removal).
void project_ocean(StateVector& psi);

}  // namespace oacm
