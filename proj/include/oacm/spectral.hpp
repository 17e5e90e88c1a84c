#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "oacm/field.hpp"

namespace oacm {

// -- transforms ---------------------------------------------------------

// Forward transform of real grid samples (row-major, x-major) into spectral
// coefficients normalized so that f(x) = sum_k c_k exp(i k.x).
ScalarField to_spectral(const Grid& g, const std::vector<double>& samples);

// Inverse transform; returns real grid samples.
std::vector<double> to_physical(const ScalarField& f);
std::pair<std::vector<double>, std::vector<double>> to_physical(const VectorField& u);

// -- differential operators --------------------------------------------

// D^(ax,ay) f by wavenumber multiplication; Nyquist coefficient zeroed for
// odd per-axis orders.
ScalarField spectral_derivative(const ScalarField& f, int ax, int ay);
ScalarField ddx(const ScalarField& f);
ScalarField ddy(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
// z-component of the curl, dv/dx - du/dy
ScalarField curl_z(const VectorField& u);
// (-u_y, u_x)
VectorField perp(const VectorField& u);

// -- dealiasing and products -------------------------------------------

ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);
void dealias_inplace(ScalarField& f);

// Pointwise products in physical space, dealiased by the 2/3 rule.
ScalarField multiply(const ScalarField& a, const ScalarField& b);
ScalarField dot(const VectorField& a, const VectorField& b);
// (u . grad) f and (u . grad) v
ScalarField advect(const VectorField& u, const ScalarField& f);
VectorField advect(const VectorField& u, const VectorField& v);
// pointwise scale of a vector field by a scalar field
VectorField scale(const ScalarField& a, const VectorField& u);

// Pointwise application of fn in physical space (no dealiasing: used for
// non-polynomial thermodynamic terms and diagnostics).
ScalarField apply_pointwise(const ScalarField& f, const std::function<double(double)>& fn);

// -- projections and inversions ----------------------------------------

// u = u_sol + grad(q); div(u_sol) = 0 spectrally, q zero-mean, the mean
// (zero-wavenumber) part of u stays in u_sol.
std::pair<VectorField, ScalarField> leray_helmholtz(const VectorField& u);
// solenoidal part only
VectorField leray(const VectorField& u);

ScalarField remove_space_mean(const ScalarField& f);
VectorField remove_space_mean(const VectorField& u);

// Zero-mean g with laplacian(g) = f; throws CompatibilityError when f has a
// nonzero mean (relative to its norm).
ScalarField invert_laplacian(const ScalarField& f);

// -- norms and integrals -----------------------------------------------

double integral(const ScalarField& f);          // \int f dx dy
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& u);
// squared H^s norm, sum over |alpha| <= s of ||D^alpha f||_L2^2 (Parseval)
double sobolev_sq(const ScalarField& f, int s);
double sobolev_sq(const VectorField& u, int s);

// -- off-grid evaluation and regridding --------------------------------

// Exact spectral evaluation of several fields at an arbitrary point
// (periodic in both coordinates).
std::vector<double> evaluate_at(const std::vector<const ScalarField*>& fields,
                                double x, double y);

// Transfer to a different resolution by wavenumber (pad or truncate);
// Nyquist rows of the source are dropped.
ScalarField regrid(const ScalarField& f, const Grid& target);
VectorField regrid(const VectorField& u, const Grid& target);

bool all_finite(const ScalarField& f);

}  // namespace oacm
