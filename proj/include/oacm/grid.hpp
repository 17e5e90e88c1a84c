#pragma once

#include <cmath>
#include <numbers>

namespace oacm {

// Uniform periodic grid on the square [0,L] x [0,L] with n points per
// dimension. Spectral indices i in [0,n) map to integer wavenumbers
// k in [-n/2+1, n/2] (the index n/2 is the Nyquist mode).
struct Grid {
    int n = 64;
    double L = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;

    bool operator==(const Grid&) const = default;

    int size() const { return n * n; }
    double dx() const { return L / n; }
    double area() const { return L * L; }

    // integer wavenumber for spectral index i
    int kindex(int i) const { return (i <= n / 2) ? i : i - n; }

    // physical wavenumber 2*pi*kindex/L
    double wavenumber(int i) const {
        return 2.0 * std::numbers::pi * kindex(i) / L;
    }

    // derivative multiplier: like wavenumber, but zero on the Nyquist mode
    // (odd derivatives of the Nyquist cosine have no consistent sign)
    double deriv_wavenumber(int i) const {
        if (2 * i == n) return 0.0;
        return wavenumber(i);
    }

    // largest |kindex| kept by the 2/3-rule dealias mask
    int dealias_cut() const {
        return static_cast<int>(dealias_fraction * (n / 2));
    }

    double coord(int i) const { return L * i / n; }
};

}  // namespace oacm
