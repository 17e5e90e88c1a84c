#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "oacm/grid.hpp"

namespace oacm {

using cplx = std::complex<double>;

// Scalar field stored as spectral coefficients c[ix*n+iy] such that
// f(x,y) = sum_k c_k exp(i k . x).  Physical samples live on the grid
// points (ix*L/n, iy*L/n) in row-major (x-major) order.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid_(g), c_(g.size(), cplx{0.0, 0.0}) {}
    ScalarField(const Grid& g, std::vector<cplx> coeffs) : grid_(g), c_(std::move(coeffs)) {
        if (static_cast<int>(c_.size()) != g.size())
            throw std::invalid_argument("ScalarField: coefficient count does not match grid");
    }

    const Grid& grid() const { return grid_; }
    std::vector<cplx>& coeffs() { return c_; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx& at(int ix, int iy) { return c_[ix * grid_.n + iy]; }
    const cplx& at(int ix, int iy) const { return c_[ix * grid_.n + iy]; }

    ScalarField& operator+=(const ScalarField& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    ScalarField& operator*=(double a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double a, ScalarField f) { return f *= a; }

    // y += a*x
    void axpy(double a, const ScalarField& x) {
        check(x);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += a * x.c_[i];
    }

  private:
    void check(const ScalarField& o) const {
        if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
    }
    Grid grid_;
    std::vector<cplx> c_;
};

class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(const Grid& g) : x_(g), y_(g) {}
    VectorField(ScalarField x, ScalarField y) : x_(std::move(x)), y_(std::move(y)) {
        if (!(x_.grid() == y_.grid()))
            throw std::invalid_argument("VectorField: components on different grids");
    }

    const Grid& grid() const { return x_.grid(); }
    ScalarField& x() { return x_; }
    ScalarField& y() { return y_; }
    const ScalarField& x() const { return x_; }
    const ScalarField& y() const { return y_; }

    VectorField& operator+=(const VectorField& o) {
        x_ += o.x_;
        y_ += o.y_;
        return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        x_ -= o.x_;
        y_ -= o.y_;
        return *this;
    }
    VectorField& operator*=(double a) {
        x_ *= a;
        y_ *= a;
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(double a, VectorField f) { return f *= a; }

    void axpy(double a, const VectorField& v) {
        x_.axpy(a, v.x());
        y_.axpy(a, v.y());
    }

  private:
    ScalarField x_, y_;
};

}  // namespace oacm
