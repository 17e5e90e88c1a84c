#include "oacm/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "oacm/errors.hpp"

namespace oacm {

namespace {

// One measured real-to-complex plan pair per grid size. The grid samples
// are real, so the transforms run on the half-spectrum (y is the halved,
// contiguous dimension) over aligned per-thread scratch buffers; the stored
// coefficient array keeps the full Hermitian spectrum.
struct PlanPair {
    fftw_plan fwd = nullptr;  // r2c
    fftw_plan bwd = nullptr;  // c2r
};

struct Scratch {
    double* real = nullptr;
    fftw_complex* half = nullptr;
    int n = 0;

    ~Scratch() {
        fftw_free(real);
        fftw_free(half);
    }
    void ensure(int nn) {
        if (n == nn) return;
        fftw_free(real);
        fftw_free(half);
        n = nn;
        real = fftw_alloc_real(static_cast<size_t>(n) * n);
        half = fftw_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    }
};

Scratch& scratch_for(int n) {
    thread_local std::map<int, Scratch> cache;
    Scratch& s = cache[n];
    s.ensure(n);
    return s;
}

PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double* r = fftw_alloc_real(static_cast<size_t>(n) * n);
    fftw_complex* h = fftw_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1));
    PlanPair pp;
    pp.fwd = fftw_plan_dft_r2c_2d(n, n, r, h, FFTW_MEASURE);
    pp.bwd = fftw_plan_dft_c2r_2d(n, n, h, r, FFTW_MEASURE);
    fftw_free(r);
    fftw_free(h);
    return cache.emplace(n, pp).first->second;
}

}  // namespace

ScalarField to_spectral(const Grid& g, const std::vector<double>& samples) {
    if (static_cast<int>(samples.size()) != g.size())
        throw std::invalid_argument("to_spectral: sample count does not match grid");
    const int n = g.n;
    const int nh = n / 2 + 1;
    PlanPair& pp = plans_for(n);
    Scratch& sc = scratch_for(n);
    std::copy(samples.begin(), samples.end(), sc.real);
    fftw_execute_dft_r2c(pp.fwd, sc.real, sc.half);
    ScalarField out(g);
    auto& c = out.coeffs();
    const double scale = 1.0 / g.size();
    for (int ix = 0; ix < n; ++ix) {
        const fftw_complex* row = sc.half + static_cast<size_t>(ix) * nh;
        for (int iy = 0; iy < nh; ++iy)
            c[ix * n + iy] = cplx{row[iy][0] * scale, row[iy][1] * scale};
    }
    // mirror the missing half-spectrum: c(-k) = conj(c(k))
    for (int ix = 0; ix < n; ++ix) {
        const int mx = (n - ix) % n;
        for (int iy = nh; iy < n; ++iy)
            c[ix * n + iy] = std::conj(c[mx * n + (n - iy)]);
    }
    return out;
}

std::vector<double> to_physical(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n;
    const int nh = n / 2 + 1;
    PlanPair& pp = plans_for(n);
    Scratch& sc = scratch_for(n);
    const auto& c = f.coeffs();
    for (int ix = 0; ix < n; ++ix) {
        fftw_complex* row = sc.half + static_cast<size_t>(ix) * nh;
        for (int iy = 0; iy < nh; ++iy) {
            row[iy][0] = c[ix * n + iy].real();
            row[iy][1] = c[ix * n + iy].imag();
        }
    }
    fftw_execute_dft_c2r(pp.bwd, sc.half, sc.real);
    return std::vector<double>(sc.real, sc.real + g.size());
}

std::pair<std::vector<double>, std::vector<double>> to_physical(const VectorField& u) {
    return {to_physical(u.x()), to_physical(u.y())};
}

namespace {

// per-axis (ik)^a multiplier vectors, cached per (n, L, order)
const std::vector<cplx>& deriv_multipliers(const Grid& g, int order) {
    static std::map<std::tuple<int, double, int>, std::vector<cplx>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto& m = cache[{g.n, g.L, order}];
    if (m.empty()) {
        m.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            const bool nyq = (2 * i == g.n);
            const double k = g.wavenumber(i);
            m[i] = (order % 2 == 1 && nyq) ? cplx{0.0, 0.0} : std::pow(cplx{0.0, k}, order);
        }
    }
    return m;
}

}  // namespace

ScalarField spectral_derivative(const ScalarField& f, int ax, int ay) {
    if (ax < 0 || ay < 0) throw std::invalid_argument("spectral_derivative: negative order");
    const Grid& g = f.grid();
    ScalarField out(g);
    const int n = g.n;
    const std::vector<cplx>& mx = deriv_multipliers(g, ax);
    const std::vector<cplx>& my = deriv_multipliers(g, ay);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            out.at(ix, iy) = f.at(ix, iy) * mx[ix] * my[iy];
    return out;
}

ScalarField ddx(const ScalarField& f) { return spectral_derivative(f, 1, 0); }
ScalarField ddy(const ScalarField& f) { return spectral_derivative(f, 0, 1); }

ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix) {
        const double kx = g.wavenumber(ix);
        for (int iy = 0; iy < n; ++iy) {
            const double ky = g.wavenumber(iy);
            out.at(ix, iy) = -(kx * kx + ky * ky) * f.at(ix, iy);
        }
    }
    return out;
}

VectorField laplacian(const VectorField& u) {
    return {laplacian(u.x()), laplacian(u.y())};
}

VectorField gradient(const ScalarField& f) { return {ddx(f), ddy(f)}; }

ScalarField divergence(const VectorField& u) { return ddx(u.x()) + ddy(u.y()); }

ScalarField curl_z(const VectorField& u) { return ddx(u.y()) - ddy(u.x()); }

VectorField perp(const VectorField& u) {
    return {-1.0 * u.y(), u.x()};
}

void dealias_inplace(ScalarField& f) {
    const Grid& g = f.grid();
    const int cut = g.dealias_cut();
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix) {
        const bool killx = std::abs(g.kindex(ix)) > cut;
        for (int iy = 0; iy < n; ++iy)
            if (killx || std::abs(g.kindex(iy)) > cut) f.at(ix, iy) = cplx{0.0, 0.0};
    }
}

ScalarField dealias(const ScalarField& f) {
    ScalarField out = f;
    dealias_inplace(out);
    return out;
}

VectorField dealias(const VectorField& u) { return {dealias(u.x()), dealias(u.y())}; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("multiply: grid mismatch");
    std::vector<double> pa = to_physical(a), pb = to_physical(b);
    for (size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
    ScalarField out = to_spectral(a.grid(), pa);
    dealias_inplace(out);
    return out;
}

namespace {

// a1*b1 + a2*b2 with a1, a2 already in physical space; one forward transform
ScalarField product_pair(const Grid& g, const std::vector<double>& a1, const ScalarField& b1,
                         const std::vector<double>& a2, const ScalarField& b2) {
    std::vector<double> p1 = to_physical(b1);
    const std::vector<double> p2 = to_physical(b2);
    for (size_t i = 0; i < p1.size(); ++i) p1[i] = a1[i] * p1[i] + a2[i] * p2[i];
    ScalarField out = to_spectral(g, p1);
    dealias_inplace(out);
    return out;
}

}  // namespace

ScalarField dot(const VectorField& a, const VectorField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("dot: grid mismatch");
    const auto [ax, ay] = to_physical(a);
    return product_pair(a.grid(), ax, b.x(), ay, b.y());
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
    if (!(u.grid() == f.grid())) throw std::invalid_argument("advect: grid mismatch");
    const auto [ux, uy] = to_physical(u);
    return product_pair(u.grid(), ux, ddx(f), uy, ddy(f));
}

VectorField advect(const VectorField& u, const VectorField& v) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("advect: grid mismatch");
    // the physical samples of u are shared across both components
    const auto [ux, uy] = to_physical(u);
    return {product_pair(u.grid(), ux, ddx(v.x()), uy, ddy(v.x())),
            product_pair(u.grid(), ux, ddx(v.y()), uy, ddy(v.y()))};
}

VectorField scale(const ScalarField& a, const VectorField& u) {
    return {multiply(a, u.x()), multiply(a, u.y())};
}

ScalarField apply_pointwise(const ScalarField& f, const std::function<double(double)>& fn) {
    std::vector<double> p = to_physical(f);
    for (auto& v : p) v = fn(v);
    return to_spectral(f.grid(), p);
}

std::pair<VectorField, ScalarField> leray_helmholtz(const VectorField& u) {
    const Grid& g = u.grid();
    ScalarField q(g);
    const int n = g.n;
    // solve div(grad q) = div(u) with the same Nyquist-zeroed derivative
    // multipliers, so div(u - grad q) is an exact spectral zero
    for (int ix = 0; ix < n; ++ix) {
        const double dx = g.deriv_wavenumber(ix);
        for (int iy = 0; iy < n; ++iy) {
            const double dy = g.deriv_wavenumber(iy);
            const double k2 = dx * dx + dy * dy;
            if (k2 == 0.0) continue;  // mean mode (and pure-Nyquist rows) stay solenoidal
            const cplx div = cplx{0.0, dx} * u.x().at(ix, iy) + cplx{0.0, dy} * u.y().at(ix, iy);
            q.at(ix, iy) = div / cplx{-k2, 0.0};
        }
    }
    VectorField sol = u;
    sol -= gradient(q);
    return {std::move(sol), std::move(q)};
}

VectorField leray(const VectorField& u) { return leray_helmholtz(u).first; }

ScalarField remove_space_mean(const ScalarField& f) {
    ScalarField out = f;
    out.at(0, 0) = cplx{0.0, 0.0};
    return out;
}

VectorField remove_space_mean(const VectorField& u) {
    return {remove_space_mean(u.x()), remove_space_mean(u.y())};
}

ScalarField invert_laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    const double nrm = l2_norm(f);
    const double mean = std::abs(f.at(0, 0));
    if (mean > 1e-10 * std::max(nrm, 1e-300))
        throw CompatibilityError("invert_laplacian: source has nonzero spatial mean");
    ScalarField out(g);
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix) {
        const double kx = g.wavenumber(ix);
        for (int iy = 0; iy < n; ++iy) {
            const double ky = g.wavenumber(iy);
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            out.at(ix, iy) = f.at(ix, iy) / (-k2);
        }
    }
    return out;
}

double integral(const ScalarField& f) { return f.grid().area() * f.at(0, 0).real(); }

double l2_inner(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("l2_inner: grid mismatch");
    double s = 0.0;
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (size_t i = 0; i < ca.size(); ++i)
        s += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
    return a.grid().area() * s;
}

double l2_inner(const VectorField& a, const VectorField& b) {
    return l2_inner(a.x(), b.x()) + l2_inner(a.y(), b.y());
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double l2_norm(const VectorField& u) {
    return std::sqrt(std::max(0.0, l2_inner(u.x(), u.x()) + l2_inner(u.y(), u.y())));
}

namespace {

// Parseval weight sum_{a1+a2<=s} |m_x|^(2 a1) |m_y|^(2 a2), with the same
// Nyquist convention as spectral_derivative (odd orders vanish there).
double sobolev_weight(const Grid& g, int ix, int iy, int s) {
    double w = 0.0;
    for (int a1 = 0; a1 <= s; ++a1) {
        for (int a2 = 0; a2 + a1 <= s; ++a2) {
            double term = 1.0;
            const bool nyqx = (2 * ix == g.n), nyqy = (2 * iy == g.n);
            const double kx = g.wavenumber(ix), ky = g.wavenumber(iy);
            if (a1 > 0) term *= (a1 % 2 == 1 && nyqx) ? 0.0 : std::pow(kx * kx, a1);
            if (a2 > 0) term *= (a2 % 2 == 1 && nyqy) ? 0.0 : std::pow(ky * ky, a2);
            w += term;
        }
    }
    return w;
}

// Weight tables are reused across calls; the cutoff argument is evaluated
// on every right-hand-side assembly.
const std::vector<double>& sobolev_weights(const Grid& g, int s) {
    static std::map<std::tuple<int, double, int>, std::vector<double>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto& w = cache[{g.n, g.L, s}];
    if (w.empty()) {
        w.resize(g.size());
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                w[ix * g.n + iy] = sobolev_weight(g, ix, iy, s);
    }
    return w;
}

}  // namespace

double sobolev_sq(const ScalarField& f, int s) {
    if (s < 0) throw std::invalid_argument("sobolev_sq: negative order");
    const Grid& g = f.grid();
    const std::vector<double>& w = sobolev_weights(g, s);
    const auto& c = f.coeffs();
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) acc += w[i] * std::norm(c[i]);
    return g.area() * acc;
}

double sobolev_sq(const VectorField& u, int s) {
    return sobolev_sq(u.x(), s) + sobolev_sq(u.y(), s);
}

std::vector<double> evaluate_at(const std::vector<const ScalarField*>& fields,
                                double x, double y) {
    if (fields.empty()) return {};
    const Grid& g = fields.front()->grid();
    const int n = g.n;
    // phase vectors e^{i k x} built by recurrence over the positive
    // wavenumbers, then mirrored; avoids n^2 exp() calls per point
    std::vector<cplx> px(n), py(n);
    const cplx wx = std::polar(1.0, 2.0 * std::numbers::pi * x / g.L);
    const cplx wy = std::polar(1.0, 2.0 * std::numbers::pi * y / g.L);
    px[0] = py[0] = cplx{1.0, 0.0};
    for (int i = 1; i <= n / 2; ++i) {
        px[i] = px[i - 1] * wx;
        py[i] = py[i - 1] * wy;
    }
    for (int i = n / 2 + 1; i < n; ++i) {
        px[i] = std::conj(px[n - i]);
        py[i] = std::conj(py[n - i]);
    }
    std::vector<double> out;
    out.reserve(fields.size());
    for (const ScalarField* f : fields) {
        if (!(f->grid() == g))
            throw std::invalid_argument("evaluate_at: fields on different grids");
        cplx acc{0.0, 0.0};
        const auto& c = f->coeffs();
        for (int ix = 0; ix < n; ++ix) {
            cplx row{0.0, 0.0};
            const cplx* cr = c.data() + static_cast<size_t>(ix) * n;
            for (int iy = 0; iy < n; ++iy) row += cr[iy] * py[iy];
            acc += row * px[ix];
        }
        out.push_back(acc.real());
    }
    return out;
}

ScalarField regrid(const ScalarField& f, const Grid& target) {
    const Grid& src = f.grid();
    if (src.n == target.n) {
        ScalarField out = f;
        return out;
    }
    ScalarField out(target);
    const int kmax = std::min(src.n, target.n) / 2 - 1;
    for (int ix = 0; ix < src.n; ++ix) {
        const int kx = src.kindex(ix);
        if (std::abs(kx) > kmax) continue;
        const int tx = (kx >= 0) ? kx : kx + target.n;
        for (int iy = 0; iy < src.n; ++iy) {
            const int ky = src.kindex(iy);
            if (std::abs(ky) > kmax) continue;
            const int ty = (ky >= 0) ? ky : ky + target.n;
            out.at(tx, ty) = f.at(ix, iy);
        }
    }
    return out;
}

VectorField regrid(const VectorField& u, const Grid& target) {
    return {regrid(u.x(), target), regrid(u.y(), target)};
}

bool all_finite(const ScalarField& f) {
    for (const auto& v : f.coeffs())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace oacm
