#include "oacm/diagnostics.hpp"

#include <cmath>

#include "oacm/errors.hpp"

namespace oacm {

MaterialLoop make_circle_loop(double cx, double cy, double radius, int K) {
    if (K < 3) throw std::invalid_argument("make_circle_loop: need at least 3 points");
    MaterialLoop loop;
    loop.points.resize(K);
    for (int i = 0; i < K; ++i) {
        const double a = 2.0 * std::numbers::pi * i / K;
        loop.points[i] = {cx + radius * std::cos(a), cy + radius * std::sin(a)};
    }
    return loop;
}

void resample_loop(MaterialLoop& loop, double max_spacing) {
    std::vector<std::array<double, 2>> out;
    const int K = loop.size();
    out.reserve(K);
    for (int i = 0; i < K; ++i) {
        const auto& a = loop.points[(i - 1 + K) % K];
        const auto& p = loop.points[i];
        const auto& q = loop.points[(i + 1) % K];
        const auto& b = loop.points[(i + 2) % K];
        out.push_back(p);
        if (std::hypot(q[0] - p[0], q[1] - p[1]) > max_spacing) {
            // 4-point interpolated midpoint: stays on the material curve to
            // O(h^4), unlike the chord midpoint
            out.push_back({(-a[0] + 9.0 * p[0] + 9.0 * q[0] - b[0]) / 16.0,
                           (-a[1] + 9.0 * p[1] + 9.0 * q[1] - b[1]) / 16.0});
        }
    }
    loop.points = std::move(out);
}

namespace {

struct PointVel {
    const VectorField* u;
    const NoiseBasis* basis;

    // drift velocity at a point
    std::array<double, 2> drift(const VectorField& field, double x, double y) const {
        const auto v = evaluate_at({&field.x(), &field.y()}, x, y);
        return {v[0], v[1]};
    }

    // sum_i dW_i * sign * xi_i at a point
    std::array<double, 2> noise(const std::vector<double>& dW, double sign, double x,
                                double y) const {
        std::array<double, 2> out{0.0, 0.0};
        for (int i = 0; i < basis->M(); ++i) {
            const auto v = evaluate_at({&basis->xis[i].x(), &basis->xis[i].y()}, x, y);
            out[0] += sign * dW[i] * v[0];
            out[1] += sign * dW[i] * v[1];
        }
        return out;
    }
};

}  // namespace

MaterialLoop advect_loop(const MaterialLoop& loop, const VectorField& u_t,
                         const VectorField* u_next, const NoiseBasis& basis,
                         const std::vector<double>& dW, double dt, double noise_sign) {
    MaterialLoop out = loop;
    const PointVel pv{&u_t, &basis};
    const bool stochastic = basis.M() > 0;
    // velocity at the RK3 stage times: f(t), f(t+dt), f(t+dt/2), linearly
    // interpolated when the end-of-step field is available
    VectorField u_end = u_next ? *u_next : u_t;
    VectorField u_mid = u_t;
    if (u_next) {
        u_mid += *u_next;
        u_mid *= 0.5;
    }
    for (auto& p : out.points) {
        double x = p[0], y = p[1];
        if (!stochastic) {
            const auto k0 = pv.drift(u_t, x, y);
            const double x1 = x + dt * k0[0], y1 = y + dt * k0[1];
            const auto k1 = pv.drift(u_end, x1, y1);
            const double x2 = 0.75 * x + 0.25 * (x1 + dt * k1[0]);
            const double y2 = 0.75 * y + 0.25 * (y1 + dt * k1[1]);
            const auto k2 = pv.drift(u_mid, x2, y2);
            p[0] = (x + 2.0 * (x2 + dt * k2[0])) / 3.0;
            p[1] = (y + 2.0 * (y2 + dt * k2[1])) / 3.0;
        } else {
            // Heun, matching the Stratonovich field integrator
            const auto a0 = pv.drift(u_t, x, y);
            const auto n0 = pv.noise(dW, noise_sign, x, y);
            const double xp = x + dt * a0[0] + n0[0];
            const double yp = y + dt * a0[1] + n0[1];
            const auto a1 = pv.drift(u_end, xp, yp);
            const auto n1 = pv.noise(dW, noise_sign, xp, yp);
            p[0] = x + 0.5 * dt * (a0[0] + a1[0]) + 0.5 * (n0[0] + n1[0]);
            p[1] = y + 0.5 * dt * (a0[1] + a1[1]) + 0.5 * (n0[1] + n1[1]);
        }
    }
    return out;
}

double circulation(const MaterialLoop& loop, const VectorField& u,
                   const CoriolisField& coriolis, double Ro) {
    if (loop.size() < 3) throw std::invalid_argument("circulation: degenerate loop");
    VectorField v = u;
    v.axpy(1.0 / Ro, coriolis.R);
    const int K = loop.size();
    std::vector<std::array<double, 2>> vals(K);
    for (int i = 0; i < K; ++i) {
        const auto e = evaluate_at({&v.x(), &v.y()}, loop.points[i][0], loop.points[i][1]);
        vals[i] = {e[0], e[1]};
    }
    double c = 0.0;
    for (int i = 0; i < K; ++i) {
        const int j = (i + 1) % K;
        const double dx = loop.points[j][0] - loop.points[i][0];
        const double dy = loop.points[j][1] - loop.points[i][1];
        c += 0.5 * (vals[i][0] + vals[j][0]) * dx + 0.5 * (vals[i][1] + vals[j][1]) * dy;
    }
    return c;
}

ScalarField potential_vorticity(const CompressibleState& state) {
    VectorField v = state.u;
    v.axpy(1.0 / state.Ro, state.coriolis.R);
    const std::vector<double> w = to_physical(curl_z(v));
    const std::vector<double> d = to_physical(state.D);
    const std::vector<double> th = to_physical(state.theta);
    std::vector<double> q(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        const double m = d[i] * th[i];
        if (!(m > 0.0)) throw PositivityError("potential_vorticity: D*theta not positive");
        q[i] = w[i] / m;
    }
    return to_spectral(state.u.grid(), q);
}

double casimir(const CompressibleState& state, const std::function<double(double)>& phi) {
    const ScalarField qf = potential_vorticity(state);
    const std::vector<double> q = to_physical(qf);
    const std::vector<double> d = to_physical(state.D);
    const std::vector<double> th = to_physical(state.theta);
    double acc = 0.0;
    for (size_t i = 0; i < q.size(); ++i) acc += d[i] * th[i] * phi(q[i]);
    const Grid& g = state.u.grid();
    return acc * g.area() / g.size();
}

double energy_sam(const CompressibleState& state) {
    const auto [ux, uy] = to_physical(state.u);
    const std::vector<double> d = to_physical(state.D);
    const std::vector<double> th = to_physical(state.theta);
    double acc = 0.0;
    for (size_t i = 0; i < d.size(); ++i) {
        const double m = d[i] * th[i];
        acc += 0.5 * d[i] * (ux[i] * ux[i] + uy[i] * uy[i]) +
               state.kappa * std::pow(m, state.alpha);
    }
    const Grid& g = state.u.grid();
    return acc * g.area() / g.size();
}

double ensemble_variance(const Ensemble& ens, const StateVector& expectation) {
    if (ens.size() < 1) throw std::invalid_argument("ensemble_variance: empty ensemble");
    const AtmosPair ea = expectation.atmos();
    double acc = 0.0;
    for (const StateVector& m : ens.members) acc += l2_norm_sq(fluctuation(m.atmos(), ea));
    return acc / ens.size();
}

double variance_rhs(const Ensemble& ens, const StateVector& expectation,
                    const PhysParams& params, const NoiseBasis& basis) {
    if (ens.size() < 1) throw std::invalid_argument("variance_rhs: empty ensemble");
    const AtmosPair ea = expectation.atmos();
    const VectorField& u_hat = expectation.u_a;
    double drift_term = 0.0, noise_term = 0.0;
    for (const StateVector& m : ens.members) {
        const AtmosPair fl = fluctuation(m.atmos(), ea);
        // F~ psi~ = B^L psi~ + C^L psi~ - 1/2 sum (E^lin)^2 psi~ - nu Lap psi~
        AtmosPair F(fl.grid());
        F.u = advect(u_hat, fl.u);
        {
            ScalarField cx = multiply(fl.u.x(), ddx(u_hat.x())) + multiply(fl.u.y(), ddx(u_hat.y()));
            ScalarField cy = multiply(fl.u.x(), ddy(u_hat.x())) + multiply(fl.u.y(), ddy(u_hat.y()));
            F.u += VectorField(std::move(cx), std::move(cy));
        }
        F.u.axpy(1.0 / params.Ro_a, gradient(fl.th));
        F.th = advect(u_hat, fl.th);
        F.th.axpy(params.gamma, fl.th);
        for (const VectorField& xi : basis.xis)
            F.axpy(-0.5, salt_E_linear(salt_E_linear(fl, xi), xi));
        if (params.nu_u_a() != 0.0) F.u.axpy(-params.nu_u_a(), laplacian(fl.u));
        if (params.nu_th_a() != 0.0) F.th.axpy(-params.nu_th_a(), laplacian(fl.th));
        drift_term += l2_inner(fl.u, F.u) + l2_inner(fl.th, F.th);

        const AtmosPair ma = m.atmos();
        for (const VectorField& xi : basis.xis) {
            const AtmosPair e = salt_E(ma, xi, params);
            noise_term += l2_norm_sq(e);
        }
    }
    return (-2.0 * drift_term + noise_term) / ens.size();
}

}  // namespace oacm
