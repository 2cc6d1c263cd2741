#pragma once

// Yang-Mills energy, its exact discrete gradient, and monotone descent to
// the constant-central-curvature condition F = i 2 pi (d/r) Id. In the
// fluctuation variables the target is simply "fluctuation curvature = 0".

#include "bundleflow/lattice.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bundleflow::ym {

using lattice::ConnectionField;
using lattice::CurvatureField;
using lattice::GridSpec;
using lattice::Mat;
using lattice::TangentField;

/// integral of ||F_A||^2: h^2 sum -tr(f^2), f the full curvature. Bounded
/// below by the topological value 4 pi^2 d^2 / r, attained at zero
/// fluctuation.
inline double ym_energy(const ConnectionField& a) {
    CurvatureField f = lattice::curvature(a);
    const int n = a.grid.n;
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& m = f.f.at(i, j);
            s += -(m * m).trace().real();
        }
    return s * a.grid.h() * a.grid.h();
}

inline double energy_lower_bound(const GridSpec& g) {
    const double pi = std::numbers::pi;
    return 4.0 * pi * pi * double(g.degree) * double(g.degree) / g.rank;
}

/// L2 gradient of the energy: the unique tangent field G with
/// <G, eta> = dE(eta) for all eta. Closed form via the adjoints of the
/// centered difference and of the commutator pairing:
///   G_x =  2 (D0y f + [a_y, f]),  G_y = -2 (D0x f + [a_x, f]).
inline TangentField ym_gradient(const ConnectionField& a) {
    CurvatureField f = lattice::curvature(a);
    const int n = a.grid.n;
    TangentField g(a.grid);
    lattice::MatrixGrid dfx = lattice::d0x(f.f), dfy = lattice::d0y(f.f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& fm = f.f.at(i, j);
            const Mat& axm = a.ax.at(i, j);
            const Mat& aym = a.ay.at(i, j);
            g.bx.at(i, j) = 2.0 * (dfy.at(i, j) + aym * fm - fm * aym);
            g.by.at(i, j) = -2.0 * (dfx.at(i, j) + axm * fm - fm * axm);
        }
    return g;
}

/// Distance to the Donaldson condition: max over sites of the operator norm
/// of f - i 2 pi (d/r) Id.
inline double central_residual(const ConnectionField& a) {
    CurvatureField f = lattice::curvature(a);
    const Mat f0 = lattice::background_curvature(a.grid);
    const int n = a.grid.n;
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst, lattice::op_norm(Mat(f.f.at(i, j) - f0)));
    return worst;
}

struct FlowConfig {
    GridSpec grid;
    std::uint64_t seed = 1;
    long max_steps = 50000;
    double step_size = 0.05;
    double tol = 1e-7; // on the L2 gradient norm
    long record_every = 100;

    void validate() const {
        if (max_steps < 1) throw std::invalid_argument("FlowConfig: max_steps must be >= 1");
        if (step_size <= 0) throw std::invalid_argument("FlowConfig: step_size must be > 0");
        if (tol <= 0) throw std::invalid_argument("FlowConfig: tol must be > 0");
        if (record_every < 1) throw std::invalid_argument("FlowConfig: record_every must be >= 1");
    }
};

struct FlowTrace {
    struct Row {
        long step;
        double energy;
        double grad_norm;
        double central_residual;
    };
    std::vector<Row> rows;
};

enum class FlowStatus { Converged, StepBudget, Stalled };

struct FlowResult {
    ConnectionField field;
    FlowTrace trace;
    FlowStatus status;
    long steps = 0;
};

/// Gradient descent with Armijo backtracking. Energy is non-increasing
/// across accepted steps by construction; terminates when the gradient norm
/// drops to cfg.tol or the step budget runs out. Blow-up (non-finite
/// energy of the current state) aborts with the step index.
inline FlowResult run_flow(const ConnectionField& a0, const FlowConfig& cfg) {
    cfg.validate();
    lattice::require_same_grid(a0.grid, cfg.grid, "run_flow");
    constexpr double armijo = 1e-4;

    ConnectionField a = a0;
    FlowResult res{a0, {}, FlowStatus::StepBudget, 0};
    double energy = ym_energy(a);
    double step = cfg.step_size;
    long last_recorded = -1;

    auto record = [&](long s, double e, double gn) {
        res.trace.rows.push_back({s, e, gn, central_residual(a)});
        last_recorded = s;
    };

    for (long s = 1; s <= cfg.max_steps; ++s) {
        if (!std::isfinite(energy))
            throw std::runtime_error("run_flow: non-finite energy at step " + std::to_string(s));
        TangentField g = ym_gradient(a);
        double gnorm2 = lattice::l2_metric(g, g);
        double gnorm = std::sqrt(gnorm2);
        if (gnorm <= cfg.tol) {
            if (last_recorded != s - 1) record(s - 1, energy, gnorm);
            res.status = FlowStatus::Converged;
            res.steps = s - 1;
            res.field = a;
            return res;
        }

        bool accepted = false;
        for (int half = 0; half < 80; ++half) {
            ConnectionField trial(a.grid);
            const int n = a.grid.n;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    trial.ax.at(i, j) = a.ax.at(i, j) - step * g.bx.at(i, j);
                    trial.ay.at(i, j) = a.ay.at(i, j) - step * g.by.at(i, j);
                }
            double etrial = ym_energy(trial);
            if (std::isfinite(etrial) && etrial <= energy - armijo * step * gnorm2) {
                a = trial;
                energy = etrial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (last_recorded != s - 1) record(s - 1, energy, gnorm);
            res.status = FlowStatus::Stalled;
            res.steps = s - 1;
            res.field = a;
            return res;
        }
        res.steps = s;
        if (s % cfg.record_every == 0 || s == cfg.max_steps) {
            TangentField gnew = ym_gradient(a);
            record(s, energy, std::sqrt(lattice::l2_metric(gnew, gnew)));
        }
        step *= 2.0; // re-grow after a successful step
    }

    if (last_recorded != res.steps) {
        TangentField gnew = ym_gradient(a);
        record(res.steps, energy, std::sqrt(lattice::l2_metric(gnew, gnew)));
    }
    TangentField gfin = ym_gradient(a);
    if (std::sqrt(lattice::l2_metric(gfin, gfin)) <= cfg.tol) res.status = FlowStatus::Converged;
    res.field = a;
    return res;
}

/// Point of the rank-1 flat moduli torus: holonomy arguments over 2 pi,
/// reduced mod 1. Requires rank 1, degree 0, and a field within flat_tol of
/// the flat condition.
inline std::pair<double, double> jacobian_coordinates(const ConnectionField& a,
                                                      double flat_tol = 1e-6) {
    if (a.grid.rank != 1 || a.grid.degree != 0)
        throw std::invalid_argument("jacobian_coordinates: need rank 1, degree 0");
    double res = central_residual(a);
    if (res > flat_tol)
        throw std::invalid_argument("jacobian_coordinates: field is not flat (residual " +
                                    std::to_string(res) + ")");
    auto [hx, hy] = lattice::holonomy_loops(a);
    auto frac = [](double arg) {
        double t = arg / (2.0 * std::numbers::pi);
        t -= std::floor(t);
        return t;
    };
    return {frac(std::arg(hx(0, 0))), frac(std::arg(hy(0, 0)))};
}

} // namespace bundleflow::ym
