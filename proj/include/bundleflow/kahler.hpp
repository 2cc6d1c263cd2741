#pragma once

// Finite-dimensional rehearsal of Kaehler reduction: C^n with the diagonal
// circle action z -> e^{-i theta} z, flat metric g = Re<v,w>, complex
// structure J = i, symplectic form omega = g(J., .), and momentum map
// mu(z) = |z|^2 / 2 - level. With these conventions the fundamental vector
// field is X# = -i z and omega(X#, v) = d mu(v) holds exactly.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace bundleflow::kahler {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;

struct ToyPoint {
    Vec z;
    explicit ToyPoint(Vec z_) : z(std::move(z_)) {
        if (z.size() < 2) throw std::invalid_argument("ToyPoint: need n >= 2");
        if (!z.allFinite()) throw std::invalid_argument("ToyPoint: non-finite entry");
    }
};

struct ToyTangent {
    Vec v;
    explicit ToyTangent(Vec v_) : v(std::move(v_)) {}
};

inline cplx inner(const Vec& v, const Vec& w) { return (w.adjoint() * v)(0, 0); }

inline double metric(const Vec& v, const Vec& w) { return inner(v, w).real(); }

/// omega(v, w) = g(Jv, w) = -Im<v, w>.
inline double symplectic(const Vec& v, const Vec& w) { return -inner(v, w).imag(); }

/// Momentum map of the circle action at the given level shift.
inline double moment(const ToyPoint& p, double level) {
    return 0.5 * p.z.squaredNorm() - level;
}

inline Vec fundamental_field(const ToyPoint& p) { return cplx(0, -1) * p.z; }

/// |omega(X#, v) - central finite difference of <mu, X>| at bump t.
inline double moment_relation_residual(const ToyPoint& p, const ToyTangent& t, double level,
                                       double bump = 1e-5) {
    double lhs = symplectic(fundamental_field(p), t.v);
    ToyPoint plus(Vec(p.z + bump * t.v)), minus(Vec(p.z - bump * t.v));
    double fd = (moment(plus, level) - moment(minus, level)) / (2.0 * bump);
    return std::abs(lhs - fd);
}

namespace detail {

// C^n as R^{2n}: (Re z_0, Im z_0, ...).
inline Eigen::VectorXd realify(const Vec& z) {
    Eigen::VectorXd out(2 * z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        out[2 * k] = z[k].real();
        out[2 * k + 1] = z[k].imag();
    }
    return out;
}

inline Vec complexify(const Eigen::VectorXd& x) {
    Vec out(x.size() / 2);
    for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = cplx(x[2 * k], x[2 * k + 1]);
    return out;
}

inline void require_on_level(const ToyPoint& p, double level, const char* what) {
    if (std::abs(moment(p, level)) > 1e-12)
        throw std::invalid_argument(std::string(what) + ": point off the level set");
}

} // namespace detail

/// Worst mismatch of omega(X#, v) against d mu(v) over the 2n real basis
/// tangent vectors -- the testable content of ker T mu = (T orbit)^omega.
/// Exact linear algebra up to rounding.
inline double check_kernel_complement(const ToyPoint& p, double level) {
    detail::require_on_level(p, level, "check_kernel_complement");
    const Eigen::Index n = p.z.size();
    Vec xsharp = fundamental_field(p);
    double worst = 0;
    for (Eigen::Index k = 0; k < 2 * n; ++k) {
        Vec e = Vec::Zero(n);
        e[k / 2] = (k % 2 == 0) ? cplx(1, 0) : cplx(0, 1);
        double lhs = symplectic(xsharp, e);
        double dmu = metric(p.z, e); // gradient of mu is z
        worst = std::max(worst, std::abs(lhs - dmu));
    }
    return worst;
}

/// Dimensions (dim H, dim T orbit, dim J T orbit) of the splitting
/// H (+) T(K.x) (+) J T(K.x) = ker T mu (+) J T(K.x) = T M, computed from
/// singular-value ranks at threshold 1e-10. Rejects z = 0 (stabilizer not
/// free there).
inline std::tuple<int, int, int> check_splitting(const ToyPoint& p, double level) {
    detail::require_on_level(p, level, "check_splitting");
    if (p.z.norm() == 0.0)
        throw std::invalid_argument("check_splitting: the action is not free at z = 0");
    const Eigen::Index n = p.z.size();
    const double thresh = 1e-10;

    Eigen::VectorXd orbit = detail::realify(fundamental_field(p));      // -i z
    Eigen::VectorXd jorbit = detail::realify(Vec(cplx(0, 1) * fundamental_field(p)));

    auto rank_of = [&](const Eigen::MatrixXd& m) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        int r = 0;
        for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()[k] > thresh * std::max(1.0, top)) ++r;
        return r;
    };

    int dim_orbit = rank_of(orbit.transpose());
    int dim_jorbit = rank_of(jorbit.transpose());

    // H = {v : g(z, v) = 0 and g(iz, v) = 0}: kernel of the 2 x 2n matrix
    // of real constraints.
    Eigen::MatrixXd constraints(2, 2 * n);
    constraints.row(0) = detail::realify(p.z).transpose();
    constraints.row(1) = detail::realify(Vec(cplx(0, 1) * p.z)).transpose();
    int dim_h = int(2 * n) - rank_of(constraints);

    // pairwise independence of the orbit directions
    Eigen::MatrixXd stacked(2, 2 * n);
    stacked.row(0) = orbit.transpose();
    stacked.row(1) = jorbit.transpose();
    if (rank_of(stacked) != dim_orbit + dim_jorbit)
        throw std::runtime_error("check_splitting: orbit and J orbit overlap");

    return {dim_h, dim_orbit, dim_jorbit};
}

/// Orthogonal projection onto H_z (the model of the reduced tangent space).
inline Vec project_horizontal(const ToyPoint& p, const Vec& v) {
    Vec z = p.z;
    Vec iz = cplx(0, 1) * z;
    double nz2 = z.squaredNorm();
    return v - (metric(v, z) / nz2) * z - (metric(v, iz) / nz2) * iz;
}

/// | i* omega - p* omega_red | on a tangent pair of the level set: both
/// lifts of the projected pair must give the same value (the form is basic).
inline double pullback_residual(const ToyPoint& p, const Vec& v, const Vec& w) {
    return std::abs(symplectic(v, w) -
                    symplectic(project_horizontal(p, v), project_horizontal(p, w)));
}

struct ReducedArea {
    double value = 0;
    double std_error = 0;
    bool reliable = true; // std_error <= 1% of value
};

/// Total symplectic area of the reduced space mu^{-1}(c)/K for n = 2, by
/// Monte-Carlo over the level sphere: sample z, take an oriented orthonormal
/// pair (e, Je) of H_z, evaluate omega_red through its lifts, and scale by
/// vol(S^3(R)) / (2 pi R) (all circle fibers have length 2 pi R).
inline ReducedArea reduced_area(int n, double level, long samples, std::uint64_t seed = 1) {
    if (n != 2) throw std::invalid_argument("reduced_area: implemented for n = 2 only");
    if (level <= 0) throw std::invalid_argument("reduced_area: level must be positive");
    if (samples < 10000) throw std::invalid_argument("reduced_area: need at least 10^4 samples");

    const double radius = std::sqrt(2.0 * level);
    const double pi = std::numbers::pi;
    // vol(S^3(R)) = 2 pi^2 R^3; dividing by fiber length 2 pi R leaves pi R^2
    const double geometric_factor = pi * radius * radius;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sum = 0, sumsq = 0;
    for (long s = 0; s < samples; ++s) {
        Vec z(2);
        do {
            z[0] = cplx(gauss(rng), gauss(rng));
            z[1] = cplx(gauss(rng), gauss(rng));
        } while (z.norm() < 1e-12);
        z *= radius / z.norm();
        ToyPoint p(z);

        Vec raw(2);
        raw[0] = cplx(gauss(rng), gauss(rng));
        raw[1] = cplx(gauss(rng), gauss(rng));
        Vec e = project_horizontal(p, raw);
        if (e.norm() < 1e-9) { --s; continue; }
        e /= e.norm();
        Vec je = cplx(0, 1) * e; // H_z is J-invariant

        sum += symplectic(e, je);
        sumsq += symplectic(e, je) * symplectic(e, je);
    }
    double mean = sum / samples;
    double var = std::max(0.0, sumsq / samples - mean * mean);

    ReducedArea out;
    out.value = geometric_factor * mean;
    out.std_error = geometric_factor * std::sqrt(var / samples);
    out.reliable = out.std_error <= 0.01 * std::abs(out.value);
    return out;
}

} // namespace bundleflow::kahler
