#pragma once

// Unitary gauge fields on the unit-area flat torus, discretized on an n x n
// periodic grid with collocated fields and centered differences D0. The
// centered difference is exactly skew-adjoint under the periodic site sum,
// which makes the momentum-map relation and the curvature-translate formula
// hold to rounding. The degree d lives in a fixed central background with
// curvature i 2 pi (d/r) Id per unit area; the stored state is the periodic
// anti-Hermitian fluctuation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bundleflow::lattice {

using cplx = std::complex<double>;

// Matrices are rank x rank with a hard cap so storage stays on the stack.
constexpr int kMaxRank = 8;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxRank, kMaxRank>;

struct GridSpec {
    int n = 8;           // grid side, power of two >= 8
    int rank = 1;        // r >= 1
    long long degree = 0;

    GridSpec() = default;
    GridSpec(int n_, int rank_, long long degree_) : n(n_), rank(rank_), degree(degree_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("GridSpec: n must be a power of two >= 8");
        if (rank < 1 || rank > kMaxRank)
            throw std::invalid_argument("GridSpec: rank must be in [1, " +
                                        std::to_string(kMaxRank) + "]");
    }

    double h() const { return 1.0 / n; }          // n^2 h^2 = 1: unit volume
    std::size_t sites() const { return std::size_t(n) * n; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline Mat ah_project(const Mat& m) { return 0.5 * (m - m.adjoint()); }

inline double hermitian_defect(const Mat& m) {
    return (m + m.adjoint()).cwiseAbs().maxCoeff();
}

/// exp of an anti-Hermitian matrix, exactly unitary up to rounding:
/// x = i h with h Hermitian, so exp(x) = V diag(e^{i lambda}) V^dagger.
inline Mat exp_ah(const Mat& x) {
    Mat herm = cplx(0, -1) * x;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    const auto& lam = es.eigenvalues();
    Mat d = Mat::Zero(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        d(k, k) = std::polar(1.0, lam[k]);
    return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

/// Nearest unitary (polar factor).
inline Mat polar_unitary(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

/// Operator norm (largest singular value).
inline double op_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

/// n x n array of r x r complex matrices; the shared storage of all fields.
class MatrixGrid {
public:
    MatrixGrid() = default;
    explicit MatrixGrid(const GridSpec& g)
        : grid_(g), m_(g.sites(), Mat::Zero(g.rank, g.rank)) {}

    const GridSpec& grid() const { return grid_; }

    Mat& at(int i, int j) { return m_[std::size_t(i) * grid_.n + j]; }
    const Mat& at(int i, int j) const { return m_[std::size_t(i) * grid_.n + j]; }

    // periodic access
    const Mat& atp(int i, int j) const {
        const int n = grid_.n;
        return m_[std::size_t((i % n + n) % n) * n + ((j % n + n) % n)];
    }

    double max_abs() const {
        double v = 0;
        for (const auto& m : m_) v = std::max(v, m.cwiseAbs().maxCoeff());
        return v;
    }

private:
    GridSpec grid_;
    std::vector<Mat> m_;
};

/// Centered periodic difference in x: (g[i+1,j] - g[i-1,j]) / 2h.
inline MatrixGrid d0x(const MatrixGrid& g) {
    const int n = g.grid().n;
    const double inv2h = 0.5 * n;
    MatrixGrid out(g.grid());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = (g.atp(i + 1, j) - g.atp(i - 1, j)) * inv2h;
    return out;
}

inline MatrixGrid d0y(const MatrixGrid& g) {
    const int n = g.grid().n;
    const double inv2h = 0.5 * n;
    MatrixGrid out(g.grid());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = (g.atp(i, j + 1) - g.atp(i, j - 1)) * inv2h;
    return out;
}

namespace detail {
inline MatrixGrid ah_projected(MatrixGrid g) {
    const int n = g.grid().n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.at(i, j) = ah_project(g.at(i, j));
    return g;
}
} // namespace detail

/// The periodic anti-Hermitian fluctuation a = (a_x, a_y) around the central
/// background of degree d. Constructors project onto u(r).
struct ConnectionField {
    GridSpec grid;
    MatrixGrid ax, ay;

    explicit ConnectionField(const GridSpec& g) : grid(g), ax(g), ay(g) {}
    ConnectionField(const GridSpec& g, MatrixGrid x, MatrixGrid y)
        : grid(g), ax(detail::ah_projected(std::move(x))), ay(detail::ah_projected(std::move(y))) {}
};

/// Tangent vector to the affine space of connections: a u(r)-valued 1-form.
struct TangentField {
    GridSpec grid;
    MatrixGrid bx, by;

    explicit TangentField(const GridSpec& g) : grid(g), bx(g), by(g) {}
    TangentField(const GridSpec& g, MatrixGrid x, MatrixGrid y)
        : grid(g), bx(detail::ah_projected(std::move(x))), by(detail::ah_projected(std::move(y))) {}
};

/// Infinitesimal gauge parameter: a u(r)-valued 0-form.
struct EndoField {
    GridSpec grid;
    MatrixGrid xi;

    explicit EndoField(const GridSpec& g) : grid(g), xi(g) {}
    EndoField(const GridSpec& g, MatrixGrid x) : grid(g), xi(detail::ah_projected(std::move(x))) {}
};

/// Finite gauge transformation: a field of unitary matrices. Constructors
/// re-unitarize each site value by polar projection.
struct GaugeField {
    GridSpec grid;
    MatrixGrid u;

    explicit GaugeField(const GridSpec& g) : grid(g), u(g) {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                u.at(i, j) = Mat::Identity(g.rank, g.rank);
    }
    GaugeField(const GridSpec& g, MatrixGrid raw) : grid(g), u(std::move(raw)) {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                u.at(i, j) = polar_unitary(u.at(i, j));
    }
};

/// Coefficient of dx^dy of the curvature 2-form, background included.
struct CurvatureField {
    GridSpec grid;
    MatrixGrid f;

    explicit CurvatureField(const GridSpec& g) : grid(g), f(g) {}
};

/// Central background curvature i 2 pi (d/r) Id per unit area.
inline Mat background_curvature(const GridSpec& g) {
    const double c = 2.0 * std::numbers::pi * double(g.degree) / g.rank;
    return cplx(0, c) * Mat::Identity(g.rank, g.rank);
}

/// F = F0 + D0x a_y - D0y a_x + [a_x, a_y]; anti-Hermitian pointwise.
inline CurvatureField curvature(const ConnectionField& a) {
    const int n = a.grid.n;
    CurvatureField out(a.grid);
    MatrixGrid dxy = d0x(a.ay), dyx = d0y(a.ax);
    const Mat f0 = background_curvature(a.grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& x = a.ax.at(i, j);
            const Mat& y = a.ay.at(i, j);
            out.f.at(i, j) = f0 + dxy.at(i, j) - dyx.at(i, j) + (x * y - y * x);
        }
    return out;
}

/// Covariant exterior derivative of a 1-form:
/// (d_A b)_{xy} = D0x b_y - D0y b_x + [a_x, b_y] + [b_x, a_y].
inline CurvatureField dA_one_form(const ConnectionField& a, const TangentField& b) {
    require_same_grid(a.grid, b.grid, "dA_one_form");
    const int n = a.grid.n;
    CurvatureField out(a.grid);
    MatrixGrid dxy = d0x(b.by), dyx = d0y(b.bx);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& axm = a.ax.at(i, j);
            const Mat& aym = a.ay.at(i, j);
            const Mat& bxm = b.bx.at(i, j);
            const Mat& bym = b.by.at(i, j);
            out.f.at(i, j) = dxy.at(i, j) - dyx.at(i, j) + (axm * bym - bym * axm) +
                             (bxm * aym - aym * bxm);
        }
    return out;
}

/// max site/entry deviation in F_{A+b} = F_A + d_A b + [b_x, b_y]. The
/// discrete curvature is exactly quadratic, so this is rounding noise.
inline double curvature_translate_residual(const ConnectionField& a, const TangentField& b) {
    require_same_grid(a.grid, b.grid, "curvature_translate_residual");
    const int n = a.grid.n;
    ConnectionField shifted(a.grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            shifted.ax.at(i, j) = a.ax.at(i, j) + b.bx.at(i, j);
            shifted.ay.at(i, j) = a.ay.at(i, j) + b.by.at(i, j);
        }
    CurvatureField lhs = curvature(shifted);
    CurvatureField fa = curvature(a);
    CurvatureField dab = dA_one_form(a, b);
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& bxm = b.bx.at(i, j);
            const Mat& bym = b.by.at(i, j);
            Mat rhs = fa.f.at(i, j) + dab.f.at(i, j) + (bxm * bym - bym * bxm);
            worst = std::max(worst, (lhs.f.at(i, j) - rhs).cwiseAbs().maxCoeff());
        }
    return worst;
}

/// Finite gauge action u . a = u a u^dagger - (D0 u) u^dagger, with the
/// derivative term projected back onto u(r) (the discrete derivative of a
/// unitary field is anti-Hermitian only to O(h^2)). The central background
/// is untouched.
inline ConnectionField gauge_act(const GaugeField& u, const ConnectionField& a) {
    require_same_grid(u.grid, a.grid, "gauge_act");
    const int n = a.grid.n;
    ConnectionField out(a.grid);
    MatrixGrid dux = d0x(u.u), duy = d0y(u.u);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& um = u.u.at(i, j);
            Mat udag = um.adjoint();
            out.ax.at(i, j) = um * a.ax.at(i, j) * udag + ah_project(-dux.at(i, j) * udag);
            out.ay.at(i, j) = um * a.ay.at(i, j) * udag + ah_project(-duy.at(i, j) * udag);
        }
    return out;
}

/// Fundamental vector field of the gauge action: xi# = -d_A xi, with
/// components -(D0 xi + [a, xi]). Exact discrete formula.
inline TangentField infinitesimal_action(const EndoField& xi, const ConnectionField& a) {
    require_same_grid(xi.grid, a.grid, "infinitesimal_action");
    const int n = a.grid.n;
    TangentField out(a.grid);
    MatrixGrid dx = d0x(xi.xi), dy = d0y(xi.xi);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& x = xi.xi.at(i, j);
            const Mat& axm = a.ax.at(i, j);
            const Mat& aym = a.ay.at(i, j);
            out.bx.at(i, j) = -(dx.at(i, j) + axm * x - x * axm);
            out.by.at(i, j) = -(dy.at(i, j) + aym * x - x * aym);
        }
    return out;
}

/// Atiyah-Bott pairing omega(a, b) = integral kappa(a ^ b), kappa = -tr:
/// h^2 sum over sites of [-tr(a_x b_y) + tr(b_x a_y)]. Exactly antisymmetric.
inline double ab_form(const TangentField& a, const TangentField& b) {
    require_same_grid(a.grid, b.grid, "ab_form");
    const int n = a.grid.n;
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += (-(a.bx.at(i, j) * b.by.at(i, j)).trace() +
                  (b.bx.at(i, j) * a.by.at(i, j)).trace())
                     .real();
    return s * a.grid.h() * a.grid.h();
}

/// Hodge star on 1-forms: (a_x, a_y) -> (-a_y, a_x). Squares to -Id.
inline TangentField hodge_star(const TangentField& a) {
    TangentField out(a.grid);
    const int n = a.grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.bx.at(i, j) = -a.by.at(i, j);
            out.by.at(i, j) = a.bx.at(i, j);
        }
    return out;
}

/// L2 metric (a|b) = omega(a, *b); symmetric and positive definite.
inline double l2_metric(const TangentField& a, const TangentField& b) {
    return ab_form(a, hodge_star(b));
}

inline double l2_norm(const TangentField& a) { return std::sqrt(l2_metric(a, a)); }

/// | omega(xi#, eta) - integral kappa(xi (x) d_A eta) |. Zero in exact
/// arithmetic: D0 is skew-adjoint under the periodic sum and the commutator
/// pairing is adjoint pointwise, so only rounding remains.
inline double momentum_residual(const ConnectionField& a, const EndoField& xi,
                                const TangentField& eta) {
    require_same_grid(a.grid, xi.grid, "momentum_residual");
    require_same_grid(a.grid, eta.grid, "momentum_residual");
    const int n = a.grid.n;
    double lhs = ab_form(infinitesimal_action(xi, a), eta);
    CurvatureField dae = dA_one_form(a, eta);
    double rhs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rhs += -(xi.xi.at(i, j) * dae.f.at(i, j)).trace().real();
    rhs *= a.grid.h() * a.grid.h();
    return std::abs(lhs - rhs);
}

/// (0,1)-part of the fluctuation: B = (a_x + i a_y) / 2, the dzbar
/// coefficient.
inline MatrixGrid dolbeault_of(const ConnectionField& a) {
    const int n = a.grid.n;
    MatrixGrid out(a.grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = 0.5 * (a.ax.at(i, j) + cplx(0, 1) * a.ay.at(i, j));
    return out;
}

/// Unique unitary connection with the given (0,1)-part:
/// a_x = B - B^dagger, a_y = -i (B + B^dagger). Exact inverse of dolbeault_of.
inline ConnectionField unitary_of(const GridSpec& g, const MatrixGrid& b) {
    require_same_grid(g, b.grid(), "unitary_of");
    ConnectionField out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            Mat bd = b.at(i, j).adjoint();
            out.ax.at(i, j) = b.at(i, j) - bd;
            out.ay.at(i, j) = cplx(0, -1) * (b.at(i, j) + bd);
        }
    return out;
}

/// Complex gauge action g . A = A - [(d_A^{0,1} g) g^{-1} - h.c.*]. For
/// unitary g this reduces to gauge_act up to O(h^2) (discrete Leibniz for
/// the inverse is inexact); for constant g the two agree exactly.
inline ConnectionField complex_gauge_act(const MatrixGrid& g, const ConnectionField& a) {
    require_same_grid(g.grid(), a.grid, "complex_gauge_act");
    const int n = a.grid.n;
    ConnectionField out(a.grid);
    MatrixGrid dgx = d0x(g), dgy = d0y(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Mat& gm = g.at(i, j);
            Eigen::FullPivLU<Mat> lu(gm);
            if (!lu.isInvertible())
                throw std::domain_error("complex_gauge_act: singular value at site (" +
                                        std::to_string(i) + ", " + std::to_string(j) + ")");
            Mat ginv = lu.inverse();
            const Mat& axm = a.ax.at(i, j);
            const Mat& aym = a.ay.at(i, j);
            Mat dgax = dgx.at(i, j) + axm * gm - gm * axm; // d_A g, x component
            Mat dgay = dgy.at(i, j) + aym * gm - gm * aym;
            Mat beta = 0.5 * (dgax + cplx(0, 1) * dgay);   // dzbar coefficient
            Mat m = beta * ginv;
            out.ax.at(i, j) = axm - (m - m.adjoint());
            out.ay.at(i, j) = aym + cplx(0, 1) * (m + m.adjoint());
        }
    return out;
}

/// Wilson loops of the full connection along the two fundamental cycles:
/// path-ordered products of exp(h (A0 + a)) along row 0 and column 0. In the
/// Landau-gauge background (A0_x = 0, A0_y = i 2 pi (d/r) x Id) the
/// background contributes nothing on these two loops, so only the
/// fluctuation enters. Later sites multiply on the left.
inline std::pair<Mat, Mat> holonomy_loops(const ConnectionField& a) {
    const int n = a.grid.n;
    const double h = a.grid.h();
    Mat hx = Mat::Identity(a.grid.rank, a.grid.rank);
    Mat hy = hx;
    for (int i = 0; i < n; ++i) hx = exp_ah(Mat(h * a.ax.at(i, 0))) * hx;
    for (int j = 0; j < n; ++j) hy = exp_ah(Mat(h * a.ay.at(0, j))) * hy;
    return {hx, hy};
}

/// (1 / 2 pi i) h^2 sum tr F; equals the degree d up to rounding for every
/// field, since the periodic fluctuation integrates to zero.
inline double total_degree(const ConnectionField& a) {
    CurvatureField f = curvature(a);
    const int n = a.grid.n;
    double s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s += f.f.at(i, j).trace().imag();
    return s * a.grid.h() * a.grid.h() / (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Seeded field synthesis. Smooth fields are low-frequency Fourier sums whose
// coefficients depend only on the seed, so the same continuum field can be
// sampled on grids of different resolution (used by the refinement tests and
// by the flow initializer).

/// A smooth anti-Hermitian matrix function on the torus.
class SmoothAHSampler {
public:
    SmoothAHSampler(int rank, int kmax, double amplitude, std::mt19937_64& rng) : rank_(rank) {
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int kx = -kmax; kx <= kmax; ++kx)
            for (int ky = -kmax; ky <= kmax; ++ky) {
                Mode m;
                m.kx = kx;
                m.ky = ky;
                m.c = Mat::Zero(rank, rank);
                for (int p = 0; p < rank; ++p)
                    for (int q = 0; q < rank; ++q)
                        m.c(p, q) = amplitude * cplx(unif(rng), unif(rng));
                modes_.push_back(std::move(m));
            }
    }

    Mat eval(double x, double y) const {
        Mat m = Mat::Zero(rank_, rank_);
        for (const auto& mode : modes_) {
            double phase = 2.0 * std::numbers::pi * (mode.kx * x + mode.ky * y);
            m += mode.c * std::polar(1.0, phase);
        }
        return ah_project(m);
    }

private:
    struct Mode {
        int kx, ky;
        Mat c;
    };
    int rank_;
    std::vector<Mode> modes_;
};

inline MatrixGrid sample_grid(const GridSpec& g, const SmoothAHSampler& s) {
    MatrixGrid out(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            out.at(i, j) = s.eval(double(i) / g.n, double(j) / g.n);
    return out;
}

/// Smooth seeded random fluctuation (Fourier-synthesized, grid-independent).
inline ConnectionField random_connection(const GridSpec& g, std::uint64_t seed,
                                         double amplitude = 0.3, int kmax = 3) {
    std::mt19937_64 rng(seed);
    SmoothAHSampler sx(g.rank, kmax, amplitude, rng), sy(g.rank, kmax, amplitude, rng);
    return {g, sample_grid(g, sx), sample_grid(g, sy)};
}

/// Rough (site-iid) random fields for exactness tests.
inline TangentField random_tangent(const GridSpec& g, std::mt19937_64& rng,
                                   double amplitude = 1.0) {
    std::uniform_real_distribution<double> unif(-amplitude, amplitude);
    MatrixGrid x(g), y(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            Mat mx(g.rank, g.rank), my(g.rank, g.rank);
            for (int p = 0; p < g.rank; ++p)
                for (int q = 0; q < g.rank; ++q) {
                    mx(p, q) = cplx(unif(rng), unif(rng));
                    my(p, q) = cplx(unif(rng), unif(rng));
                }
            x.at(i, j) = mx;
            y.at(i, j) = my;
        }
    return {g, std::move(x), std::move(y)};
}

inline ConnectionField random_rough_connection(const GridSpec& g, std::mt19937_64& rng,
                                               double amplitude = 1.0) {
    TangentField t = random_tangent(g, rng, amplitude);
    return {g, std::move(t.bx), std::move(t.by)};
}

inline EndoField random_endo(const GridSpec& g, std::mt19937_64& rng, double amplitude = 1.0) {
    TangentField t = random_tangent(g, rng, amplitude);
    return {g, std::move(t.bx)};
}

} // namespace bundleflow::lattice
