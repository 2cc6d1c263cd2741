#pragma once

// Cech-cocycle validation and degree-by-winding for rank-1 transition data
// sampled on overlap circles.

#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bundleflow::clutching {

using cplx = std::complex<double>;

/// Raised when consecutive samples jump by >= pi in argument: the winding
/// integer would alias instead of being wrong-but-detected.
struct UndersampledError : std::runtime_error {
    std::size_t index;
    explicit UndersampledError(std::size_t idx)
        : std::runtime_error("under-sampled loop: argument jump >= pi between samples " +
                             std::to_string(idx) + " and " + std::to_string(idx + 1)),
          index(idx) {}
};

/// Values of a transition function at N >= 8 equispaced points of a circle,
/// in traversal order. Every sample must be non-zero.
class SampledLoop {
public:
    explicit SampledLoop(std::vector<cplx> samples) : samples_(std::move(samples)) {
        if (samples_.size() < 8)
            throw std::invalid_argument("SampledLoop: need at least 8 samples, got " +
                                        std::to_string(samples_.size()));
        for (std::size_t k = 0; k < samples_.size(); ++k)
            if (samples_[k] == cplx(0, 0))
                throw std::invalid_argument("SampledLoop: zero sample at index " +
                                            std::to_string(k));
    }

    const std::vector<cplx>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

    /// Pointwise product of two loops over the same parameterization.
    SampledLoop pointwise_product(const SampledLoop& other) const {
        if (other.size() != size())
            throw std::invalid_argument("SampledLoop: sample counts differ");
        std::vector<cplx> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = samples_[k] * other.samples_[k];
        return SampledLoop(std::move(out));
    }

    SampledLoop pointwise_inverse() const {
        std::vector<cplx> out(size());
        for (std::size_t k = 0; k < size(); ++k) out[k] = 1.0 / samples_[k];
        return SampledLoop(std::move(out));
    }

private:
    std::vector<cplx> samples_;
};

/// Degree of the clutched line bundle: sum of principal-branch argument
/// increments over 2 pi. The result must land within 0.25 of an integer,
/// otherwise the loop is rejected as under-resolved -- never a silent wrong
/// integer.
inline long long winding_number(const SampledLoop& l) {
    const auto& z = l.samples();
    const std::size_t n = z.size();
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx ratio = z[(k + 1) % n] * std::conj(z[k]);
        double delta = std::arg(ratio);
        if (std::abs(delta) >= std::numbers::pi * (1.0 - 1e-12))
            throw UndersampledError(k);
        total += delta;
    }
    double w = total / (2.0 * std::numbers::pi);
    double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.25)
        throw std::runtime_error("winding_number: increments sum to " + std::to_string(w) +
                                 ", not within 0.25 of an integer");
    return (long long)rounded;
}

/// Line bundles are topologically isomorphic iff their degrees agree.
inline bool same_topological_class(long long d1, long long d2) { return d1 == d2; }

/// A family of sampled transition functions over a common overlap circle.
/// Loop sample k of the pair (u, v) sits at circle position
/// (k + offset) mod N; the offsets are the sample index maps.
struct CocycleSpec {
    struct Overlap {
        SampledLoop loop;
        int offset = 0;
    };
    std::map<std::pair<int, int>, Overlap> overlaps;

    void add(int u, int v, SampledLoop loop, int offset = 0) {
        overlaps.insert({{u, v}, Overlap{std::move(loop), offset}});
    }
};

struct CocycleReport {
    bool valid = true;
    bool structural = false; // failure in the index maps, not in the values
    double worst_violation = 0.0;
    std::string detail;
};

/// Checks g_uu = 1, g_vu = g_uv^{-1} and the cocycle identity
/// g_uv g_vw = g_uw pointwise (as deviation of g_uv g_vw g_uw^{-1} from 1 in
/// modulus), all within tol. Inconsistent sample index maps are reported as
/// structural failures.
inline CocycleReport validate_cocycle(const CocycleSpec& c, double tol = 1e-9) {
    CocycleReport rep;
    if (c.overlaps.empty()) {
        rep.valid = false;
        rep.structural = true;
        rep.detail = "no overlaps";
        return rep;
    }
    const std::size_t n = c.overlaps.begin()->second.loop.size();
    for (const auto& [key, ov] : c.overlaps) {
        if (ov.loop.size() != n) {
            rep.valid = false;
            rep.structural = true;
            rep.detail = "sample count mismatch on pair (" + std::to_string(key.first) + ", " +
                         std::to_string(key.second) + ")";
            return rep;
        }
        if (ov.offset < 0 || (std::size_t)ov.offset >= n) {
            rep.valid = false;
            rep.structural = true;
            rep.detail = "index map offset out of range on pair (" + std::to_string(key.first) +
                         ", " + std::to_string(key.second) + ")";
            return rep;
        }
        if (key.first != key.second && !c.overlaps.count({key.second, key.first})) {
            rep.valid = false;
            rep.structural = true;
            rep.detail = "missing reverse overlap for pair (" + std::to_string(key.first) + ", " +
                         std::to_string(key.second) + ")";
            return rep;
        }
    }

    // sample of pair p at circle position m
    auto at = [&](const CocycleSpec::Overlap& ov, std::size_t m) {
        return ov.loop.samples()[(m + n - (std::size_t)ov.offset) % n];
    };
    auto note = [&](double viol, const std::string& what) {
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            rep.detail = what;
        }
        if (viol > tol) rep.valid = false;
    };

    for (const auto& [key, ov] : c.overlaps) {
        auto [u, v] = key;
        if (u == v) {
            for (std::size_t m = 0; m < n; ++m)
                note(std::abs(at(ov, m) - 1.0),
                     "reflexive identity on chart " + std::to_string(u));
            continue;
        }
        const auto& rev = c.overlaps.at({v, u});
        for (std::size_t m = 0; m < n; ++m)
            note(std::abs(at(ov, m) * at(rev, m) - 1.0),
                 "inverse identity on pair (" + std::to_string(u) + ", " + std::to_string(v) + ")");
        for (const auto& [key2, ov2] : c.overlaps) {
            if (key2.first != v || key2.second == u || key2.second == v) continue;
            int w = key2.second;
            auto uw = c.overlaps.find({u, w});
            if (uw == c.overlaps.end()) continue;
            for (std::size_t m = 0; m < n; ++m)
                note(std::abs(at(ov, m) * at(ov2, m) / at(uw->second, m) - 1.0),
                     "cocycle identity on triple (" + std::to_string(u) + ", " +
                         std::to_string(v) + ", " + std::to_string(w) + ")");
        }
    }
    return rep;
}

/// Loop sample file: one "re im" pair per line, index order = traversal
/// order. Blank lines and lines starting with '#' are skipped.
inline SampledLoop read_loop_samples(std::istream& in) {
    std::vector<cplx> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double re, im;
        if (!(ls >> re >> im))
            throw std::invalid_argument("loop samples: cannot parse line " +
                                        std::to_string(lineno));
        samples.emplace_back(re, im);
    }
    return SampledLoop(std::move(samples)); // validates size and zeros
}

} // namespace bundleflow::clutching
