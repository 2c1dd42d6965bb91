#pragma once

// Flat tori R^n / Lambda presented by full-rank lattices: exact loop and
// geodesic counting via pruned coefficient enumeration, and the pigeonhole
// witness construction (a point whose fiber meets a ball many times).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "common.hpp"
#include "errors.hpp"

namespace geoloop {

using Matrix = std::vector<std::vector<double>>;

namespace detail {

// |det| by Gaussian elimination with partial pivoting.
inline double abs_determinant(Matrix a) {
    const std::size_t n = a.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) return 0.0;
        if (pivot != col) std::swap(a[pivot], a[col]);
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return std::abs(det);
}

// Upper-triangular R with G = R^T R. Throws SingularBasis on a
// nonpositive pivot (G not positive definite at working precision).
inline Matrix cholesky_upper(const Matrix& g) {
    const std::size_t n = g.size();
    Matrix r(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = g[i][j];
            for (std::size_t k = 0; k < i; ++k) s -= r[k][i] * r[k][j];
            if (i == j) {
                if (s <= kRankTol * kRankTol)
                    throw SingularBasis("gram matrix is not positive definite");
                r[i][i] = std::sqrt(s);
            } else {
                r[i][j] = s / r[i][i];
            }
        }
    }
    return r;
}

inline double quad_form(const Matrix& g, const std::vector<double>& y) {
    double q = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) q += y[i] * g[i][j] * y[j];
    return q;
}

} // namespace detail

struct LatticeModel {
    int dimension = 0;
    Matrix basis; // rows are basis vectors of Lambda
    Matrix gram;  // basis * basis^T, cached
    double covolume = 0.0; // |det(basis)| = vol(M)
    Matrix chol;  // upper-triangular R with gram = R^T R, cached for enumeration
};

struct LatticeVector {
    std::vector<int> coeffs;
    double length = 0.0;
    bool primitive = false;
};

inline double lattice_vector_length(const LatticeModel& lattice, const std::vector<int>& coeffs) {
    std::vector<double> y(coeffs.begin(), coeffs.end());
    return std::sqrt(detail::quad_form(lattice.gram, y));
}

inline bool coeffs_primitive(const std::vector<int>& coeffs) {
    int g = 0;
    for (int c : coeffs) g = std::gcd(g, std::abs(c));
    return g == 1;
}

inline LatticeModel make_lattice(const Matrix& basis) {
    const std::size_t n = basis.size();
    if (n == 0) throw SingularBasis("empty basis");
    for (const auto& row : basis) {
        if (row.size() != n) throw SingularBasis("basis matrix must be square");
        for (double v : row)
            if (!std::isfinite(v)) throw SingularBasis("basis entries must be finite");
    }
    const double det = detail::abs_determinant(basis);
    if (det <= kRankTol) {
        std::ostringstream msg;
        msg << "singular basis: |det| = " << det << " <= " << kRankTol;
        throw SingularBasis(msg.str());
    }
    LatticeModel lattice;
    lattice.dimension = static_cast<int>(n);
    lattice.basis = basis;
    lattice.gram.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += basis[i][k] * basis[j][k];
            lattice.gram[i][j] = s;
        }
    lattice.covolume = det;
    lattice.chol = detail::cholesky_upper(lattice.gram);
    return lattice;
}

namespace detail {

// All integer points c with ||(c - center) B|| <= radius + kLengthTol,
// by depth-first coefficient search with Cholesky interval pruning
// (Fincke-Pohst). The pruning radius carries an extra margin; every
// candidate is re-checked against the exact quadratic form.
template <typename Emit>
inline void enumerate_ellipsoid(const LatticeModel& lattice, const std::vector<double>& center,
                                double radius, Emit&& emit) {
    const int n = lattice.dimension;
    const Matrix& r = lattice.chol;
    const double accept = radius + kLengthTol;
    const double prune = accept + 1e-7;
    const double prune_sq = prune * prune;

    std::vector<int> c(n, 0);
    std::vector<double> y(n, 0.0);

    // walk levels n-1 .. 0; rem = prune_sq minus squared terms of levels > i
    auto recurse = [&](auto&& self, int i, double rem) -> void {
        double shift = 0.0;
        for (int j = i + 1; j < n; ++j) shift += r[i][j] * (c[j] - center[j]);
        const double half_width = std::sqrt(std::max(rem, 0.0));
        const double lo = center[i] + (-half_width - shift) / r[i][i];
        const double hi = center[i] + (half_width - shift) / r[i][i];
        const long long lo_i = static_cast<long long>(std::ceil(lo - 1e-9));
        const long long hi_i = static_cast<long long>(std::floor(hi + 1e-9));
        for (long long ci = lo_i; ci <= hi_i; ++ci) {
            const double term = r[i][i] * (ci - center[i]) + shift;
            const double rem2 = rem - term * term;
            if (rem2 < -1e-9) continue;
            c[i] = static_cast<int>(ci);
            if (i == 0) {
                for (int k = 0; k < n; ++k) y[k] = c[k] - center[k];
                if (std::sqrt(quad_form(lattice.gram, y)) <= accept) emit(c);
            } else {
                self(self, i - 1, rem2);
            }
        }
    };
    recurse(recurse, n - 1, prune_sq);
}

} // namespace detail

// Nonzero lattice vectors of length <= t, sorted by (length, coefficients).
inline std::vector<LatticeVector> enumerate_vectors(const LatticeModel& lattice, double t) {
    if (!(t > 0.0)) throw Error("enumerate_vectors: t must be positive");
    const double expected =
        euclidean_ball_volume(lattice.dimension, t) / lattice.covolume;
    if (expected > 5e7) throw Error("enumerate_vectors: radius too large for desk-scale enumeration");

    std::vector<LatticeVector> out;
    const std::vector<double> origin(lattice.dimension, 0.0);
    detail::enumerate_ellipsoid(lattice, origin, t, [&](const std::vector<int>& c) {
        if (std::all_of(c.begin(), c.end(), [](int v) { return v == 0; })) return;
        LatticeVector v;
        v.coeffs = c;
        v.length = lattice_vector_length(lattice, c);
        v.primitive = coeffs_primitive(c);
        out.push_back(std::move(v));
    });
    std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
        if (a.length != b.length) return a.length < b.length;
        return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                            b.coeffs.end());
    });
    return out;
}

// P_q(t) on the flat torus: nontrivial homotopy classes with a loop of
// length <= t. Base-point independent (the torus is homogeneous).
inline std::size_t loop_count_flat(const LatticeModel& lattice, double t) {
    return enumerate_vectors(lattice, t).size();
}

inline std::size_t primitive_count_flat(const LatticeModel& lattice, double t) {
    const auto vectors = enumerate_vectors(lattice, t);
    return static_cast<std::size_t>(
        std::count_if(vectors.begin(), vectors.end(), [](const LatticeVector& v) { return v.primitive; }));
}

// v(t): primitive closed geodesics, a geodesic identified with its
// orientation reversal (v ~ -v), hence half the primitive vector count.
inline std::size_t closed_geodesic_count_flat(const LatticeModel& lattice, double t) {
    return primitive_count_flat(lattice, t) / 2;
}

struct WitnessReport {
    std::vector<double> center;             // point x whose fiber is multiply covered
    int multiplicity = 0;                   // lattice points within r of x
    std::vector<std::vector<int>> translates;
};

struct WitnessSearchParams {
    int grid_resolution = 64; // cells per side of the fundamental cell
    int refine_levels = 3;
    int refine_factor = 4;
};

namespace detail {

struct WitnessCandidate {
    int multiplicity = 0;
    double max_distance = 0.0;
    std::vector<double> u; // coefficient-space coordinates
};

inline bool better_candidate(const WitnessCandidate& a, const WitnessCandidate& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
    if (a.max_distance != b.max_distance) return a.max_distance < b.max_distance;
    return std::lexicographical_compare(a.u.begin(), a.u.end(), b.u.begin(), b.u.end());
}

inline WitnessCandidate evaluate_witness_point(const LatticeModel& lattice,
                                               const std::vector<double>& u, double r) {
    WitnessCandidate cand;
    cand.u = u;
    std::vector<double> y(lattice.dimension, 0.0);
    enumerate_ellipsoid(lattice, u, r, [&](const std::vector<int>& c) {
        for (int k = 0; k < lattice.dimension; ++k) y[k] = c[k] - u[k];
        const double d = std::sqrt(quad_form(lattice.gram, y));
        ++cand.multiplicity;
        cand.max_distance = std::max(cand.max_distance, d);
    });
    return cand;
}

template <typename Visit>
inline void for_each_grid_point(int dim, const std::vector<double>& lo, double step, int count,
                                Visit&& visit) {
    std::vector<int> idx(dim, 0);
    std::vector<double> u(dim, 0.0);
    while (true) {
        for (int k = 0; k < dim; ++k) u[k] = lo[k] + step * idx[k];
        visit(u);
        int k = dim - 1;
        while (k >= 0 && ++idx[k] == count) idx[k--] = 0;
        if (k < 0) break;
    }
}

} // namespace detail

// Pigeonhole witness: a point x with >= m distinct lattice points within
// Euclidean distance r, found by maximizing fiber multiplicity over a grid
// of the fundamental cell with local refinement. The hypothesis
// vol(B_r) > m * covolume is enforced for m >= 2; a single covering point
// exists for any r > 0, so m = 1 carries no volume requirement.
inline WitnessReport blichfeldt_witness(const LatticeModel& lattice, double r, int m,
                                        const WitnessSearchParams& params = {}) {
    if (!(r > 0.0)) throw Error("blichfeldt_witness: r must be positive");
    if (m < 1) throw Error("blichfeldt_witness: m must be a positive integer");
    if (euclidean_ball_volume(lattice.dimension, r) / lattice.covolume > 1e6)
        throw Error("blichfeldt_witness: radius too large for desk-scale search");
    if (m >= 2) {
        const double vol_ball = euclidean_ball_volume(lattice.dimension, r);
        const double needed = static_cast<double>(m) * lattice.covolume;
        if (!(vol_ball > needed)) {
            std::ostringstream msg;
            msg << "hypothesis vol(B_r) > m*vol(M) fails: " << vol_ball << " <= " << needed;
            throw HypothesisNotMet(msg.str());
        }
    }

    const int n = lattice.dimension;
    detail::WitnessCandidate best;
    best.multiplicity = -1;

    double step = 1.0 / params.grid_resolution;
    std::vector<double> lo(n, 0.0);
    detail::for_each_grid_point(n, lo, step, params.grid_resolution, [&](const std::vector<double>& u) {
        auto cand = detail::evaluate_witness_point(lattice, u, r);
        if (detail::better_candidate(cand, best)) best = std::move(cand);
    });

    for (int level = 0; level < params.refine_levels; ++level) {
        const double sub_step = step / params.refine_factor;
        std::vector<double> sub_lo(n);
        for (int k = 0; k < n; ++k) sub_lo[k] = best.u[k] - step;
        detail::for_each_grid_point(n, sub_lo, sub_step, 2 * params.refine_factor + 1,
                                    [&](const std::vector<double>& u) {
                                        auto cand = detail::evaluate_witness_point(lattice, u, r);
                                        if (detail::better_candidate(cand, best)) best = std::move(cand);
                                    });
        step = sub_step;
    }

    if (best.multiplicity < m) {
        std::ostringstream msg;
        msg << "grid refinement found multiplicity " << best.multiplicity << " < " << m;
        throw SearchExhausted(msg.str());
    }

    WitnessReport report;
    report.center.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) report.center[k] += best.u[i] * lattice.basis[i][k];
    report.multiplicity = best.multiplicity;

    struct Translate {
        std::vector<int> coeffs;
        double distance;
    };
    std::vector<Translate> found;
    std::vector<double> y(n, 0.0);
    detail::enumerate_ellipsoid(lattice, best.u, r, [&](const std::vector<int>& c) {
        for (int k = 0; k < n; ++k) y[k] = c[k] - best.u[k];
        found.push_back({c, std::sqrt(detail::quad_form(lattice.gram, y))});
    });
    std::sort(found.begin(), found.end(), [](const Translate& a, const Translate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                            b.coeffs.end());
    });
    for (auto& tr : found) report.translates.push_back(std::move(tr.coeffs));
    report.multiplicity = static_cast<int>(report.translates.size());
    return report;
}

} // namespace geoloop
