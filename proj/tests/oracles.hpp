#pragma once

// Test-only oracles. Each reimplements its answer by the most transparent
// route available (box scans, exhaustive enumeration, direct formulas) and
// stays independent of the library's pruned enumeration paths.

#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracles {

using IntVec = std::vector<int>;
using Basis = std::vector<std::vector<double>>;

inline double quad(const Basis& gram, const IntVec& c) {
    double q = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) q += c[i] * gram[i][j] * c[j];
    return q;
}

inline Basis gram_of(const Basis& basis) {
    const std::size_t n = basis.size();
    Basis g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) g[i][j] += basis[i][k] * basis[j][k];
    return g;
}

inline Basis invert(Basis a) {
    const std::size_t n = a.size();
    Basis inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const double p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// Naive coefficient-box enumeration: nonzero integer c with
// sqrt(c^T G c) <= t + 1e-9, scanning the full per-axis Cauchy-Schwarz box.
inline std::set<IntVec> box_enumerate(const Basis& basis, double t) {
    const int n = static_cast<int>(basis.size());
    const Basis gram = gram_of(basis);
    const Basis ginv = invert(gram);
    std::vector<int> lim(n);
    for (int i = 0; i < n; ++i)
        lim[i] = static_cast<int>(std::floor((t + 1e-9) * std::sqrt(ginv[i][i]) + 1e-9)) + 1;

    std::set<IntVec> out;
    IntVec c(n, 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            bool zero = true;
            for (int v : c) zero = zero && v == 0;
            if (!zero && std::sqrt(quad(gram, c)) <= t + 1e-9) out.insert(c);
            return;
        }
        for (c[i] = -lim[i]; c[i] <= lim[i]; ++c[i]) self(self, i + 1);
    };
    rec(rec, 0);
    return out;
}

// Shifted variant: integer c with |(c - center) B| <= r + 1e-9, scanning a
// box around the center.
inline std::set<IntVec> box_enumerate_shifted(const Basis& basis, const std::vector<double>& center,
                                              double r) {
    const int n = static_cast<int>(basis.size());
    const Basis gram = gram_of(basis);
    const Basis ginv = invert(gram);
    std::vector<int> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        const double half = (r + 1e-9) * std::sqrt(ginv[i][i]) + 1.0;
        lo[i] = static_cast<int>(std::floor(center[i] - half));
        hi[i] = static_cast<int>(std::ceil(center[i] + half));
    }
    std::set<IntVec> out;
    IntVec c(n, 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            double q = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    q += (c[a] - center[a]) * gram[a][b] * (c[b] - center[b]);
            if (std::sqrt(q) <= r + 1e-9) out.insert(c);
            return;
        }
        for (c[i] = lo[i]; c[i] <= hi[i]; ++c[i]) self(self, i + 1);
    };
    rec(rec, 0);
    return out;
}

// Gauss-circle brute force: nonzero integer points in the closed disk.
inline std::size_t disk_count(double radius) {
    const int lim = static_cast<int>(std::floor(radius)) + 1;
    std::size_t count = 0;
    for (int x = -lim; x <= lim; ++x)
        for (int y = -lim; y <= lim; ++y) {
            if (x == 0 && y == 0) continue;
            if (std::sqrt(static_cast<double>(x) * x + static_cast<double>(y) * y) <=
                radius + 1e-9)
                ++count;
        }
    return count;
}

// --- free-group oracles on a pair of 2x2 matrices --------------------------

using Mat2 = std::array<double, 4>; // a b c d

inline Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline Mat2 inv2(const Mat2& m) { return {m[3], -m[1], -m[2], m[0]}; }

// displacement of the Mobius image of re+im*i, straight from the formulas
inline double disp2(const Mat2& m, double re, double im) {
    const double dr = m[0] * re + m[1], di = m[0] * im;
    const double er = m[2] * re + m[3], ei = m[2] * im;
    const double den = er * er + ei * ei;
    const double wre = (dr * er + di * ei) / den;
    const double wim = (di * er - dr * ei) / den;
    const double ddr = re - wre, ddi = im - wim;
    return std::acosh(1.0 + (ddr * ddr + ddi * ddi) / (2.0 * im * wim));
}

using OLetter = std::pair<int, bool>; // generator index, inverse flag
using OWord = std::vector<OLetter>;

struct FreeGroupOracle {
    std::vector<Mat2> gens;
    double base_re = 0.0;
    double base_im = 1.0;

    Mat2 letter_matrix(const OLetter& l) const {
        return l.second ? inv2(gens[l.first]) : gens[l.first];
    }

    template <typename Visit>
    void each_reduced_word(int max_len, Visit&& visit) const {
        OWord word;
        std::vector<Mat2> prods{Mat2{1, 0, 0, 1}};
        auto rec = [&](auto&& self) -> void {
            if (static_cast<int>(word.size()) >= max_len) return;
            for (int g = 0; g < static_cast<int>(gens.size()); ++g)
                for (bool inv : {false, true}) {
                    if (!word.empty() && word.back().first == g && word.back().second != inv)
                        continue;
                    word.push_back({g, inv});
                    prods.push_back(mul(prods.back(), letter_matrix({g, inv})));
                    visit(word, prods.back());
                    self(self);
                    word.pop_back();
                    prods.pop_back();
                }
        };
        rec(rec);
    }

    // P_q(t): reduced words are distinct elements in a free group, so the
    // count needs no deduplication.
    std::size_t loop_count(double t, int max_len) const {
        std::size_t count = 0;
        each_reduced_word(max_len, [&](const OWord&, const Mat2& m) {
            if (disp2(m, base_re, base_im) <= t + 1e-9) ++count;
        });
        return count;
    }

    std::size_t reduced_word_count(int exact_len) const {
        std::size_t count = 0;
        each_reduced_word(exact_len, [&](const OWord& w, const Mat2&) {
            if (static_cast<int>(w.size()) == exact_len) ++count;
        });
        return count;
    }
};

inline OWord rotate_left(OWord w) {
    if (!w.empty()) {
        w.push_back(w.front());
        w.erase(w.begin());
    }
    return w;
}

inline OWord invert_word(const OWord& w) {
    OWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->first, !it->second});
    return out;
}

inline OWord canonical_necklace(const OWord& w) {
    OWord best = w, rot = w;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (rot < best) best = rot;
        rot = rotate_left(rot);
    }
    rot = invert_word(w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (rot < best) best = rot;
        rot = rotate_left(rot);
    }
    return best;
}

// literal u^k reconstruction primitivity check
inline bool primitive_by_rebuild(const OWord& w) {
    const std::size_t n = w.size();
    for (std::size_t plen = 1; plen < n; ++plen) {
        if (n % plen != 0) continue;
        OWord rebuilt;
        const OWord u(w.begin(), w.begin() + static_cast<long>(plen));
        for (std::size_t k = 0; k < n / plen; ++k) rebuilt.insert(rebuilt.end(), u.begin(), u.end());
        if (rebuilt == w) return false;
    }
    return true;
}

struct NecklaceOracle {
    std::size_t primitive_geodesics = 0;                // v(t)
    std::map<OWord, double> classes;                    // necklace -> length
};

// All conjugacy classes of cyclically reduced word length <= max_len whose
// closed geodesic is no longer than t, by exhaustive enumeration.
inline NecklaceOracle necklace_census(const FreeGroupOracle& group, double t, int max_len) {
    NecklaceOracle out;
    group.each_reduced_word(max_len, [&](const OWord& w, const Mat2& m) {
        if (w.size() >= 2 && w.front().first == w.back().first &&
            w.front().second != w.back().second)
            return; // not cyclically reduced
        const double tr = std::abs(m[0] + m[3]);
        if (tr <= 2.0 + 1e-9) return; // no closed geodesic
        const double len = 2.0 * std::acosh(0.5 * tr);
        if (len > t + 1e-9) return;
        out.classes.emplace(canonical_necklace(w), len);
    });
    for (const auto& [neck, len] : out.classes)
        if (primitive_by_rebuild(neck)) ++out.primitive_geodesics;
    return out;
}

} // namespace oracles
