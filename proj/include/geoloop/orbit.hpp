#pragma once

// Deck-transformation orbit enumeration: the engine behind P_q(t) and v(t)
// on hyperbolic models. Word BFS over generator products with displacement
// pruning and two-tier matrix deduplication, plus free-group conjugacy
// counting by necklace enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "words.hpp"

namespace geoloop {

struct OrbitElement {
    GroupMatrix matrix;
    Word word;               // a witness spelling (shortest found)
    double displacement = 0; // d(x, g x) at the ball's base point
};

struct OrbitBall {
    std::vector<OrbitElement> elements; // d <= R, sorted by (displacement, word)
    double radius = 0.0;
    UhpPoint base_point;
    bool pruning_heuristic = false;  // non-free model: completeness rests on the slack margin
    bool certified = false;          // free model: exhaustive word check passed
    int certified_word_length = 0;   // exhaustive check depth (0 = not run)
    std::size_t missing_elements = 0; // certification misses (nonzero = slack too small)
    int max_word_length = 0;         // deepest word that survived pruning
};

namespace detail {

// Dedup key: entries rounded at 1e-7 after sign canonicalization;
// candidates within 1e-9 of a grid boundary also probe the neighbor cell.
inline constexpr double kDedupGrid = 1e-7;
inline constexpr double kDedupMatchTol = 1e-9;

struct MatrixKey {
    std::array<std::int64_t, 4> q{};
    bool operator==(const MatrixKey&) const = default;
};

struct MatrixKeyHash {
    std::size_t operator()(const MatrixKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::int64_t v : k.q) {
            std::uint64_t x = static_cast<std::uint64_t>(v);
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27;
            h = (h ^ x) * 0x94d049bb133111ebull;
        }
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

inline std::array<double, 4> matrix_entries(const GroupMatrix& m) { return {m.a, m.b, m.c, m.d}; }

inline bool matrices_match(const GroupMatrix& x, const GroupMatrix& y) {
    const auto ex = matrix_entries(x);
    const auto ey = matrix_entries(y);
    for (int i = 0; i < 4; ++i)
        if (std::abs(ex[i] - ey[i]) > kDedupMatchTol) return false;
    return true;
}

inline MatrixKey primary_key(const GroupMatrix& m) {
    MatrixKey key;
    const auto e = matrix_entries(m);
    for (int i = 0; i < 4; ++i) key.q[i] = std::llround(e[i] / kDedupGrid);
    return key;
}

// All grid cells this matrix could share with a 1e-9-close neighbor.
inline void candidate_keys(const GroupMatrix& m, std::vector<MatrixKey>& out) {
    const auto e = matrix_entries(m);
    std::array<std::array<std::int64_t, 2>, 4> opts{};
    std::array<int, 4> counts{};
    for (int i = 0; i < 4; ++i) {
        const double scaled = e[i] / kDedupGrid;
        const std::int64_t k = std::llround(scaled);
        opts[i][0] = k;
        counts[i] = 1;
        const double frac = scaled - static_cast<double>(k);
        if (std::abs(frac) > 0.5 - 2.0 * (kDedupMatchTol / kDedupGrid)) {
            opts[i][1] = k + (frac > 0 ? 1 : -1);
            counts[i] = 2;
        }
    }
    out.clear();
    for (int i0 = 0; i0 < counts[0]; ++i0)
        for (int i1 = 0; i1 < counts[1]; ++i1)
            for (int i2 = 0; i2 < counts[2]; ++i2)
                for (int i3 = 0; i3 < counts[3]; ++i3)
                    out.push_back({{opts[0][i0], opts[1][i1], opts[2][i2], opts[3][i3]}});
}

struct OrbitNode {
    GroupMatrix matrix;
    double displacement = 0.0;
    std::int32_t parent = -1;
    std::int32_t next_collision = -1; // chain of nodes sharing a dedup cell
    Letter letter;
    std::int32_t word_length = 0;
};

class OrbitDedup {
public:
    // Returns the index of a node matching m, or -1.
    std::int32_t find(const GroupMatrix& m, const std::vector<OrbitNode>& nodes) {
        candidate_keys(m, scratch_);
        for (const MatrixKey& key : scratch_) {
            auto it = heads_.find(key);
            if (it == heads_.end()) continue;
            for (std::int32_t idx = it->second; idx >= 0; idx = nodes[idx].next_collision)
                if (matrices_match(m, nodes[idx].matrix)) return idx;
        }
        return -1;
    }

    void insert(std::int32_t idx, std::vector<OrbitNode>& nodes) {
        const MatrixKey key = primary_key(nodes[idx].matrix);
        auto [it, fresh] = heads_.try_emplace(key, idx);
        if (!fresh) {
            nodes[idx].next_collision = it->second;
            it->second = idx;
        }
    }

private:
    std::unordered_map<MatrixKey, std::int32_t, MatrixKeyHash> heads_;
    std::vector<MatrixKey> scratch_;
};

struct LetterTable {
    std::vector<Letter> letters;
    std::vector<GroupMatrix> matrices;
};

inline LetterTable letter_table(const FuchsianModel& model) {
    LetterTable table;
    for (std::size_t i = 0; i < model.generators.size(); ++i) {
        const Letter direct{static_cast<std::uint16_t>(i), false};
        table.letters.push_back(direct);
        table.matrices.push_back(model.generators[i].matrix);
        table.letters.push_back(direct.inverted());
        table.matrices.push_back(model.generators[i].matrix.inverse());
    }
    return table;
}

// Depth-first enumeration of freely reduced words with their matrices.
template <typename Visit>
inline void for_each_reduced_word(const LetterTable& table, int max_length, Visit&& visit) {
    Word word;
    std::vector<GroupMatrix> products{GroupMatrix::identity()};
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(word.size()) >= max_length) return;
        for (std::size_t li = 0; li < table.letters.size(); ++li) {
            if (!word.empty() && table.letters[li].cancels(word.back())) continue;
            word.push_back(table.letters[li]);
            products.push_back(products.back() * table.matrices[li]);
            visit(word, products.back());
            self(self);
            word.pop_back();
            products.pop_back();
        }
    };
    recurse(recurse);
}

inline constexpr int kCertificationCap = 9;
inline constexpr std::size_t kNodeLimit = 20'000'000;

} // namespace detail

inline GroupMatrix word_to_matrix(const FuchsianModel& model, const Word& word) {
    GroupMatrix m = GroupMatrix::identity();
    for (const Letter& l : word) {
        const GroupMatrix& g = model.generators.at(l.gen).matrix;
        m = m * (l.inverse ? g.inverse() : g);
    }
    return m;
}

// All g != id with d(x, g x) <= R, each exactly once, with a shortest
// witness word. BFS over generator products prunes partial products whose
// displacement exceeds R + slack. For free models the result is certified
// against exhaustive word enumeration up to a capped depth; for others a
// caveat flag records that completeness rests on the slack heuristic.
inline OrbitBall enumerate_orbit_ball_at(const FuchsianModel& model, const UhpPoint& base,
                                         double radius) {
    if (!(radius > 0.0)) throw Error("enumerate_orbit_ball: radius must be positive");
    if (model.generators.empty()) throw Error("enumerate_orbit_ball: model has no generators");

    const detail::LetterTable table = detail::letter_table(model);
    const double survive = radius + model.slack + kLengthTol;

    std::vector<detail::OrbitNode> nodes;
    detail::OrbitDedup dedup;
    nodes.push_back({GroupMatrix::identity(), 0.0, -1, -1, Letter{}, 0});
    dedup.insert(0, nodes);

    for (std::size_t head = 0; head < nodes.size(); ++head) {
        for (std::size_t li = 0; li < table.letters.size(); ++li) {
            const detail::OrbitNode& node = nodes[head]; // re-read: push_back may reallocate
            if (node.word_length > 0 && table.letters[li].cancels(node.letter)) continue;
            GroupMatrix child = node.matrix * table.matrices[li];
            const double disp = displacement(child, base);
            if (disp > survive) continue;
            if (dedup.find(child, nodes) >= 0) continue;
            if (nodes.size() >= detail::kNodeLimit)
                throw Error("enumerate_orbit_ball: node limit exceeded; "
                            "reduce the radius or slack (or the group is non-discrete)");
            nodes.push_back({child, disp, static_cast<std::int32_t>(head), -1, table.letters[li],
                             node.word_length + 1});
            dedup.insert(static_cast<std::int32_t>(nodes.size() - 1), nodes);
        }
    }

    OrbitBall ball;
    ball.radius = radius;
    ball.base_point = base;
    ball.pruning_heuristic = !model.is_free;

    auto word_of = [&nodes](std::int32_t idx) {
        Word w;
        for (std::int32_t at = idx; at > 0; at = nodes[at].parent) w.push_back(nodes[at].letter);
        std::reverse(w.begin(), w.end());
        return w;
    };

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        ball.max_word_length = std::max(ball.max_word_length, static_cast<int>(nodes[i].word_length));
        if (nodes[i].displacement <= radius + kLengthTol)
            ball.elements.push_back({nodes[i].matrix, word_of(static_cast<std::int32_t>(i)),
                                     nodes[i].displacement});
    }
    std::sort(ball.elements.begin(), ball.elements.end(),
              [](const OrbitElement& a, const OrbitElement& b) {
                  if (a.displacement != b.displacement) return a.displacement < b.displacement;
                  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
                  return a.word < b.word;
              });

    if (model.is_free) {
        // Check at least two letters past the deepest survivor: aggressive
        // pruning shortens the surviving words exactly when elements are
        // being lost, so the survivor depth alone cannot bound the check.
        ball.certified_word_length =
            std::min(std::max(ball.max_word_length + 2, 6), detail::kCertificationCap);
        detail::for_each_reduced_word(table, ball.certified_word_length,
                                      [&](const Word&, const GroupMatrix& m) {
                                          if (displacement(m, base) > radius + kLengthTol) return;
                                          const std::int32_t idx = dedup.find(m, nodes);
                                          if (idx < 0 ||
                                              nodes[idx].displacement > radius + kLengthTol)
                                              ++ball.missing_elements;
                                      });
        ball.certified = ball.missing_elements == 0;
    }
    return ball;
}

inline OrbitBall enumerate_orbit_ball(const FuchsianModel& model, double radius) {
    return enumerate_orbit_ball_at(model, model.base_point, radius);
}

// Elements of the ball with displacement <= t (the ball must have been
// computed with radius >= t).
inline std::size_t count_at(const OrbitBall& ball, double t) {
    const auto it = std::upper_bound(ball.elements.begin(), ball.elements.end(), t + kLengthTol,
                                     [](double value, const OrbitElement& e) {
                                         return value < e.displacement;
                                     });
    return static_cast<std::size_t>(it - ball.elements.begin());
}

// P_q(t) with q the projection of the model's base point.
inline std::size_t loop_count_hyp(const FuchsianModel& model, double t) {
    return enumerate_orbit_ball(model, t).elements.size();
}

// P_q(t) with the base point overridden; used to sample the existential
// base point of the counting bound over a grid.
inline std::size_t count_with_base_point(const FuchsianModel& model, const UhpPoint& x, double t) {
    return enumerate_orbit_ball_at(model, x, t).elements.size();
}

struct ConjClass {
    Word necklace;            // cyclically reduced, canonical rotation
    double length_geom = 0.0; // translation length of its matrix
    bool primitive = false;
};

struct GeodesicCensus {
    std::vector<ConjClass> classes; // hyperbolic classes with length <= t
    std::size_t primitive_count = 0;
    bool min_length_monotone = true; // empirical stopping-rule premise
    int max_word_length_used = 0;
};

namespace detail {

// DFS over cyclically reduced words of exactly length n (first letter
// never cancels the last), visiting each with its matrix.
template <typename Visit>
inline void for_each_cyclic_word(const LetterTable& table, int n, Visit&& visit) {
    Word word;
    std::vector<GroupMatrix> products{GroupMatrix::identity()};
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(word.size()) == n) {
            if (n == 1 || !word.front().cancels(word.back())) visit(word, products.back());
            return;
        }
        for (std::size_t li = 0; li < table.letters.size(); ++li) {
            if (!word.empty() && table.letters[li].cancels(word.back())) continue;
            word.push_back(table.letters[li]);
            products.push_back(products.back() * table.matrices[li]);
            self(self);
            word.pop_back();
            products.pop_back();
        }
    };
    recurse(recurse);
}

inline constexpr int kNecklaceLengthCap = 15;
inline constexpr int kNecklaceLookahead = 4;

} // namespace detail

// Primitive-closed-geodesic census for free models: enumerate necklaces
// (conjugacy classes canonical up to rotation and inversion) by increasing
// word length, keeping hyperbolic classes with translation length <= t.
// Stops once the minimum translation length has exceeded t for four
// consecutive lengths; the lookahead covers cusp-winding families whose
// per-length minimum recurs with the period of the shortest parabolic
// word, which breaks the naive first-excess stopping rule. Growth of the
// per-length minimum is still tracked and flagged when non-monotone.
// Throws when the census cannot be closed out within the word-length cap.
inline GeodesicCensus geodesic_census_free(const FuchsianModel& model, double t) {
    if (!model.is_free) throw NotFreeGroup("geodesic_census_free: model is not marked free");
    if (!(t > 0.0)) throw Error("geodesic_census_free: t must be positive");

    const detail::LetterTable table = detail::letter_table(model);
    GeodesicCensus census;
    double previous_min = 0.0;
    int lengths_past_t = 0;

    for (int n = 1;; ++n) {
        if (n > detail::kNecklaceLengthCap)
            throw Error("geodesic_census_free: word length cap exceeded; "
                        "t too large for an exact desk-scale census");
        double min_length = std::numeric_limits<double>::infinity();
        detail::for_each_cyclic_word(table, n, [&](const Word& word, const GroupMatrix& m) {
            const TranslationLength tl = translation_length(m);
            if (!tl.is_hyperbolic()) return;
            min_length = std::min(min_length, tl.value);
            if (tl.value > t + kLengthTol) return;
            if (cyclic_canonical(word) != word) return; // count each necklace once
            census.classes.push_back({word, tl.value, is_primitive_word(word)});
        });
        census.max_word_length_used = n;
        if (min_length < previous_min - 1e-12) census.min_length_monotone = false;
        lengths_past_t = min_length > t + kLengthTol ? lengths_past_t + 1 : 0;
        if (lengths_past_t >= detail::kNecklaceLookahead) break;
        if (std::isfinite(min_length)) previous_min = min_length;
    }

    std::sort(census.classes.begin(), census.classes.end(),
              [](const ConjClass& a, const ConjClass& b) {
                  if (a.length_geom != b.length_geom) return a.length_geom < b.length_geom;
                  if (a.necklace.size() != b.necklace.size())
                      return a.necklace.size() < b.necklace.size();
                  return a.necklace < b.necklace;
              });
    for (const auto& cls : census.classes)
        if (cls.primitive) ++census.primitive_count;
    return census;
}

// v(t) on free models: primitive unoriented conjugacy classes bearing a
// closed geodesic of length <= t.
inline std::size_t closed_geodesic_count_free(const FuchsianModel& model, double t) {
    return geodesic_census_free(model, t).primitive_count;
}

} // namespace geoloop
