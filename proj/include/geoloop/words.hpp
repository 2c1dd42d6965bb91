#pragma once

// Generator words: free reduction, cyclic conjugacy canonicalization, and
// primitive-root detection.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace geoloop {

struct Letter {
    std::uint16_t gen = 0;
    bool inverse = false;

    auto operator<=>(const Letter&) const = default;

    Letter inverted() const { return {gen, !inverse}; }
    bool cancels(const Letter& other) const { return gen == other.gen && inverse != other.inverse; }
};

using Word = std::vector<Letter>;

inline Word reduce_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (const Letter& l : w) {
        if (!out.empty() && out.back().cancels(l))
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline bool is_freely_reduced(const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i].cancels(w[i - 1])) return false;
    return true;
}

inline Word invert_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverted());
    return out;
}

inline Word cyclically_reduce(Word w) {
    w = reduce_word(w);
    while (w.size() >= 2 && w.front().cancels(w.back())) {
        w.erase(w.begin());
        w.pop_back();
    }
    return w;
}

namespace detail {

inline Word least_rotation(const Word& w) {
    Word best = w;
    Word rot = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

} // namespace detail

// Canonical representative of the conjugacy class of w, identified with
// its inverse class (unoriented): the lexicographically least rotation of
// the cyclic reduction and of its inverse.
inline Word cyclic_canonical(const Word& w) {
    Word cyc = cyclically_reduce(w);
    if (cyc.empty()) throw EmptyWord("cyclic_canonical: word is trivial");
    const Word fwd = detail::least_rotation(cyc);
    const Word bwd = detail::least_rotation(invert_word(cyc));
    return fwd < bwd ? fwd : bwd;
}

// True iff w is not u^k for any k >= 2, by checking every divisor period.
// Expects a cyclically reduced nonempty word.
inline bool is_primitive_word(const Word& w) {
    if (w.empty()) throw EmptyWord("is_primitive_word: word is trivial");
    const std::size_t n = w.size();
    for (std::size_t period = 1; period <= n / 2; ++period) {
        if (n % period != 0) continue;
        bool repeats = true;
        for (std::size_t i = period; i < n && repeats; ++i)
            repeats = (w[i] == w[i - period]);
        if (repeats) return false;
    }
    return true;
}

} // namespace geoloop
