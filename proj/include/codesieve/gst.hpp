#pragma once

// Greedy String Tiling over kind-abstracted token symbols.
//
// Each round finds the longest common substrings that lie entirely in
// unmarked positions of both sequences, then marks them as tiles in scan
// order (ascending pos_a, then pos_b), skipping any that a tile placed
// earlier in the same round already overlaps. Rounds repeat until no
// unmarked match of at least `min_match` symbols remains.
//
// The longest unmarked match starting at every (i, j) is computed with a
// suffix DP per round, which yields exactly the matches a naive pairwise
// extension scan would find. Symbols 0xFFFFFFFE/0xFFFFFFFF are reserved.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "codesieve/lexer.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

inline constexpr std::size_t default_min_match = 9;
inline constexpr double default_threshold = 0.5;

struct Tile {
    std::size_t pos_a = 0;
    std::size_t pos_b = 0;
    std::size_t len = 0;

    auto operator==(Tile const&) const -> bool = default;
};

struct SimilarityResult {
    DocPair pair{};
    double similarity = 0.0;
    std::size_t coverage = 0;
    std::vector<Tile> tiles;
    std::size_t len_a = 0;
    std::size_t len_b = 0;
};

namespace detail {

    inline auto tile_canonical(std::span<Symbol const> a, std::span<Symbol const> b, std::size_t min_match)
        -> std::vector<Tile>
    {
        std::vector<Tile> tiles;
        auto const n = a.size();
        auto const m = b.size();
        if (n < min_match || m < min_match) {
            return tiles;
        }
        // Tiled positions are overwritten with sentinels that match nothing,
        // so one comparison covers both the symbol test and the mark test.
        constexpr Symbol marked_in_a = 0xFFFFFFFEU;
        constexpr Symbol marked_in_b = 0xFFFFFFFFU;
        std::vector<Symbol> work_a(a.begin(), a.end());
        std::vector<Symbol> work_b(b.begin(), b.end());
        // run[j] is the unmarked match length starting at (i, j) for the
        // current row i; prev holds row i + 1.
        std::vector<std::uint32_t> run(m + 1, 0);
        std::vector<std::uint32_t> prev(m + 1, 0);
        std::vector<Tile> matches;

        while (true) {
            std::uint32_t best = static_cast<std::uint32_t>(min_match);
            matches.clear();
            std::fill(prev.begin(), prev.end(), 0);
            for (std::size_t i = n; i-- > 0;) {
                Symbol const s = work_a[i];
                std::uint32_t row_max = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    std::uint32_t v = work_b[j] == s ? prev[j + 1] + 1 : 0;
                    run[j] = v;
                    row_max = std::max(row_max, v);
                }
                if (row_max >= best) {
                    if (row_max > best) {
                        best = row_max;
                        matches.clear();
                    }
                    for (std::size_t j = 0; j < m; ++j) {
                        if (run[j] == best) {
                            matches.push_back({i, j, best});
                        }
                    }
                }
                std::swap(run, prev);
            }
            if (matches.empty()) {
                break;
            }
            // Rows were visited bottom-up; restore scan order.
            std::sort(matches.begin(), matches.end(), [](Tile const& x, Tile const& y) {
                return x.pos_a != y.pos_a ? x.pos_a < y.pos_a : x.pos_b < y.pos_b;
            });
            for (auto const& t : matches) {
                bool occluded = false;
                for (std::size_t k = 0; k < t.len && !occluded; ++k) {
                    occluded = work_a[t.pos_a + k] == marked_in_a || work_b[t.pos_b + k] == marked_in_b;
                }
                if (occluded) {
                    continue;
                }
                std::fill_n(work_a.begin() + static_cast<std::ptrdiff_t>(t.pos_a), t.len, marked_in_a);
                std::fill_n(work_b.begin() + static_cast<std::ptrdiff_t>(t.pos_b), t.len, marked_in_b);
                tiles.push_back(t);
            }
        }
        return tiles;
    }

}  // namespace detail

/// Tiles two symbol sequences. The shorter sequence (lexicographically
/// smaller on equal length) is always tiled first, so gst(a, b) and
/// gst(b, a) produce the same tile set; tiles are reported in the caller's
/// (a, b) orientation.
inline auto gst_similarity(std::span<Symbol const> a, std::span<Symbol const> b,
                           std::size_t min_match = default_min_match) -> SimilarityResult
{
    if (min_match == 0) {
        throw UsageError("min_match must be >= 1");
    }
    SimilarityResult r;
    r.len_a = a.size();
    r.len_b = b.size();
    bool const swapped = b.size() < a.size()
                         || (b.size() == a.size() && std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()));
    r.tiles = swapped ? detail::tile_canonical(b, a, min_match) : detail::tile_canonical(a, b, min_match);
    for (auto& t : r.tiles) {
        if (swapped) {
            std::swap(t.pos_a, t.pos_b);
        }
        r.coverage += t.len;
    }
    auto const total = r.len_a + r.len_b;
    if (total == 0) {
        r.similarity = 1.0;
    } else {
        r.similarity = 2.0 * static_cast<double>(r.coverage) / static_cast<double>(total);
    }
    return r;
}

inline auto gst_similarity(std::vector<Symbol> const& a, std::vector<Symbol> const& b,
                           std::size_t min_match = default_min_match) -> SimilarityResult
{
    return gst_similarity(std::span<Symbol const>(a), std::span<Symbol const>(b), min_match);
}

struct VerifiedPair {
    SimilarityResult result;
    bool plagiarized = false;
};

using SymbolMap = std::map<DocId, std::vector<Symbol>>;

inline auto lookup_symbols(SymbolMap const& streams, DocId doc) -> std::vector<Symbol> const&
{
    auto it = streams.find(doc);
    if (it == streams.end()) {
        throw DataError("no token stream for document " + to_string(doc));
    }
    return it->second;
}

inline auto verify_pair(DocPair pair, SymbolMap const& streams, std::size_t min_match, double threshold)
    -> VerifiedPair
{
    VerifiedPair v;
    v.result = gst_similarity(lookup_symbols(streams, pair.low), lookup_symbols(streams, pair.high), min_match);
    v.result.pair = pair;
    v.plagiarized = v.result.similarity >= threshold;
    return v;
}

}  // namespace codesieve
