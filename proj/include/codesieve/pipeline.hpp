#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <vector>

#include "codesieve/gst.hpp"
#include "codesieve/index.hpp"
#include "codesieve/parallel.hpp"
#include "codesieve/retrieval.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

/// Deduplicated unordered candidate pairs with the best (lowest, 1-based)
/// rank at which either member retrieved the other.
class CandidatePairSet {
  public:
    void add(DocPair pair, std::size_t rank)
    {
        auto [it, inserted] = m_best_rank.emplace(pair, rank);
        if (!inserted) {
            it->second = std::min(it->second, rank);
        }
    }

    [[nodiscard]] auto size() const noexcept -> std::size_t { return m_best_rank.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return m_best_rank.empty(); }
    [[nodiscard]] auto contains(DocPair p) const -> bool { return m_best_rank.contains(p); }
    [[nodiscard]] auto best_rank(DocPair p) const -> std::size_t { return m_best_rank.at(p); }
    [[nodiscard]] auto ranks() const noexcept -> std::map<DocPair, std::size_t> const& { return m_best_rank; }

    [[nodiscard]] auto pairs() const -> PairSet
    {
        PairSet out;
        for (auto const& [p, r] : m_best_rank) {
            out.insert(out.end(), p);
        }
        return out;
    }

    [[nodiscard]] auto pair_list() const -> std::vector<DocPair>
    {
        std::vector<DocPair> out;
        out.reserve(m_best_rank.size());
        for (auto const& [p, r] : m_best_rank) {
            out.push_back(p);
        }
        return out;
    }

    auto operator==(CandidatePairSet const&) const -> bool = default;

  private:
    std::map<DocPair, std::size_t> m_best_rank;
};

struct GstSettings {
    std::size_t min_match = default_min_match;
    double threshold = default_threshold;
};

/// Wall-clock seconds. Index construction is not included.
struct RunTiming {
    double retrieval_seconds = 0.0;
    double verification_seconds = 0.0;
    double total_seconds = 0.0;
    std::size_t pairs_verified = 0;
};

struct DetectionResult {
    CandidatePairSet candidates;
    /// Every verified pair, ascending by pair.
    std::vector<VerifiedPair> verified;
    /// Pairs at or above the threshold, by similarity descending then pair.
    std::vector<VerifiedPair> flagged;
    RunTiming timing;

    [[nodiscard]] auto flagged_pairs() const -> PairSet
    {
        PairSet out;
        for (auto const& v : flagged) {
            out.insert(v.result.pair);
        }
        return out;
    }
};

namespace detail {
    using Clock = std::chrono::steady_clock;

    inline auto seconds_since(Clock::time_point start) -> double
    {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    inline auto collect_flagged(std::vector<VerifiedPair> const& verified) -> std::vector<VerifiedPair>
    {
        std::vector<VerifiedPair> flagged;
        for (auto const& v : verified) {
            if (v.plagiarized) {
                flagged.push_back(v);
            }
        }
        std::stable_sort(flagged.begin(), flagged.end(), [](VerifiedPair const& x, VerifiedPair const& y) {
            return x.result.similarity > y.result.similarity;
        });
        return flagged;
    }
}  // namespace detail

inline auto generate_candidates(CorpusIndex const& ix, ModelSpec const& spec, std::size_t n, std::size_t threads = 1)
    -> CandidatePairSet
{
    if (n == 0) {
        throw UsageError("top-n must be >= 1");
    }
    spec.validate();
    auto const& docs = ix.doc_ids();
    std::vector<std::vector<ScoredCandidate>> lists(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) { lists[i] = retrieve_top_n(ix, docs[i], spec, n); });

    CandidatePairSet out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (std::size_t r = 0; r < lists[i].size(); ++r) {
            out.add(DocPair::make(docs[i], lists[i][r].doc_id), r + 1);
        }
    }
    return out;
}

/// Results come back in the order of `pairs`.
inline auto verify_pairs(std::vector<DocPair> const& pairs, SymbolMap const& streams, GstSettings const& gst = {},
                         std::size_t threads = 1) -> std::vector<VerifiedPair>
{
    for (auto const& p : pairs) {
        lookup_symbols(streams, p.low);
        lookup_symbols(streams, p.high);
    }
    std::vector<VerifiedPair> out(pairs.size());
    parallel_for(pairs.size(), threads,
                 [&](std::size_t i) { out[i] = verify_pair(pairs[i], streams, gst.min_match, gst.threshold); });
    return out;
}

inline auto verify_pairs(CandidatePairSet const& pairs, SymbolMap const& streams, GstSettings const& gst = {},
                         std::size_t threads = 1) -> std::vector<VerifiedPair>
{
    return verify_pairs(pairs.pair_list(), streams, gst, threads);
}

inline auto run_pipeline(CorpusIndex const& ix, SymbolMap const& streams, ModelSpec const& spec, std::size_t n,
                         GstSettings const& gst = {}, std::size_t threads = 1) -> DetectionResult
{
    DetectionResult r;
    auto const start = detail::Clock::now();
    r.candidates = generate_candidates(ix, spec, n, threads);
    r.timing.retrieval_seconds = detail::seconds_since(start);

    auto const verify_start = detail::Clock::now();
    r.verified = verify_pairs(r.candidates, streams, gst, threads);
    r.timing.verification_seconds = detail::seconds_since(verify_start);

    r.flagged = detail::collect_flagged(r.verified);
    r.timing.pairs_verified = r.verified.size();
    r.timing.total_seconds = detail::seconds_since(start);
    return r;
}

/// Exhaustive GST over every unordered pair; its flagged set is the ground
/// truth the filtered pipeline is measured against.
inline auto run_baseline(SymbolMap const& streams, GstSettings const& gst = {}, std::size_t threads = 1)
    -> DetectionResult
{
    if (streams.size() < 2) {
        throw DataError("baseline needs at least 2 documents");
    }
    DetectionResult r;
    auto const start = detail::Clock::now();
    std::vector<DocId> ids;
    for (auto const& [id, s] : streams) {
        ids.push_back(id);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            r.candidates.add({ids[i], ids[j]}, 0);
        }
    }
    r.verified = verify_pairs(r.candidates, streams, gst, threads);
    r.timing.verification_seconds = detail::seconds_since(start);
    r.flagged = detail::collect_flagged(r.verified);
    r.timing.pairs_verified = r.verified.size();
    r.timing.total_seconds = detail::seconds_since(start);
    return r;
}

/// 100 * baseline / pipeline; a 4x faster pipeline reports 400.
inline auto speedup_percent(double baseline_seconds, double pipeline_seconds) -> double
{
    return 100.0 * baseline_seconds / pipeline_seconds;
}

}  // namespace codesieve
