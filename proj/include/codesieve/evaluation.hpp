#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "codesieve/pipeline.hpp"
#include "codesieve/retrieval.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

/// Truly plagiarised pairs. `dropped` counts judgement lines that named
/// files missing from the corpus.
struct Qrels {
    PairSet relevant;
    std::size_t dropped = 0;
};

struct PrecisionRecall {
    /// Undefined (nullopt) when nothing was retrieved.
    std::optional<double> precision;
    double recall = 0.0;
    std::size_t hits = 0;
};

inline auto intersection_size(PairSet const& a, PairSet const& b) -> std::size_t
{
    auto const& small = a.size() <= b.size() ? a : b;
    auto const& large = a.size() <= b.size() ? b : a;
    return static_cast<std::size_t>(
        std::count_if(small.begin(), small.end(), [&](DocPair const& p) { return large.contains(p); }));
}

inline auto precision_recall(PairSet const& retrieved, PairSet const& relevant) -> PrecisionRecall
{
    if (relevant.empty()) {
        throw DataError("recall is undefined for an empty relevant set");
    }
    PrecisionRecall pr;
    pr.hits = intersection_size(retrieved, relevant);
    if (!retrieved.empty()) {
        pr.precision = static_cast<double>(pr.hits) / static_cast<double>(retrieved.size());
    }
    pr.recall = static_cast<double>(pr.hits) / static_cast<double>(relevant.size());
    return pr;
}

/// Share of the exhaustive baseline's flagged pairs that the filtered
/// pipeline also flagged.
inline auto accuracy(PairSet const& pipeline_flagged, PairSet const& baseline_flagged) -> double
{
    if (baseline_flagged.empty()) {
        throw DataError("accuracy needs a non-empty baseline flagged set");
    }
    return static_cast<double>(intersection_size(pipeline_flagged, baseline_flagged))
           / static_cast<double>(baseline_flagged.size());
}

struct EvalRow {
    ModelSpec spec;
    std::size_t top_n = 0;
    std::optional<double> precision;
    double recall = 0.0;
    std::optional<double> accuracy;
    std::size_t pairs_retrieved = 0;
    std::size_t pairs_verified = 0;
    double retrieval_s = 0.0;
    double verification_s = 0.0;
    double total_s = 0.0;
};

struct GroundTruth {
    /// Pairs scored for precision/recall: qrels, or the baseline flagged set.
    PairSet relevant;
    /// When present, rows also report accuracy against it.
    std::optional<PairSet> baseline_flagged;
};

namespace detail {
    inline void require_ascending(std::vector<std::size_t> const& n_values)
    {
        if (n_values.empty()) {
            throw UsageError("no top-n values given");
        }
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            if (n_values[i] == 0 || (i > 0 && n_values[i] <= n_values[i - 1])) {
                throw UsageError("top-n values must be positive and strictly ascending");
            }
        }
    }
}  // namespace detail

/// Retrieval-only precision/recall per top-n; nothing is verified.
inline auto pr_curve(CorpusIndex const& ix, ModelSpec const& spec, PairSet const& relevant,
                     std::vector<std::size_t> const& n_values, std::size_t threads = 1) -> std::vector<EvalRow>
{
    detail::require_ascending(n_values);
    std::vector<EvalRow> rows;
    for (auto n : n_values) {
        auto const start = detail::Clock::now();
        auto candidates = generate_candidates(ix, spec, n, threads);
        EvalRow row;
        row.spec = spec;
        row.top_n = n;
        row.retrieval_s = detail::seconds_since(start);
        row.total_s = row.retrieval_s;
        auto pr = precision_recall(candidates.pairs(), relevant);
        row.precision = pr.precision;
        row.recall = pr.recall;
        row.pairs_retrieved = candidates.size();
        rows.push_back(row);
    }
    return rows;
}

/// Full factorial: every model setting crossed with every top-n, each cell
/// running retrieval and verification. Rows come back in grid order
/// (settings outer, n inner).
inline auto sweep(CorpusIndex const& ix, SymbolMap const& streams, std::vector<ModelSpec> const& settings,
                  std::vector<std::size_t> const& n_values, GroundTruth const& truth, GstSettings const& gst = {},
                  std::size_t threads = 1) -> std::vector<EvalRow>
{
    if (settings.empty()) {
        throw UsageError("sweep grid is empty");
    }
    detail::require_ascending(n_values);
    std::vector<EvalRow> rows;
    for (auto const& spec : settings) {
        for (auto n : n_values) {
            auto run = run_pipeline(ix, streams, spec, n, gst, threads);
            EvalRow row;
            row.spec = spec;
            row.top_n = n;
            auto pr = precision_recall(run.candidates.pairs(), truth.relevant);
            row.precision = pr.precision;
            row.recall = pr.recall;
            if (truth.baseline_flagged) {
                row.accuracy = accuracy(run.flagged_pairs(), *truth.baseline_flagged);
            }
            row.pairs_retrieved = run.candidates.size();
            row.pairs_verified = run.timing.pairs_verified;
            row.retrieval_s = run.timing.retrieval_seconds;
            row.verification_s = run.timing.verification_seconds;
            row.total_s = run.timing.total_seconds;
            rows.push_back(row);
        }
    }
    return rows;
}

/// Highest recall, then fewest retrieved pairs, then lowest total time.
inline auto best_row(std::vector<EvalRow> const& rows) -> std::optional<std::size_t>
{
    if (rows.empty()) {
        return std::nullopt;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto const& r = rows[i];
        auto const& b = rows[best];
        if (r.recall != b.recall ? r.recall > b.recall
            : r.pairs_retrieved != b.pairs_retrieved ? r.pairs_retrieved < b.pairs_retrieved
                                                       : r.total_s < b.total_s) {
            best = i;
        }
    }
    return best;
}

/// First row (in the given order) reaching recall 1.0.
inline auto first_full_recall(std::vector<EvalRow> const& rows) -> std::optional<std::size_t>
{
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].recall >= 1.0) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace codesieve
