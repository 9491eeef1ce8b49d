#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codesieve/index.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

/// Okapi BM25. With `faithful_denominator` the length-normalisation bracket
/// is added to tf without the k multiplier, exactly as the model was
/// published for this pipeline; switching it off gives textbook BM25.
struct Bm25Params {
    double k = 1.2;
    double b = 0.75;
    bool faithful_denominator = true;
};

struct DirichletParams {
    double mu = 1500.0;
};

/// Divergence-from-randomness with log2 length normalisation
/// tf_n = tf * log2(1 + avg_l / l), an idf information model and Laplace
/// first normalisation. There is nothing to tune.
struct DfrParams {};

enum class Model { bm25, ql, dfr };

inline auto to_string(Model m) -> std::string_view
{
    switch (m) {
    case Model::bm25: return "bm25";
    case Model::ql: return "ql";
    case Model::dfr: return "dfr";
    }
    return "?";
}

inline auto parse_model(std::string_view name) -> Model
{
    if (name == "bm25") {
        return Model::bm25;
    }
    if (name == "ql" || name == "dirichlet") {
        return Model::ql;
    }
    if (name == "dfr") {
        return Model::dfr;
    }
    throw UsageError("unknown model '" + std::string(name) + "' (expected bm25, ql or dfr)");
}

struct ModelSpec {
    Model model = Model::bm25;
    Bm25Params bm25;
    DirichletParams dirichlet;
    DfrParams dfr;

    void validate() const
    {
        if (!(bm25.k > 0.0)) {
            throw UsageError("bm25 k must be > 0");
        }
        if (!(bm25.b >= 0.0 && bm25.b <= 1.0)) {
            throw UsageError("bm25 b must be in [0, 1]");
        }
        if (!(dirichlet.mu > 0.0)) {
            throw UsageError("dirichlet mu must be > 0");
        }
    }
};

struct ScoredCandidate {
    DocId doc_id{};
    double score = 0.0;

    auto operator==(ScoredCandidate const&) const -> bool = default;
};

/// Query as a term -> multiplicity multiset.
using Query = std::map<std::string, std::uint32_t, std::less<>>;

inline auto make_query(std::span<std::string const> terms) -> Query
{
    Query q;
    for (auto const& t : terms) {
        ++q[t];
    }
    return q;
}

inline auto make_query(std::vector<std::string> const& terms) -> Query
{
    return make_query(std::span<std::string const>(terms));
}

/// The query for a document is its complete index-term multiset.
inline auto document_query(CorpusIndex const& ix, DocId doc) -> Query
{
    Query q;
    for (auto const& [term, list] : ix.postings()) {
        auto tf = ix.tf(term, doc);
        if (tf > 0) {
            q.emplace(term, tf);
        }
    }
    return q;
}

// Per-term contributions. Shared by the single-document scorers and
// top-n retrieval so both paths agree to the last bit.
namespace term_weight {

    inline auto bm25(double tf, double doc_len, double avg_len, double n_docs, double df, Bm25Params const& p)
        -> double
    {
        double norm = 1.0 - p.b + p.b * doc_len / avg_len;
        if (!p.faithful_denominator) {
            norm *= p.k;
        }
        double idf = std::log((n_docs - df + 0.5) / (df + 0.5));
        return (p.k + 1.0) * tf / (norm + tf) * idf;
    }

    inline auto dirichlet_probability(double tf, double doc_len, double collection_prob, DirichletParams const& p)
        -> double
    {
        return (tf + p.mu * collection_prob) / (doc_len + p.mu);
    }

    inline auto dfr_normalized_tf(double tf, double doc_len, double avg_len) -> double
    {
        return tf * std::log2(1.0 + avg_len / doc_len);
    }

    inline auto dfr(double tf, double doc_len, double avg_len, double n_docs, double df) -> double
    {
        double tfn = dfr_normalized_tf(tf, doc_len, avg_len);
        double information = tfn * std::log2((n_docs + 1.0) / (df + 0.5));
        return information / (tfn + 1.0);
    }

}  // namespace term_weight

namespace detail {
    inline void require_indexed(CorpusIndex const& ix, DocId doc)
    {
        if (!ix.contains(doc)) {
            throw DataError("document " + to_string(doc) + " is not indexed");
        }
    }
}  // namespace detail

/// Sum over distinct terms in query ∩ doc; query multiplicity is ignored.
/// Negative idf is kept as is.
inline auto score_bm25(CorpusIndex const& ix, Query const& query, DocId doc, Bm25Params const& params = {})
    -> double
{
    detail::require_indexed(ix, doc);
    auto const len = static_cast<double>(ix.doc_len(doc));
    auto const n = static_cast<double>(ix.n_docs());
    double score = 0.0;
    for (auto const& [term, qtf] : query) {
        auto tf = ix.tf(term, doc);
        if (tf == 0) {
            continue;
        }
        score += term_weight::bm25(tf, len, ix.avg_len(), n, static_cast<double>(ix.df(term)), params);
    }
    return score;
}

/// Smoothed document language model p_mu(w|d) with p(w|C) = ctf/total.
inline auto dirichlet_probability(CorpusIndex const& ix, std::string_view term, DocId doc,
                                  DirichletParams const& params = {}) -> double
{
    detail::require_indexed(ix, doc);
    auto const pc = static_cast<double>(ix.ctf(term)) / static_cast<double>(ix.total_tokens());
    return term_weight::dirichlet_probability(ix.tf(term, doc), static_cast<double>(ix.doc_len(doc)), pc, params);
}

/// Query log-likelihood; each occurrence of a query term counts. Terms
/// unseen in the collection are skipped.
inline auto score_dirichlet(CorpusIndex const& ix, Query const& query, DocId doc, DirichletParams const& params = {})
    -> double
{
    detail::require_indexed(ix, doc);
    auto const len = static_cast<double>(ix.doc_len(doc));
    auto const total = static_cast<double>(ix.total_tokens());
    double score = 0.0;
    for (auto const& [term, qtf] : query) {
        auto ctf = ix.ctf(term);
        if (ctf == 0) {
            continue;
        }
        double p = term_weight::dirichlet_probability(ix.tf(term, doc), len, static_cast<double>(ctf) / total, params);
        score += static_cast<double>(qtf) * std::log(p);
    }
    return score;
}

inline auto score_dfr(CorpusIndex const& ix, Query const& query, DocId doc, DfrParams const& = {}) -> double
{
    detail::require_indexed(ix, doc);
    auto const len = static_cast<double>(ix.doc_len(doc));
    auto const n = static_cast<double>(ix.n_docs());
    double score = 0.0;
    for (auto const& [term, qtf] : query) {
        auto tf = ix.tf(term, doc);
        if (tf == 0) {
            continue;
        }
        score += term_weight::dfr(tf, len, ix.avg_len(), n, static_cast<double>(ix.df(term)));
    }
    return score;
}

inline auto score(CorpusIndex const& ix, Query const& query, DocId doc, ModelSpec const& spec) -> double
{
    switch (spec.model) {
    case Model::bm25: return score_bm25(ix, query, doc, spec.bm25);
    case Model::ql: return score_dirichlet(ix, query, doc, spec.dirichlet);
    case Model::dfr: return score_dfr(ix, query, doc, spec.dfr);
    }
    return 0.0;
}

inline auto rank_before(ScoredCandidate const& a, ScoredCandidate const& b) -> bool
{
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.doc_id < b.doc_id;
}

/// Top-n documents for `query_doc` used as a query, itself excluded.
/// BM25 and DFR only score documents sharing at least one term with the
/// query; query likelihood scores every document.
inline auto retrieve_top_n(CorpusIndex const& ix, DocId query_doc, ModelSpec const& spec, std::size_t n)
    -> std::vector<ScoredCandidate>
{
    if (n == 0) {
        throw UsageError("top-n must be >= 1");
    }
    detail::require_indexed(ix, query_doc);
    auto const query = document_query(ix, query_doc);

    std::vector<DocId> pool;
    if (spec.model == Model::ql) {
        pool = ix.doc_ids();
    } else {
        std::set<DocId> touched;
        for (auto const& [term, qtf] : query) {
            for (auto const& p : ix.postings(term)) {
                touched.insert(p.doc_id);
            }
        }
        pool.assign(touched.begin(), touched.end());
    }

    std::vector<ScoredCandidate> scored;
    scored.reserve(pool.size());
    for (auto doc : pool) {
        if (doc != query_doc) {
            scored.push_back({doc, score(ix, query, doc, spec)});
        }
    }
    auto keep = std::min(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), rank_before);
    scored.resize(keep);
    return scored;
}

}  // namespace codesieve
