#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "codesieve/evaluation.hpp"
#include "codesieve/pipeline.hpp"

namespace codesieve {

/// RFC 4180 field: quoted only when it contains a comma, quote or line break.
inline auto csv_field(std::string_view s) -> std::string
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

inline auto format_fixed(double v, int digits = 6) -> std::string
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline auto format_optional(std::optional<double> v, int digits = 6) -> std::string
{
    return v ? format_fixed(*v, digits) : std::string{};
}

inline constexpr std::string_view eval_csv_header =
    "model,k,b,mu,top_n,precision,recall,accuracy,pairs_retrieved,pairs_verified,retrieval_s,verification_s,total_s";

/// Parameters that do not apply to a row's model are left empty.
inline auto eval_rows_csv(std::vector<EvalRow> const& rows) -> std::string
{
    std::string out(eval_csv_header);
    out += "\r\n";
    for (auto const& r : rows) {
        bool const bm25 = r.spec.model == Model::bm25;
        bool const ql = r.spec.model == Model::ql;
        out += std::string(to_string(r.spec.model)) + ',';
        out += (bm25 ? format_fixed(r.spec.bm25.k, 4) : "") + ',';
        out += (bm25 ? format_fixed(r.spec.bm25.b, 4) : "") + ',';
        out += (ql ? format_fixed(r.spec.dirichlet.mu, 4) : "") + ',';
        out += std::to_string(r.top_n) + ',';
        out += format_optional(r.precision) + ',';
        out += format_fixed(r.recall) + ',';
        out += format_optional(r.accuracy) + ',';
        out += std::to_string(r.pairs_retrieved) + ',';
        out += std::to_string(r.pairs_verified) + ',';
        out += format_fixed(r.retrieval_s) + ',';
        out += format_fixed(r.verification_s) + ',';
        out += format_fixed(r.total_s);
        out += "\r\n";
    }
    return out;
}

inline auto eval_rows_json(std::vector<EvalRow> const& rows) -> nlohmann::ordered_json
{
    auto arr = nlohmann::ordered_json::array();
    auto opt = [](std::optional<double> v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr); };
    for (auto const& r : rows) {
        nlohmann::ordered_json j;
        j["model"] = to_string(r.spec.model);
        j["k"] = r.spec.model == Model::bm25 ? nlohmann::ordered_json(r.spec.bm25.k) : nullptr;
        j["b"] = r.spec.model == Model::bm25 ? nlohmann::ordered_json(r.spec.bm25.b) : nullptr;
        j["mu"] = r.spec.model == Model::ql ? nlohmann::ordered_json(r.spec.dirichlet.mu) : nullptr;
        j["top_n"] = r.top_n;
        j["precision"] = opt(r.precision);
        j["recall"] = r.recall;
        j["accuracy"] = opt(r.accuracy);
        j["pairs_retrieved"] = r.pairs_retrieved;
        j["pairs_verified"] = r.pairs_verified;
        j["retrieval_s"] = r.retrieval_s;
        j["verification_s"] = r.verification_s;
        j["total_s"] = r.total_s;
        arr.push_back(std::move(j));
    }
    return arr;
}

using PathLookup = std::function<std::string(DocId)>;

inline constexpr std::string_view pairs_csv_header = "doc_a,doc_b,similarity,coverage,rank";

/// One line per verified pair. `rank` is the best retrieval rank, empty
/// for baseline runs. No timing data, so identical runs give identical bytes.
inline auto pairs_csv(std::vector<VerifiedPair> const& pairs, CandidatePairSet const& candidates,
                      PathLookup const& path_of) -> std::string
{
    std::string out(pairs_csv_header);
    out += "\r\n";
    for (auto const& v : pairs) {
        auto const& r = v.result;
        auto rank = candidates.contains(r.pair) ? candidates.best_rank(r.pair) : 0;
        out += csv_field(path_of(r.pair.low)) + ',' + csv_field(path_of(r.pair.high)) + ',';
        out += format_fixed(r.similarity) + ',' + std::to_string(r.coverage) + ',';
        out += rank > 0 ? std::to_string(rank) : std::string{};
        out += "\r\n";
    }
    return out;
}

inline auto pairs_json(std::vector<VerifiedPair> const& pairs, CandidatePairSet const& candidates,
                       PathLookup const& path_of) -> nlohmann::ordered_json
{
    auto arr = nlohmann::ordered_json::array();
    for (auto const& v : pairs) {
        auto const& r = v.result;
        nlohmann::ordered_json j;
        j["doc_a"] = path_of(r.pair.low);
        j["doc_b"] = path_of(r.pair.high);
        j["similarity"] = r.similarity;
        j["coverage"] = r.coverage;
        auto rank = candidates.contains(r.pair) ? candidates.best_rank(r.pair) : 0;
        j["rank"] = rank > 0 ? nlohmann::ordered_json(rank) : nullptr;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace codesieve
