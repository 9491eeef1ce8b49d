#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "codesieve/lexer.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

struct Posting {
    DocId doc_id{};
    std::uint32_t tf = 0;

    auto operator==(Posting const&) const -> bool = default;
};

/// Immutable bag-of-words inverted index with the collection statistics the
/// scorers need. Posting lists are ordered by ascending doc id.
class CorpusIndex {
  public:
    using PostingMap = std::map<std::string, std::vector<Posting>, std::less<>>;

    [[nodiscard]] auto n_docs() const noexcept -> std::size_t { return m_doc_len.size(); }
    [[nodiscard]] auto avg_len() const noexcept -> double { return m_avg_len; }
    [[nodiscard]] auto total_tokens() const noexcept -> std::uint64_t { return m_total_tokens; }
    [[nodiscard]] auto vocabulary_size() const noexcept -> std::size_t { return m_postings.size(); }
    [[nodiscard]] auto postings() const noexcept -> PostingMap const& { return m_postings; }
    [[nodiscard]] auto doc_ids() const noexcept -> std::vector<DocId> const& { return m_doc_ids; }
    /// Documents dropped at build time because they had no index terms.
    [[nodiscard]] auto excluded() const noexcept -> std::vector<DocId> const& { return m_excluded; }

    [[nodiscard]] auto contains(DocId doc) const -> bool { return m_doc_len.contains(doc); }

    [[nodiscard]] auto postings(std::string_view term) const -> std::span<Posting const>
    {
        auto it = m_postings.find(term);
        if (it == m_postings.end()) {
            return {};
        }
        return it->second;
    }

    [[nodiscard]] auto df(std::string_view term) const -> std::size_t { return postings(term).size(); }

    [[nodiscard]] auto ctf(std::string_view term) const -> std::uint64_t
    {
        auto it = m_ctf.find(term);
        return it == m_ctf.end() ? 0 : it->second;
    }

    [[nodiscard]] auto tf(std::string_view term, DocId doc) const -> std::uint32_t
    {
        auto list = postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), doc,
                                   [](Posting const& p, DocId d) { return p.doc_id < d; });
        return it != list.end() && it->doc_id == doc ? it->tf : 0;
    }

    [[nodiscard]] auto doc_len(DocId doc) const -> std::uint64_t
    {
        auto it = m_doc_len.find(doc);
        if (it == m_doc_len.end()) {
            throw DataError("document " + to_string(doc) + " is not indexed");
        }
        return it->second;
    }

    [[nodiscard]] auto doc_path(DocId doc) const -> std::string const&
    {
        static std::string const none;
        auto it = m_doc_paths.find(doc);
        return it == m_doc_paths.end() ? none : it->second;
    }

    auto operator==(CorpusIndex const&) const -> bool = default;

    friend auto build_index(std::span<TokenStream const> streams) -> CorpusIndex;
    friend auto load_index(std::string const& path) -> CorpusIndex;

  private:
    CorpusIndex() = default;

    void finalize()
    {
        m_doc_ids.clear();
        m_total_tokens = 0;
        for (auto const& [doc, len] : m_doc_len) {
            m_doc_ids.push_back(doc);
            m_total_tokens += len;
        }
        m_ctf.clear();
        for (auto const& [term, list] : m_postings) {
            std::uint64_t sum = 0;
            for (auto const& p : list) {
                sum += p.tf;
            }
            m_ctf.emplace(term, sum);
        }
        m_avg_len = m_doc_len.empty() ? 0.0
                                      : static_cast<double>(m_total_tokens) / static_cast<double>(m_doc_len.size());
    }

    PostingMap m_postings;
    std::map<std::string, std::uint64_t, std::less<>> m_ctf;
    std::map<DocId, std::uint64_t> m_doc_len;
    std::map<DocId, std::string> m_doc_paths;
    std::vector<DocId> m_doc_ids;
    std::vector<DocId> m_excluded;
    std::uint64_t m_total_tokens = 0;
    double m_avg_len = 0.0;
};

inline auto build_index(std::span<TokenStream const> streams) -> CorpusIndex
{
    std::vector<TokenStream const*> ordered;
    ordered.reserve(streams.size());
    for (auto const& s : streams) {
        ordered.push_back(&s);
    }
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->doc_id == ordered[i - 1]->doc_id) {
            throw DataError("duplicate doc_id " + to_string(ordered[i]->doc_id));
        }
    }

    CorpusIndex ix;
    for (auto const* stream : ordered) {
        auto terms = index_terms(*stream);
        if (terms.empty()) {
            ix.m_excluded.push_back(stream->doc_id);
            continue;
        }
        std::map<std::string_view, std::uint32_t> counts;
        for (auto const& t : terms) {
            ++counts[t];
        }
        // Docs arrive in ascending id order, so appending keeps lists sorted.
        for (auto const& [term, tf] : counts) {
            auto it = ix.m_postings.find(term);
            if (it == ix.m_postings.end()) {
                it = ix.m_postings.emplace(std::string(term), std::vector<Posting>{}).first;
            }
            it->second.push_back({stream->doc_id, tf});
        }
        ix.m_doc_len.emplace(stream->doc_id, terms.size());
        if (!stream->source_path.empty()) {
            ix.m_doc_paths.emplace(stream->doc_id, stream->source_path);
        }
    }
    if (ix.m_doc_len.empty()) {
        throw DataError("empty corpus: no document has index terms");
    }
    ix.finalize();
    return ix;
}

inline auto build_index(std::vector<TokenStream> const& streams) -> CorpusIndex
{
    return build_index(std::span<TokenStream const>(streams));
}

inline constexpr std::string_view index_format_name = "codesieve-index";
inline constexpr int index_format_version = 1;

inline void save_index(CorpusIndex const& ix, std::string const& path)
{
    if (path.empty()) {
        throw DataError("cannot write index: empty path");
    }
    nlohmann::ordered_json doc;
    doc["format"] = index_format_name;
    doc["version"] = index_format_version;
    doc["n_docs"] = ix.n_docs();
    doc["total_tokens"] = ix.total_tokens();
    doc["avg_len"] = ix.avg_len();
    auto docs = nlohmann::ordered_json::array();
    for (auto id : ix.doc_ids()) {
        docs.push_back({to_underlying(id), ix.doc_len(id), ix.doc_path(id)});
    }
    doc["docs"] = std::move(docs);
    auto excluded = nlohmann::ordered_json::array();
    for (auto id : ix.excluded()) {
        excluded.push_back(to_underlying(id));
    }
    doc["excluded"] = std::move(excluded);
    auto terms = nlohmann::ordered_json::array();
    for (auto const& [term, list] : ix.postings()) {
        auto flat = nlohmann::ordered_json::array();
        for (auto const& p : list) {
            flat.push_back(to_underlying(p.doc_id));
            flat.push_back(p.tf);
        }
        terms.push_back({term, std::move(flat)});
    }
    doc["terms"] = std::move(terms);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open index file for writing: " + path);
    }
    out << doc.dump() << '\n';
    if (!out.flush()) {
        throw DataError("failed writing index file: " + path);
    }
}

inline auto load_index(std::string const& path) -> CorpusIndex
{
    if (path.empty()) {
        throw DataError("cannot read index: empty path");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open index file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    auto corrupt = [&](std::string const& why) { return DataError("corrupt index file " + path + ": " + why); };

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (nlohmann::json::exception const& e) {
        throw corrupt(e.what());
    }

    CorpusIndex ix;
    try {
        if (doc.at("format").get<std::string>() != index_format_name) {
            throw corrupt("not a codesieve index");
        }
        auto version = doc.at("version").get<int>();
        if (version != index_format_version) {
            throw DataError("index format version mismatch: file has " + std::to_string(version) + ", expected "
                            + std::to_string(index_format_version));
        }
        for (auto const& d : doc.at("docs")) {
            auto id = DocId{d.at(0).get<std::uint32_t>()};
            auto len = d.at(1).get<std::uint64_t>();
            auto p = d.at(2).get<std::string>();
            if (len == 0 || !ix.m_doc_len.emplace(id, len).second) {
                throw corrupt("bad document entry");
            }
            if (!p.empty()) {
                ix.m_doc_paths.emplace(id, std::move(p));
            }
        }
        for (auto const& e : doc.at("excluded")) {
            ix.m_excluded.push_back(DocId{e.get<std::uint32_t>()});
        }
        for (auto const& t : doc.at("terms")) {
            auto const& flat = t.at(1);
            if (flat.size() % 2 != 0 || flat.empty()) {
                throw corrupt("bad posting list");
            }
            std::vector<Posting> list;
            for (std::size_t i = 0; i < flat.size(); i += 2) {
                Posting p{DocId{flat[i].get<std::uint32_t>()}, flat[i + 1].get<std::uint32_t>()};
                if (p.tf == 0 || !ix.m_doc_len.contains(p.doc_id) || (!list.empty() && !(list.back().doc_id < p.doc_id))) {
                    throw corrupt("bad posting");
                }
                list.push_back(p);
            }
            if (!ix.m_postings.emplace(t.at(0).get<std::string>(), std::move(list)).second) {
                throw corrupt("duplicate term");
            }
        }
        ix.finalize();
        if (ix.n_docs() == 0 || ix.n_docs() != doc.at("n_docs").get<std::size_t>()
            || ix.total_tokens() != doc.at("total_tokens").get<std::uint64_t>()
            || ix.avg_len() != doc.at("avg_len").get<double>()) {
            throw corrupt("statistics do not match postings");
        }
        std::map<DocId, std::uint64_t> recount;
        for (auto const& [term, list] : ix.m_postings) {
            for (auto const& p : list) {
                recount[p.doc_id] += p.tf;
            }
        }
        if (recount != ix.m_doc_len) {
            throw corrupt("document lengths do not match postings");
        }
    } catch (nlohmann::json::exception const& e) {
        throw corrupt(e.what());
    }
    return ix;
}

}  // namespace codesieve
