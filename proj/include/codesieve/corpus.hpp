#pragma once

// Directory-of-files corpus ingestion and qrels parsing.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "codesieve/evaluation.hpp"
#include "codesieve/gst.hpp"
#include "codesieve/lexer.hpp"
#include "codesieve/types.hpp"

namespace codesieve {

namespace fs = std::filesystem;

/// FNV-1a 64-bit, used to fingerprint inputs in run manifests.
inline auto fnv1a64(std::string_view data) -> std::uint64_t
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline auto hex64(std::uint64_t v) -> std::string
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline auto read_file(fs::path const& path) -> std::optional<std::string>
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        return std::nullopt;
    }
    return std::move(ss).str();
}

struct Corpus {
    fs::path root;
    std::vector<TokenStream> streams;
    /// Relative path of every matched file, indexed by doc id.
    std::vector<std::string> paths;
    std::vector<std::string> empty_files;
    std::vector<std::string> unreadable_files;
    /// Per-file content hash, keyed by relative path.
    std::map<std::string, std::string> hashes;

    [[nodiscard]] auto path_of(DocId id) const -> std::string const& { return paths.at(to_underlying(id)); }

    [[nodiscard]] auto resolve(std::string_view name) const -> std::optional<DocId>
    {
        auto it = std::lower_bound(paths.begin(), paths.end(), name);
        if (it != paths.end() && *it == name) {
            return DocId{static_cast<std::uint32_t>(it - paths.begin())};
        }
        // Bare file names resolve when unambiguous.
        std::optional<DocId> found;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (fs::path(paths[i]).filename() == name) {
                if (found) {
                    return std::nullopt;
                }
                found = DocId{static_cast<std::uint32_t>(i)};
            }
        }
        return found;
    }

    [[nodiscard]] auto symbols(KeywordTable const& keywords = java_keywords()) const -> SymbolMap
    {
        SymbolMap out;
        for (auto const& s : streams) {
            out.emplace(s.doc_id, gst_alphabet(s, keywords));
        }
        return out;
    }
};

/// Accepts "*.java", ".java" or "java".
inline auto matches_extension(fs::path const& p, std::vector<std::string> const& filters) -> bool
{
    auto name = p.filename().string();
    for (auto f : filters) {
        if (f.starts_with("*")) {
            f.erase(0, 1);
        }
        if (!f.starts_with(".")) {
            f.insert(0, ".");
        }
        if (name.size() > f.size() && name.ends_with(f)) {
            return true;
        }
    }
    return false;
}

/// Recursively lexes every matching file under `dir`. Doc ids are the
/// lexicographic rank of the relative (generic) path among matching files;
/// files without tokens or that cannot be read keep their id but produce no
/// stream.
inline auto ingest_corpus(fs::path const& dir, std::vector<std::string> const& extensions = {"*.java"},
                          KeywordTable const& keywords = java_keywords()) -> Corpus
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw DataError("corpus directory not readable: " + dir.string());
    }
    Corpus corpus;
    corpus.root = dir;
    fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        throw DataError("cannot scan corpus directory " + dir.string() + ": " + ec.message());
    }
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            throw DataError("error scanning corpus directory: " + ec.message());
        }
        if (it->is_regular_file(ec) && matches_extension(it->path(), extensions)) {
            corpus.paths.push_back(fs::relative(it->path(), dir).generic_string());
        }
    }
    std::sort(corpus.paths.begin(), corpus.paths.end());

    for (std::size_t i = 0; i < corpus.paths.size(); ++i) {
        auto const& rel = corpus.paths[i];
        auto text = read_file(dir / rel);
        if (!text) {
            corpus.unreadable_files.push_back(rel);
            continue;
        }
        corpus.hashes.emplace(rel, hex64(fnv1a64(*text)));
        auto stream = tokenize(*text, DocId{static_cast<std::uint32_t>(i)}, keywords);
        stream.source_path = rel;
        if (stream.empty()) {
            corpus.empty_files.push_back(rel);
            continue;
        }
        corpus.streams.push_back(std::move(stream));
    }
    if (corpus.streams.empty()) {
        throw DataError("empty corpus: no tokenizable files matching the filter under " + dir.string());
    }
    return corpus;
}

using NameResolver = std::function<std::optional<DocId>(std::string_view)>;

/// One pair per line: two whitespace-separated file names relative to the
/// corpus root. Blank lines and lines starting with '#' are skipped.
inline auto parse_qrels(std::istream& in, NameResolver const& resolve, std::vector<std::string>* warnings = nullptr)
    -> Qrels
{
    Qrels q;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::vector<std::string> names;
        for (std::string f; fields >> f;) {
            names.push_back(f);
        }
        if (names.size() != 2 || names[0] == names[1]) {
            throw DataError("qrels line " + std::to_string(line_no) + ": expected two distinct file names");
        }
        auto a = resolve(names[0]);
        auto b = resolve(names[1]);
        if (!a || !b || *a == *b) {
            ++q.dropped;
            if (warnings) {
                warnings->push_back("qrels line " + std::to_string(line_no) + ": unresolvable pair '" + names[0] + " "
                                    + names[1] + "' dropped");
            }
            continue;
        }
        q.relevant.insert(DocPair::make(*a, *b));
    }
    return q;
}

inline auto parse_qrels(fs::path const& path, NameResolver const& resolve, std::vector<std::string>* warnings = nullptr)
    -> Qrels
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open qrels file: " + path.string());
    }
    return parse_qrels(in, resolve, warnings);
}

}  // namespace codesieve
