#pragma once

// Generated corpora with planted clone pairs, written to a temp directory
// and read back through the normal ingestion path.

#include <filesystem>
#include <string>

#include "codesieve/codesieve.hpp"

namespace planted {

struct Fixture {
    codesieve::Manifest manifest;
    codesieve::Corpus corpus;
    codesieve::CorpusIndex index;
    codesieve::SymbolMap symbols;
    codesieve::PairSet truth;
};

inline auto scratch_dir(std::string const& name) -> std::filesystem::path
{
    auto dir = std::filesystem::temp_directory_path() / "codesieve_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline auto make(std::size_t n_docs, std::size_t n_pairs, std::uint64_t seed,
                 std::set<codesieve::Transform> transforms = codesieve::all_transforms()) -> Fixture
{
    auto dir = scratch_dir("planted_" + std::to_string(n_docs) + "_" + std::to_string(n_pairs) + "_"
                           + std::to_string(seed));
    auto manifest = codesieve::generate({n_docs, n_pairs, std::move(transforms), seed}, dir);
    auto corpus = codesieve::ingest_corpus(dir);
    auto index = codesieve::build_index(corpus.streams);
    auto symbols = corpus.symbols();
    auto truth = manifest.planted_pairs();
    return {std::move(manifest), std::move(corpus), std::move(index), std::move(symbols), std::move(truth)};
}

}  // namespace planted
