#include <gtest/gtest.h>

#include <random>

#include "codesieve/pipeline.hpp"
#include "oracle.hpp"
#include "planted.hpp"

using namespace codesieve;

namespace {

auto spec_for(Model m) -> ModelSpec
{
    ModelSpec s;
    s.model = m;
    return s;
}

auto symbols_of(std::vector<TokenStream> const& streams) -> SymbolMap
{
    SymbolMap out;
    for (auto const& s : streams) {
        out.emplace(s.doc_id, gst_alphabet(s));
    }
    return out;
}

auto pairs_of(CandidatePairSet const& c) -> PairSet { return c.pairs(); }

}  // namespace

TEST(CandidatePairSet, KeepsBestRank)
{
    CandidatePairSet c;
    c.add(DocPair::make(DocId{2}, DocId{1}), 3);
    c.add(DocPair::make(DocId{1}, DocId{2}), 1);
    c.add(DocPair::make(DocId{1}, DocId{2}), 4);
    EXPECT_EQ(c.size(), 1U);
    EXPECT_EQ(c.best_rank(DocPair::make(DocId{1}, DocId{2})), 1U);
    EXPECT_THROW((void)DocPair::make(DocId{1}, DocId{1}), std::invalid_argument);
}

TEST(Pipeline, TwoDocsOnePair)
{
    std::vector<TokenStream> streams{tokenize("class A { int f() { return 1 + 2; } }", DocId{0}),
                                     tokenize("class A { int f() { return 1 + 2; } }", DocId{1})};
    auto ix = build_index(streams);
    auto syms = symbols_of(streams);
    for (auto m : {Model::bm25, Model::ql, Model::dfr}) {
        auto candidates = generate_candidates(ix, spec_for(m), 1);
        EXPECT_EQ(candidates.size(), 1U);
        auto run = run_pipeline(ix, syms, spec_for(m), 1);
        ASSERT_EQ(run.flagged.size(), 1U);
        EXPECT_EQ(run.flagged[0].result.similarity, 1.0);
        EXPECT_EQ(run.timing.pairs_verified, 1U);
    }
    EXPECT_EQ(run_baseline(syms).timing.pairs_verified, 1U);
}

TEST(Pipeline, DisjointVocabulariesGiveNoCandidates)
{
    oracle::RawCorpus c{{{"a", "b"}, {"c", "d"}, {"e"}}};
    auto streams = oracle::to_streams(c);
    auto ix = build_index(streams);
    for (auto m : {Model::bm25, Model::dfr}) {
        auto run = run_pipeline(ix, symbols_of(streams), spec_for(m), 5);
        EXPECT_TRUE(run.candidates.empty());
        EXPECT_TRUE(run.flagged.empty());
    }
}

TEST(Pipeline, QueryLikelihoodWithLargeNCoversAllPairs)
{
    std::mt19937_64 rng(8);
    for (int round = 0; round < 10; ++round) {
        auto c = oracle::random_corpus(rng, 15, 10);
        auto ix = build_index(oracle::to_streams(c));
        auto d = ix.n_docs();
        auto candidates = generate_candidates(ix, spec_for(Model::ql), d - 1);
        EXPECT_EQ(candidates.size(), d * (d - 1) / 2);
    }
}

TEST(Pipeline, BaselineVerifiesEveryPair)
{
    for (std::size_t d : {2UL, 3UL, 7UL, 12UL}) {
        SymbolMap syms;
        for (std::size_t i = 0; i < d; ++i) {
            syms.emplace(DocId{static_cast<std::uint32_t>(i)}, std::vector<Symbol>(5, static_cast<Symbol>(i % 3)));
        }
        EXPECT_EQ(run_baseline(syms, {1, 0.5}).timing.pairs_verified, d * (d - 1) / 2);
    }
    EXPECT_THROW((void)run_baseline(SymbolMap{{DocId{0}, {1, 2}}}), DataError);
}

TEST(Pipeline, PlantedClonesRetrievedAtNTwo)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto f = planted::make(10, 2, seed);
        auto candidates = generate_candidates(f.index, spec_for(Model::bm25), 2);
        for (auto const& p : f.truth) {
            EXPECT_TRUE(candidates.contains(p)) << "seed " << seed;
        }
    }
}

TEST(Pipeline, FlaggedIsSubsetOfBaselineAndSorted)
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto f = planted::make(30, 4, seed);
        GstSettings gst{9, 0.5};
        auto baseline = run_baseline(f.symbols, gst).flagged_pairs();
        for (auto m : {Model::bm25, Model::ql, Model::dfr}) {
            for (std::size_t n : {1UL, 3UL}) {
                auto run = run_pipeline(f.index, f.symbols, spec_for(m), n, gst);
                auto flagged = run.flagged_pairs();
                EXPECT_TRUE(std::includes(baseline.begin(), baseline.end(), flagged.begin(), flagged.end()));
                EXPECT_EQ(run.timing.pairs_verified, run.candidates.size());
                EXPECT_LE(run.timing.pairs_verified, std::min(f.index.n_docs() * n, 30UL * 29 / 2));
                for (std::size_t i = 1; i < run.flagged.size(); ++i) {
                    EXPECT_GE(run.flagged[i - 1].result.similarity, run.flagged[i].result.similarity);
                }
                for (std::size_t i = 1; i < run.verified.size(); ++i) {
                    EXPECT_LT(run.verified[i - 1].result.pair, run.verified[i].result.pair);
                }
            }
        }
        // Planted clones survive every transform above the default threshold.
        for (auto const& p : f.truth) {
            EXPECT_TRUE(baseline.contains(p));
        }
    }
}

TEST(Pipeline, CandidatesGrowWithN)
{
    std::mt19937_64 rng(12);
    for (int round = 0; round < 10; ++round) {
        auto c = oracle::random_corpus(rng, 20, 8, 12);
        auto ix = build_index(oracle::to_streams(c));
        for (auto m : {Model::bm25, Model::ql, Model::dfr}) {
            auto prev = pairs_of(generate_candidates(ix, spec_for(m), 1));
            for (std::size_t n = 2; n < 20; ++n) {
                auto cur = pairs_of(generate_candidates(ix, spec_for(m), n));
                EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
                prev = std::move(cur);
            }
        }
    }
}

TEST(Pipeline, DeterministicAcrossThreadCounts)
{
    auto f = planted::make(24, 3, 99);
    auto reference = run_pipeline(f.index, f.symbols, spec_for(Model::bm25), 4, {}, 1);
    for (std::size_t threads : {2UL, 3UL, 8UL}) {
        auto other = run_pipeline(f.index, f.symbols, spec_for(Model::bm25), 4, {}, threads);
        EXPECT_EQ(other.candidates, reference.candidates);
        ASSERT_EQ(other.verified.size(), reference.verified.size());
        for (std::size_t i = 0; i < other.verified.size(); ++i) {
            EXPECT_EQ(other.verified[i].result.pair, reference.verified[i].result.pair);
            EXPECT_EQ(other.verified[i].result.similarity, reference.verified[i].result.similarity);
            EXPECT_EQ(other.verified[i].result.tiles, reference.verified[i].result.tiles);
        }
    }
}

TEST(Pipeline, MissingStreamIsAnError)
{
    auto f = planted::make(6, 1, 5);
    auto syms = f.symbols;
    syms.erase(syms.begin());
    EXPECT_THROW((void)run_pipeline(f.index, syms, spec_for(Model::ql), 5), DataError);
}

TEST(Pipeline, SpeedupPercent)
{
    EXPECT_DOUBLE_EQ(speedup_percent(6.48, 1.62), 400.0);
    EXPECT_DOUBLE_EQ(speedup_percent(1.0, 1.0), 100.0);
}
