#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "codesieve/gst.hpp"
#include "oracle.hpp"

using namespace codesieve;

namespace {

using Seq = std::vector<Symbol>;

auto iota_seq(std::size_t n, Symbol start) -> Seq
{
    Seq s(n);
    std::iota(s.begin(), s.end(), start);
    return s;
}

auto concat(Seq a, Seq const& b) -> Seq
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

auto random_seq(std::mt19937_64& rng, std::size_t max_len, Symbol alphabet) -> Seq
{
    Seq s(rng() % (max_len + 1));
    for (auto& x : s) {
        x = static_cast<Symbol>(rng() % alphabet);
    }
    return s;
}

void expect_well_formed(SimilarityResult const& r)
{
    std::vector<bool> used_a(r.len_a, false);
    std::vector<bool> used_b(r.len_b, false);
    std::size_t cov = 0;
    for (auto const& t : r.tiles) {
        ASSERT_LE(t.pos_a + t.len, r.len_a);
        ASSERT_LE(t.pos_b + t.len, r.len_b);
        for (std::size_t k = 0; k < t.len; ++k) {
            EXPECT_FALSE(used_a[t.pos_a + k]);
            EXPECT_FALSE(used_b[t.pos_b + k]);
            used_a[t.pos_a + k] = true;
            used_b[t.pos_b + k] = true;
        }
        cov += t.len;
    }
    EXPECT_EQ(cov, r.coverage);
    EXPECT_LE(r.coverage, std::min(r.len_a, r.len_b));
    EXPECT_GE(r.similarity, 0.0);
    EXPECT_LE(r.similarity, 1.0);
}

}  // namespace

TEST(Gst, IdentityIsOneTile)
{
    auto a = iota_seq(20, 1);
    auto r = gst_similarity(a, a, 9);
    ASSERT_EQ(r.tiles.size(), 1U);
    EXPECT_EQ(r.tiles[0], (Tile{0, 0, 20}));
    EXPECT_EQ(r.similarity, 1.0);
}

TEST(Gst, DisjointAlphabets)
{
    auto r = gst_similarity(iota_seq(20, 1), iota_seq(20, 100), 9);
    EXPECT_TRUE(r.tiles.empty());
    EXPECT_EQ(r.similarity, 0.0);
}

TEST(Gst, BlockSwapIsFullyCovered)
{
    auto x = iota_seq(10, 1);
    auto y = iota_seq(10, 50);
    auto a = concat(x, y);
    auto b = concat(y, x);
    auto r = gst_similarity(a, b, 9);
    EXPECT_EQ(r.coverage, 20U);
    EXPECT_EQ(r.similarity, 1.0);
    EXPECT_EQ(oracle::canonical_coverage(a, b, 9), 20U);
    expect_well_formed(r);
}

TEST(Gst, SubThresholdBlock)
{
    auto shared = iota_seq(8, 1);
    auto r = gst_similarity(concat(shared, iota_seq(12, 100)), concat(iota_seq(12, 200), shared), 9);
    EXPECT_EQ(r.coverage, 0U);
    EXPECT_EQ(r.similarity, 0.0);
}

TEST(Gst, EmptyInputs)
{
    Seq empty;
    EXPECT_EQ(gst_similarity(empty, empty).similarity, 1.0);
    EXPECT_EQ(gst_similarity(empty, iota_seq(5, 1)).similarity, 0.0);
    EXPECT_EQ(gst_similarity(iota_seq(5, 1), empty).similarity, 0.0);
}

TEST(Gst, MinMatchZeroIsAnError)
{
    EXPECT_THROW((void)gst_similarity(iota_seq(3, 1), iota_seq(3, 1), 0), UsageError);
}

TEST(Gst, TilesReportedInCallerOrientation)
{
    auto core = iota_seq(10, 1);
    auto a = concat(iota_seq(5, 100), core);  // longer, tiled second
    auto r = gst_similarity(a, core, 9);
    ASSERT_EQ(r.tiles.size(), 1U);
    EXPECT_EQ(r.tiles[0], (Tile{5, 0, 10}));
    EXPECT_EQ(r.len_a, 15U);
    EXPECT_EQ(r.len_b, 10U);
}

TEST(Gst, LongestMatchWinsOverEarlierShorterOne)
{
    // a = P Q, b = Q' P where the P copy is shorter than Q: Q must be tiled first.
    auto p = iota_seq(4, 1);
    auto q = iota_seq(6, 20);
    auto r = gst_similarity(concat(p, q), concat(q, p), 3);
    ASSERT_EQ(r.tiles.size(), 2U);
    EXPECT_EQ(r.tiles[0].len, 6U);
    EXPECT_EQ(r.tiles[1].len, 4U);
}

TEST(VerifyPair, ThresholdIsInclusive)
{
    // 10 of 20 symbols on each side match: similarity exactly 0.5.
    auto shared = iota_seq(10, 1);
    SymbolMap streams{{DocId{0}, concat(shared, iota_seq(10, 100))}, {DocId{1}, concat(iota_seq(10, 200), shared)}};
    auto v = verify_pair(DocPair::make(DocId{0}, DocId{1}), streams, 9, 0.5);
    EXPECT_EQ(v.result.similarity, 0.5);
    EXPECT_TRUE(v.plagiarized);
    EXPECT_FALSE(verify_pair(DocPair::make(DocId{0}, DocId{1}), streams, 9, 0.5000001).plagiarized);
}

TEST(VerifyPair, IdenticalFilesFlagged)
{
    auto src = tokenize("class A { void f() { int x = 1; x = x + 2; return; } }", DocId{0});
    SymbolMap streams{{DocId{0}, gst_alphabet(src)}, {DocId{1}, gst_alphabet(src)}};
    auto v = verify_pair(DocPair::make(DocId{1}, DocId{0}), streams, 9, 0.5);
    EXPECT_EQ(v.result.similarity, 1.0);
    EXPECT_TRUE(v.plagiarized);
    EXPECT_EQ(v.result.pair.low, DocId{0});
}

TEST(VerifyPair, MissingStreamNamesTheDocument)
{
    SymbolMap streams{{DocId{0}, iota_seq(3, 1)}};
    try {
        (void)verify_pair(DocPair::make(DocId{0}, DocId{42}), streams, 9, 0.5);
        FAIL() << "expected DataError";
    } catch (DataError const& e) {
        EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
    }
}

TEST(GstProperties, MatchesNaiveOracleOnRandomSequences)
{
    std::mt19937_64 rng(17);
    for (int round = 0; round < 3000; ++round) {
        auto a = random_seq(rng, 20, 2 + rng() % 4);
        auto b = random_seq(rng, 20, 2 + rng() % 4);
        auto mm = 1 + rng() % 3;
        auto r = gst_similarity(a, b, mm);
        ASSERT_EQ(r.coverage, oracle::canonical_coverage(a, b, mm)) << "round " << round;
        expect_well_formed(r);
    }
}

TEST(GstProperties, SymmetricExactly)
{
    std::mt19937_64 rng(23);
    for (int round = 0; round < 2000; ++round) {
        auto a = random_seq(rng, 40, 3);
        auto b = random_seq(rng, 40, 3);
        auto mm = 1 + rng() % 5;
        auto ab = gst_similarity(a, b, mm);
        auto ba = gst_similarity(b, a, mm);
        ASSERT_EQ(ab.similarity, ba.similarity);
        ASSERT_EQ(ab.tiles.size(), ba.tiles.size());
        for (std::size_t i = 0; i < ab.tiles.size(); ++i) {
            EXPECT_EQ(ab.tiles[i].pos_a, ba.tiles[i].pos_b);
            EXPECT_EQ(ab.tiles[i].pos_b, ba.tiles[i].pos_a);
        }
    }
}

TEST(GstProperties, SimilarityFormula)
{
    std::mt19937_64 rng(29);
    for (int round = 0; round < 500; ++round) {
        auto a = random_seq(rng, 60, 4);
        auto b = random_seq(rng, 60, 4);
        auto r = gst_similarity(a, b, 2);
        if (a.empty() && b.empty()) {
            continue;
        }
        EXPECT_DOUBLE_EQ(r.similarity, 2.0 * static_cast<double>(r.coverage) / static_cast<double>(a.size() + b.size()));
    }
}

TEST(GstProperties, RaisingMinMatchNeverIncreasesCoverage)
{
    std::mt19937_64 rng(31);
    for (int round = 0; round < 500; ++round) {
        auto a = random_seq(rng, 80, 3);
        auto b = concat(random_seq(rng, 10, 3), a);
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        for (std::size_t mm = 1; mm <= 12; ++mm) {
            auto cov = gst_similarity(a, b, mm).coverage;
            EXPECT_LE(cov, prev) << "min_match " << mm;
            prev = cov;
        }
    }
}
