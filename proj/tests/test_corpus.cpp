#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "codesieve/corpus.hpp"
#include "codesieve/external.hpp"
#include "planted.hpp"

using namespace codesieve;
namespace fs = std::filesystem;

namespace {

void put(fs::path const& p, std::string const& text)
{
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

auto sample_tree() -> fs::path
{
    auto dir = planted::scratch_dir("ingest");
    put(dir / "b.java", "class B { int f() { return 1; } }");
    put(dir / "a.java", "class A { int g() { return 2; } }");
    put(dir / "sub/c.java", "class C { }");
    put(dir / "sub/deeper/a.java", "class D { void h() { } }");
    put(dir / "empty.java", "// nothing here\n");
    put(dir / "notes.txt", "class Ignored {}");
    put(dir / "README", "class Ignored {}");
    return dir;
}

auto resolver(Corpus const& c) -> NameResolver
{
    return [&c](std::string_view n) { return c.resolve(n); };
}

}  // namespace

TEST(Ingest, FiltersSortsAndSkipsEmpty)
{
    auto c = ingest_corpus(sample_tree());
    EXPECT_EQ(c.paths, (std::vector<std::string>{"a.java", "b.java", "empty.java", "sub/c.java", "sub/deeper/a.java"}));
    EXPECT_EQ(c.empty_files, (std::vector<std::string>{"empty.java"}));
    ASSERT_EQ(c.streams.size(), 4U);
    EXPECT_EQ(c.streams[0].doc_id, DocId{0});
    EXPECT_EQ(c.streams[2].doc_id, DocId{3});
    EXPECT_EQ(c.streams[2].source_path, "sub/c.java");
    EXPECT_EQ(c.hashes.size(), 5U);
    EXPECT_EQ(c.symbols().size(), 4U);
}

TEST(Ingest, ExtensionFilters)
{
    auto dir = sample_tree();
    EXPECT_EQ(ingest_corpus(dir, {"txt"}).paths, (std::vector<std::string>{"notes.txt"}));
    EXPECT_EQ(ingest_corpus(dir, {".txt", "*.java"}).paths.size(), 6U);
    EXPECT_TRUE(matches_extension("x.java", {"*.java"}));
    EXPECT_FALSE(matches_extension(".java", {"*.java"}));
    EXPECT_FALSE(matches_extension("x.javax", {"java"}));
}

TEST(Ingest, EmptyOrMissingDirectory)
{
    auto dir = planted::scratch_dir("ingest_empty");
    EXPECT_THROW((void)ingest_corpus(dir), DataError);
    put(dir / "only_comments.java", "/* */");
    EXPECT_THROW((void)ingest_corpus(dir), DataError);
    EXPECT_THROW((void)ingest_corpus(dir / "missing"), DataError);
}

TEST(Ingest, ResolveByPathOrUniqueBasename)
{
    auto c = ingest_corpus(sample_tree());
    EXPECT_EQ(c.resolve("sub/c.java"), DocId{3});
    EXPECT_EQ(c.resolve("c.java"), DocId{3});
    EXPECT_EQ(c.resolve("b.java"), DocId{1});
    // a.java exists at the root and in sub/deeper: the exact path wins.
    EXPECT_EQ(c.resolve("a.java"), DocId{0});
    EXPECT_EQ(c.resolve("sub/deeper/a.java"), DocId{4});
    EXPECT_FALSE(c.resolve("zzz.java").has_value());
}

TEST(Ingest, HashIsContentFingerprint)
{
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Qrels, ParsesCommentsBlanksAndCrlf)
{
    auto c = ingest_corpus(sample_tree());
    std::istringstream in("# header\n\na.java b.java\r\n  sub/c.java\tb.java  \nb.java a.java\n");
    auto q = parse_qrels(in, resolver(c));
    EXPECT_EQ(q.relevant.size(), 2U);
    EXPECT_TRUE(q.relevant.contains(DocPair::make(DocId{0}, DocId{1})));
    EXPECT_TRUE(q.relevant.contains(DocPair::make(DocId{3}, DocId{1})));
    EXPECT_EQ(q.dropped, 0U);
}

TEST(Qrels, UnresolvableDroppedAndCounted)
{
    auto c = ingest_corpus(sample_tree());
    std::istringstream in("a.java missing.java\nb.java a.java\n");
    std::vector<std::string> warnings;
    auto q = parse_qrels(in, resolver(c), &warnings);
    EXPECT_EQ(q.relevant.size(), 1U);
    EXPECT_EQ(q.dropped, 1U);
    ASSERT_EQ(warnings.size(), 1U);
    EXPECT_NE(warnings[0].find("line 1"), std::string::npos);
}

TEST(Qrels, MalformedLineNamesLineNumber)
{
    auto c = ingest_corpus(sample_tree());
    for (std::string bad : {"a.java\n", "a.java b.java c.java\n", "a.java a.java\n"}) {
        std::istringstream in("# ok\n" + bad);
        try {
            (void)parse_qrels(in, resolver(c));
            FAIL() << "expected DataError for " << bad;
        } catch (DataError const& e) {
            EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        }
    }
    EXPECT_THROW((void)parse_qrels(fs::path("/nonexistent/qrels.txt"), resolver(c)), DataError);
}

TEST(External, ParsesPercentageFromStdout)
{
    std::vector<DocPair> pairs{DocPair::make(DocId{0}, DocId{1}), DocPair::make(DocId{1}, DocId{2})};
    auto path_of = [](DocId d) { return "file " + to_string(d) + ".java"; };
    auto out = external_verify(pairs, path_of, {"echo similarity 87.5 {a} {b}"});
    ASSERT_EQ(out.size(), 2U);
    ASSERT_TRUE(out[0].verified());
    EXPECT_DOUBLE_EQ(*out[0].similarity, 0.875);

    auto exact = external_verify(pairs, path_of, {"echo 'score=100.0' ; true {a} {b}", R"(score=([0-9.]+))"});
    ASSERT_TRUE(exact[1].verified());
    EXPECT_DOUBLE_EQ(*exact[1].similarity, 1.0);
    EXPECT_EQ(exact[1].pair, pairs[1]);
}

TEST(External, QuotesPathsForTheShell)
{
    EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
    EXPECT_EQ(expand_command("cmp {a} {b}", "x y", "z"), "cmp 'x y' 'z'");
    auto out = external_verify({DocPair::make(DocId{0}, DocId{1})}, [](DocId) { return std::string("a'b; exit 9"); },
                               {"test {a} = {b} && echo 42"});
    ASSERT_TRUE(out[0].verified());
    EXPECT_DOUBLE_EQ(*out[0].similarity, 0.42);
}

TEST(External, FailuresAreRecordedPerPair)
{
    std::vector<DocPair> pairs{DocPair::make(DocId{0}, DocId{1})};
    auto path_of = [](DocId) { return std::string("x"); };
    auto failed = external_verify(pairs, path_of, {"false {a} {b}"});
    EXPECT_FALSE(failed[0].verified());
    EXPECT_NE(failed[0].error.find("status 1"), std::string::npos);

    auto silent = external_verify(pairs, path_of, {"echo none {a} {b}", R"(sim=([0-9]+))"});
    EXPECT_FALSE(silent[0].verified());

    auto too_big = external_verify(pairs, path_of, {"echo 250 {a} {b}", R"(^([0-9]+))"});
    EXPECT_FALSE(too_big[0].verified());
}

TEST(External, BadConfigurationIsUsageError)
{
    auto path_of = [](DocId) { return std::string("x"); };
    std::vector<DocPair> pairs{DocPair::make(DocId{0}, DocId{1})};
    EXPECT_THROW((void)external_verify(pairs, path_of, {"jplag {a}"}), UsageError);
    EXPECT_THROW((void)external_verify(pairs, path_of, {"jplag {a} {b}", "(unclosed"}), UsageError);
    EXPECT_THROW((void)external_verify(pairs, path_of, {"jplag {a} {b}", "[0-9]+"}), UsageError);
}
