#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "codesieve/lexer.hpp"

using namespace codesieve;

namespace {

auto kinds(TokenStream const& s) -> std::vector<TokenKind>
{
    std::vector<TokenKind> out;
    for (auto const& t : s.tokens) {
        out.push_back(t.kind);
    }
    return out;
}

auto texts(TokenStream const& s) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (auto const& t : s.tokens) {
        out.push_back(t.text);
    }
    return out;
}

// Random Java-ish source. Identifier spellings avoid keywords in any case so
// that lowercasing cannot turn an identifier into a keyword.
struct SourceGen {
    std::mt19937_64 rng;
    std::vector<std::string> idents;

    explicit SourceGen(std::uint64_t seed) : rng(seed)
    {
        for (int i = 0; i < 6; ++i) {
            idents.push_back(word());
        }
    }

    auto below(std::size_t n) -> std::size_t { return rng() % n; }

    auto word() -> std::string
    {
        static const char* parts[] = {"Foo", "bar", "Qux", "zap", "Mel", "tor", "x", "Y"};
        std::string w;
        for (std::size_t i = 0, n = 1 + below(3); i < n; ++i) {
            w += parts[below(8)];
        }
        return w;
    }

    auto source(std::vector<std::string> const& names) -> std::vector<std::string>
    {
        static const char* kw[] = {"int", "if", "while", "return", "static", "new", "for"};
        static const char* ops[] = {"=", "+", "<<=", ">>>", "&&", "!=", "->", "::", "++"};
        static const char* seps[] = {"(", ")", "{", "}", ";", ",", ".", "[", "]"};
        static const char* lits[] = {"42", "0x1F", "3.5e-3", "\"hi there\"", "'c'", "'\\n'", "\"a\\\"b\""};
        std::vector<std::string> pieces;
        for (std::size_t i = 0, n = 5 + below(40); i < n; ++i) {
            switch (below(5)) {
            case 0: pieces.emplace_back(kw[below(7)]); break;
            case 1: pieces.push_back(names[below(names.size())]); break;
            case 2: pieces.emplace_back(ops[below(9)]); break;
            case 3: pieces.emplace_back(seps[below(9)]); break;
            default: pieces.emplace_back(lits[below(7)]); break;
            }
        }
        return pieces;
    }

    static auto join(std::vector<std::string> const& pieces) -> std::string
    {
        std::string out;
        for (auto const& p : pieces) {
            out += p;
            out += ' ';
        }
        return out;
    }
};

}  // namespace

TEST(Lexer, DeclarationWithTrailingComment)
{
    auto s = tokenize("int x = 42; // init", DocId{0});
    ASSERT_EQ(s.length(), 5U);
    EXPECT_EQ(kinds(s), (std::vector<TokenKind>{TokenKind::keyword, TokenKind::identifier, TokenKind::op,
                                                TokenKind::number_lit, TokenKind::separator}));
    EXPECT_EQ(texts(s), (std::vector<std::string>{"int", "x", "=", "<num>", ";"}));
}

TEST(Lexer, EmptyAndCommentOnly)
{
    EXPECT_EQ(tokenize("", DocId{0}).length(), 0U);
    EXPECT_EQ(tokenize("/* only a comment */", DocId{0}).length(), 0U);
    EXPECT_EQ(tokenize("// a\n/* b\n c */  \n\t", DocId{0}).length(), 0U);
}

TEST(Lexer, ImportAndPackageLinesStripped)
{
    auto s = tokenize("package a.b;\nimport java.util.*;\nimport static x.Y.z;\nclass A {}", DocId{0});
    EXPECT_EQ(texts(s), (std::vector<std::string>{"class", "a", "{", "}"}));
}

TEST(Lexer, IdentifiersLowercasedKeywordsCaseSensitive)
{
    auto s = tokenize("Int MyVar INT int", DocId{0});
    EXPECT_EQ(kinds(s), (std::vector<TokenKind>{TokenKind::identifier, TokenKind::identifier, TokenKind::identifier,
                                                TokenKind::keyword}));
    EXPECT_EQ(texts(s), (std::vector<std::string>{"int", "myvar", "int", "int"}));
}

TEST(Lexer, LiteralsBecomePlaceholders)
{
    auto s = tokenize(R"(x = "str // not a comment" + 'q' + 1.5e+10 + 0xFFL + "esc\"aped";)", DocId{0});
    EXPECT_EQ(texts(s), (std::vector<std::string>{"x", "=", "<str>", "+", "<chr>", "+", "<num>", "+", "<num>", "+",
                                                  "<str>", ";"}));
}

TEST(Lexer, TextBlockIsOneStringLiteral)
{
    auto s = tokenize("s = \"\"\"\nline \"one\"\n\"\"\";", DocId{0});
    EXPECT_EQ(texts(s), (std::vector<std::string>{"s", "=", "<str>", ";"}));
}

TEST(Lexer, MaximalMunchOperators)
{
    auto s = tokenize("a >>>= b >> c -> d :: e ... f", DocId{0});
    EXPECT_EQ(texts(s), (std::vector<std::string>{"a", ">>>=", "b", ">>", "c", "->", "d", "::", "e", "...", "f"}));
    EXPECT_EQ(s.tokens[7].kind, TokenKind::separator);
    EXPECT_EQ(s.tokens[5].kind, TokenKind::op);
}

TEST(Lexer, LineNumbers)
{
    auto s = tokenize("a\n/* x\ny */ b\n\nc", DocId{0});
    ASSERT_EQ(s.length(), 3U);
    EXPECT_EQ(s.tokens[0].line, 1U);
    EXPECT_EQ(s.tokens[1].line, 3U);
    EXPECT_EQ(s.tokens[2].line, 5U);
}

TEST(Lexer, InvalidUtf8IsReplacedWithWarning)
{
    std::string src = "int a\xff\xfe = 1;";
    auto s = tokenize(src, DocId{3});
    EXPECT_EQ(s.doc_id, DocId{3});
    ASSERT_EQ(s.warnings.size(), 1U);
    EXPECT_EQ(s.length(), 5U);
    EXPECT_EQ(s.tokens[1].kind, TokenKind::identifier);

    auto clean = tokenize("int \xc3\xa9t\xc3\xa9 = 1;", DocId{0});
    EXPECT_TRUE(clean.warnings.empty());
    EXPECT_EQ(clean.tokens[1].text, "\xc3\xa9t\xc3\xa9");
}

TEST(Lexer, UnterminatedLiteralsAndCommentsDoNotOverrun)
{
    EXPECT_EQ(texts(tokenize("\"open\nx", DocId{0})), (std::vector<std::string>{"<str>", "x"}));
    EXPECT_EQ(texts(tokenize("a /* never closed", DocId{0})), (std::vector<std::string>{"a"}));
}

TEST(IndexTerms, DropsOperatorsAndSeparators)
{
    EXPECT_EQ(index_terms(tokenize("int x = 42;", DocId{0})), (std::vector<std::string>{"int", "x", "<num>"}));
    EXPECT_TRUE(index_terms(tokenize("", DocId{0})).empty());
    EXPECT_TRUE(index_terms(tokenize("{ } ;", DocId{0})).empty());
}

TEST(GstAlphabet, IdentifiersAndLiteralsCollapse)
{
    EXPECT_EQ(gst_alphabet(tokenize("int x = 42;", DocId{0})), gst_alphabet(tokenize("int y = 7;", DocId{1})));
    EXPECT_TRUE(gst_alphabet(tokenize("", DocId{0})).empty());

    auto a = gst_alphabet(tokenize("if (a) {}", DocId{0}));
    auto b = gst_alphabet(tokenize("while (a) {}", DocId{0}));
    ASSERT_EQ(a.size(), b.size());
    EXPECT_NE(a[0], b[0]);
    EXPECT_TRUE(std::equal(a.begin() + 1, a.end(), b.begin() + 1));
}

TEST(GstAlphabet, DistinctPunctuationGetsDistinctSymbols)
{
    auto s = gst_alphabet(tokenize(". ... @ :: # \\", DocId{0}));
    std::set<Symbol> unique(s.begin(), s.end());
    EXPECT_EQ(unique.size(), s.size());
}

TEST(LexerProperties, CommentInsertionInvariance)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SourceGen g(seed);
        auto pieces = g.source(g.idents);
        auto base = tokenize(SourceGen::join(pieces), DocId{0});
        auto with_comments = pieces;
        for (std::size_t i = 0, n = 1 + g.below(4); i < n; ++i) {
            auto at = g.below(with_comments.size() + 1);
            with_comments.insert(with_comments.begin() + static_cast<std::ptrdiff_t>(at),
                                 g.below(2) ? "/* int x = 1; */" : "// while (true)\n");
        }
        auto other = tokenize(SourceGen::join(with_comments), DocId{0});
        EXPECT_EQ(index_terms(base), index_terms(other)) << "seed " << seed;
        EXPECT_EQ(gst_alphabet(base), gst_alphabet(other)) << "seed " << seed;
    }
}

TEST(LexerProperties, IdentifierRenameInvariance)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SourceGen g(seed);
        std::vector<std::string> renamed;
        for (std::size_t i = 0; i < g.idents.size(); ++i) {
            renamed.push_back("renamed" + std::to_string(i) + g.idents[i]);
        }
        SourceGen replay(seed);
        auto original = g.source(g.idents);
        auto copy = replay.source(renamed);
        EXPECT_EQ(gst_alphabet(tokenize(SourceGen::join(original), DocId{0})),
                  gst_alphabet(tokenize(SourceGen::join(copy), DocId{0})))
            << "seed " << seed;
    }
}

TEST(LexerProperties, RenderRoundTripPreservesIndexTerms)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SourceGen g(seed);
        auto s = tokenize(SourceGen::join(g.source(g.idents)), DocId{0});
        auto again = tokenize(render(s), DocId{0});
        EXPECT_EQ(index_terms(s), index_terms(again)) << "seed " << seed;
        EXPECT_EQ(gst_alphabet(s), gst_alphabet(again)) << "seed " << seed;
    }
}

TEST(LexerProperties, Deterministic)
{
    SourceGen g(7);
    auto src = SourceGen::join(g.source(g.idents));
    auto a = tokenize(src, DocId{1});
    auto b = tokenize(src, DocId{1});
    EXPECT_EQ(a.tokens, b.tokens);
}

TEST(KeywordTable, Pluggable)
{
    KeywordTable tiny({"fn", "let"});
    auto s = tokenize("let x = fn; int y;", DocId{0}, tiny);
    EXPECT_EQ(s.tokens[0].kind, TokenKind::keyword);
    EXPECT_EQ(s.tokens[3].kind, TokenKind::keyword);
    EXPECT_EQ(s.tokens[5].kind, TokenKind::identifier);
}
