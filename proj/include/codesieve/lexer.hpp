#pragma once

// Lexical scanner for Java-style source files.
//
// The scanner produces one TokenStream per file. Two projections are derived
// from it:
//   index_terms   - keyword/identifier texts plus literal placeholders, the
//                   bag of words fed to the inverted index;
//   gst_alphabet  - kind-abstracted symbols compared by greedy string tiling.
//                   Identifiers and literals collapse to their kind so that
//                   consistent renaming cannot hide a copy.
//
// Comments, whitespace and import/package declarations never reach the
// stream.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codesieve/types.hpp"

namespace codesieve {

enum class TokenKind : std::uint8_t {
    keyword,
    identifier,
    number_lit,
    string_lit,
    char_lit,
    op,
    separator,
};

inline auto to_string(TokenKind kind) -> std::string_view
{
    switch (kind) {
    case TokenKind::keyword: return "KEYWORD";
    case TokenKind::identifier: return "IDENTIFIER";
    case TokenKind::number_lit: return "NUMBER_LIT";
    case TokenKind::string_lit: return "STRING_LIT";
    case TokenKind::char_lit: return "CHAR_LIT";
    case TokenKind::op: return "OPERATOR";
    case TokenKind::separator: return "SEPARATOR";
    }
    return "?";
}

inline constexpr std::string_view number_placeholder = "<num>";
inline constexpr std::string_view string_placeholder = "<str>";
inline constexpr std::string_view char_placeholder = "<chr>";

struct Token {
    TokenKind kind{};
    std::string text;
    std::uint32_t line = 1;

    auto operator==(Token const&) const -> bool = default;
};

struct TokenStream {
    DocId doc_id{};
    std::string source_path;
    std::vector<Token> tokens;
    /// Diagnostics such as lossy UTF-8 replacement. Never affects tokens.
    std::vector<std::string> warnings;

    [[nodiscard]] auto length() const noexcept -> std::size_t { return tokens.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return tokens.empty(); }
};

/// Sorted set of reserved words. Index positions double as stable symbol
/// codes for the GST alphabet, so a table must not change between the runs
/// whose results are compared.
class KeywordTable {
  public:
    explicit KeywordTable(std::vector<std::string> words) : m_words(std::move(words))
    {
        std::sort(m_words.begin(), m_words.end());
        m_words.erase(std::unique(m_words.begin(), m_words.end()), m_words.end());
    }

    [[nodiscard]] auto find(std::string_view word) const -> std::optional<std::uint32_t>
    {
        auto it = std::lower_bound(m_words.begin(), m_words.end(), word);
        if (it == m_words.end() || *it != word) {
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(it - m_words.begin());
    }

    [[nodiscard]] auto contains(std::string_view word) const -> bool { return find(word).has_value(); }
    [[nodiscard]] auto words() const noexcept -> std::vector<std::string> const& { return m_words; }

  private:
    std::vector<std::string> m_words;
};

inline auto java_keywords() -> KeywordTable const&
{
    static KeywordTable const table({
        "abstract", "assert",    "boolean",    "break",      "byte",      "case",
        "catch",    "char",      "class",      "const",      "continue",  "default",
        "do",       "double",    "else",       "enum",       "extends",   "final",
        "finally",  "float",     "for",        "goto",       "if",        "implements",
        "import",   "instanceof", "int",       "interface",  "long",      "native",
        "new",      "package",   "private",    "protected",  "public",    "return",
        "short",    "static",    "strictfp",   "super",      "switch",    "synchronized",
        "this",     "throw",     "throws",     "transient",  "try",       "void",
        "volatile", "while",     "true",       "false",      "null",
    });
    return table;
}

namespace detail {

    // Longest first so that a linear scan yields maximal munch.
    inline constexpr std::array<std::string_view, 48> punctuators = {
        ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==",
        "!=",   "<=",  ">=",  "+=",  "-=",  "*=", "/=", "&=", "|=", "^=", "%=", "<<",
        ">>",   "=",   ">",   "<",   "!",   "~",  "?",  ":",  "+",  "-",  "*",  "/",
        "&",    "|",   "^",   "%",   "(",   ")",  "{",  "}",  "[",  "]",  ";",  ",",
    };
    inline constexpr std::array<std::string_view, 2> extra_separators = {".", "@"};

    inline auto is_separator(std::string_view p) -> bool
    {
        static constexpr std::array<std::string_view, 11> seps = {
            "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "...",
        };
        return std::find(seps.begin(), seps.end(), p) != seps.end() || p == "::";
    }

    inline auto punctuator_code(std::string_view p) -> std::optional<std::uint32_t>
    {
        for (std::size_t i = 0; i < punctuators.size(); ++i) {
            if (punctuators[i] == p) {
                return static_cast<std::uint32_t>(i);
            }
        }
        for (std::size_t i = 0; i < extra_separators.size(); ++i) {
            if (extra_separators[i] == p) {
                return static_cast<std::uint32_t>(punctuators.size() + i);
            }
        }
        return std::nullopt;
    }

    inline auto is_ident_start(unsigned char c) -> bool
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
    }

    inline auto is_ident_part(unsigned char c) -> bool
    {
        return is_ident_start(c) || (c >= '0' && c <= '9');
    }

    inline auto is_digit(unsigned char c) -> bool { return c >= '0' && c <= '9'; }

    inline auto ascii_lower(std::string s) -> std::string
    {
        for (auto& c : s) {
            if (c >= 'A' && c <= 'Z') {
                c = static_cast<char>(c - 'A' + 'a');
            }
        }
        return s;
    }

    // Replaces every malformed UTF-8 sequence with U+FFFD. Returns the count
    // of replacements.
    inline auto sanitize_utf8(std::string_view in, std::string& out) -> std::size_t
    {
        static constexpr std::string_view replacement = "\xEF\xBF\xBD";
        out.clear();
        out.reserve(in.size());
        std::size_t replaced = 0;
        std::size_t i = 0;
        while (i < in.size()) {
            auto c = static_cast<unsigned char>(in[i]);
            if (c < 0x80) {
                out.push_back(static_cast<char>(c));
                ++i;
                continue;
            }
            std::size_t need = 0;
            std::uint32_t cp = 0;
            if (c >= 0xC2 && c <= 0xDF) {
                need = 1;
                cp = c & 0x1FU;
            } else if (c >= 0xE0 && c <= 0xEF) {
                need = 2;
                cp = c & 0x0FU;
            } else if (c >= 0xF0 && c <= 0xF4) {
                need = 3;
                cp = c & 0x07U;
            }
            bool ok = need > 0;
            if (ok) {
                for (std::size_t k = 1; k <= need; ++k) {
                    if (i + k >= in.size()) {
                        ok = false;
                        break;
                    }
                    auto cc = static_cast<unsigned char>(in[i + k]);
                    if ((cc & 0xC0U) != 0x80U) {
                        ok = false;
                        break;
                    }
                    cp = (cp << 6U) | (cc & 0x3FU);
                }
            }
            // Overlong, surrogate and out-of-range encodings.
            if (ok) {
                if ((need == 2 && cp < 0x800) || (need == 3 && (cp < 0x10000 || cp > 0x10FFFF))
                    || (cp >= 0xD800 && cp <= 0xDFFF)) {
                    ok = false;
                }
            }
            if (ok) {
                out.append(in.substr(i, need + 1));
                i += need + 1;
            } else {
                out.append(replacement);
                ++replaced;
                ++i;
            }
        }
        return replaced;
    }

    class Scanner {
      public:
        Scanner(std::string_view src, KeywordTable const& keywords) : m_src(src), m_keywords(keywords) {}

        auto run() -> std::vector<Token>
        {
            std::vector<Token> out;
            bool skipping_declaration = false;
            while (true) {
                skip_trivia();
                if (m_pos >= m_src.size()) {
                    break;
                }
                Token tok = next();
                if (skipping_declaration) {
                    if (tok.kind == TokenKind::separator && tok.text == ";") {
                        skipping_declaration = false;
                    }
                    continue;
                }
                if (tok.kind == TokenKind::keyword && (tok.text == "import" || tok.text == "package")) {
                    skipping_declaration = true;
                    continue;
                }
                out.push_back(std::move(tok));
            }
            return out;
        }

      private:
        [[nodiscard]] auto peek(std::size_t ahead = 0) const -> unsigned char
        {
            return m_pos + ahead < m_src.size() ? static_cast<unsigned char>(m_src[m_pos + ahead]) : 0;
        }

        void advance(std::size_t n = 1)
        {
            for (std::size_t k = 0; k < n && m_pos < m_src.size(); ++k) {
                if (m_src[m_pos] == '\n') {
                    ++m_line;
                }
                ++m_pos;
            }
        }

        void skip_trivia()
        {
            while (m_pos < m_src.size()) {
                auto c = peek();
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                    advance();
                } else if (c == '/' && peek(1) == '/') {
                    while (m_pos < m_src.size() && peek() != '\n') {
                        advance();
                    }
                } else if (c == '/' && peek(1) == '*') {
                    advance(2);
                    while (m_pos < m_src.size() && !(peek() == '*' && peek(1) == '/')) {
                        advance();
                    }
                    advance(2);
                } else {
                    break;
                }
            }
        }

        auto next() -> Token
        {
            auto const line = m_line;
            auto const c = peek();
            if (is_ident_start(c)) {
                auto start = m_pos;
                while (m_pos < m_src.size() && is_ident_part(peek())) {
                    advance();
                }
                std::string word(m_src.substr(start, m_pos - start));
                if (m_keywords.contains(word)) {
                    return {TokenKind::keyword, std::move(word), line};
                }
                return {TokenKind::identifier, ascii_lower(std::move(word)), line};
            }
            if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
                scan_number();
                return {TokenKind::number_lit, std::string(number_placeholder), line};
            }
            if (c == '"') {
                scan_string();
                return {TokenKind::string_lit, std::string(string_placeholder), line};
            }
            if (c == '\'') {
                scan_quoted('\'');
                return {TokenKind::char_lit, std::string(char_placeholder), line};
            }
            for (auto p : punctuators) {
                if (m_src.substr(m_pos, p.size()) == p) {
                    advance(p.size());
                    return {is_separator(p) ? TokenKind::separator : TokenKind::op, std::string(p), line};
                }
            }
            if (c == '.' || c == '@') {
                advance();
                return {TokenKind::separator, std::string(1, static_cast<char>(c)), line};
            }
            // Anything else (stray '#', '\\', backtick) is kept as a one-byte
            // operator so that it still occupies a position.
            advance();
            return {TokenKind::op, std::string(1, static_cast<char>(c)), line};
        }

        void scan_number()
        {
            bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
            while (m_pos < m_src.size()) {
                auto c = peek();
                if (is_ident_part(c) || c == '.') {
                    if (c == '.' && peek(1) == '.') {
                        break;
                    }
                    advance();
                    bool exponent = hex ? (c == 'p' || c == 'P') : (c == 'e' || c == 'E');
                    if (exponent && (peek() == '+' || peek() == '-')) {
                        advance();
                    }
                } else {
                    break;
                }
            }
        }

        void scan_string()
        {
            if (m_src.substr(m_pos, 3) == "\"\"\"") {
                advance(3);
                while (m_pos < m_src.size() && m_src.substr(m_pos, 3) != "\"\"\"") {
                    advance(peek() == '\\' ? 2 : 1);
                }
                advance(3);
                return;
            }
            scan_quoted('"');
        }

        // Unterminated literals stop at the end of the line.
        void scan_quoted(char quote)
        {
            advance();
            while (m_pos < m_src.size()) {
                auto c = peek();
                if (c == '\n') {
                    return;
                }
                if (c == '\\') {
                    advance(peek(1) == '\n' ? 1 : 2);
                    continue;
                }
                advance();
                if (c == static_cast<unsigned char>(quote)) {
                    return;
                }
            }
        }

        std::string_view m_src;
        KeywordTable const& m_keywords;
        std::size_t m_pos = 0;
        std::uint32_t m_line = 1;
    };

}  // namespace detail

inline auto tokenize(std::string_view source_text, DocId doc_id, KeywordTable const& keywords = java_keywords())
    -> TokenStream
{
    TokenStream stream;
    stream.doc_id = doc_id;
    std::string clean;
    auto replaced = detail::sanitize_utf8(source_text, clean);
    if (replaced > 0) {
        stream.warnings.push_back("replaced " + std::to_string(replaced) + " undecodable byte(s)");
    }
    stream.tokens = detail::Scanner(clean, keywords).run();
    return stream;
}

inline auto index_terms(TokenStream const& stream) -> std::vector<std::string>
{
    std::vector<std::string> terms;
    terms.reserve(stream.tokens.size());
    for (auto const& tok : stream.tokens) {
        if (tok.kind != TokenKind::op && tok.kind != TokenKind::separator) {
            terms.push_back(tok.text);
        }
    }
    return terms;
}

/// Comparison symbol for greedy string tiling: the token kind in the top
/// byte, a kind-specific code in the low 24 bits. Identifiers and literals
/// always carry code 0.
using Symbol = std::uint32_t;

constexpr auto make_symbol(TokenKind kind, std::uint32_t code) noexcept -> Symbol
{
    return (static_cast<std::uint32_t>(kind) << 24U) | (code & 0xFFFFFFU);
}

constexpr auto symbol_kind(Symbol s) noexcept -> TokenKind { return static_cast<TokenKind>(s >> 24U); }

inline auto gst_alphabet(TokenStream const& stream, KeywordTable const& keywords = java_keywords())
    -> std::vector<Symbol>
{
    std::vector<Symbol> symbols;
    symbols.reserve(stream.tokens.size());
    for (auto const& tok : stream.tokens) {
        std::uint32_t code = 0;
        switch (tok.kind) {
        case TokenKind::keyword: code = keywords.find(tok.text).value_or(0xFFFFFFU) + 1; break;
        case TokenKind::op:
        case TokenKind::separator:
            if (auto known = detail::punctuator_code(tok.text)) {
                code = *known + 1;
            } else {
                code = 0x10000U + static_cast<unsigned char>(tok.text.front());
            }
            break;
        default: break;
        }
        symbols.push_back(make_symbol(tok.kind, code));
    }
    return symbols;
}

/// Re-lexable source text for a stream. Literals are rendered as neutral
/// samples so they lex back to the same placeholder class.
inline auto render(TokenStream const& stream) -> std::string
{
    std::string out;
    for (auto const& tok : stream.tokens) {
        switch (tok.kind) {
        case TokenKind::number_lit: out += "0"; break;
        case TokenKind::string_lit: out += "\"\""; break;
        case TokenKind::char_lit: out += "'c'"; break;
        default: out += tok.text; break;
        }
        bool line_end = tok.kind == TokenKind::separator && (tok.text == ";" || tok.text == "{" || tok.text == "}");
        out += line_end ? '\n' : ' ';
    }
    return out;
}

}  // namespace codesieve
