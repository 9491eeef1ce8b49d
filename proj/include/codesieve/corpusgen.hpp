#pragma once

// Synthetic Java-like corpora with planted plagiarised pairs.
//
// Every document is an independent random program: its own identifier
// names, its own draw of library calls and randomly shaped statements. A
// planted pair is an original plus a copy with one or more transforms
// applied. Library calls (Math.max, Arrays.fill, ...) are never renamed,
// which is what lets bag-of-words retrieval find a renamed copy.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codesieve/types.hpp"

namespace codesieve {

enum class Transform { identifier_rename, comment_insertion, statement_reorder, literal_change };

inline auto to_string(Transform t) -> std::string_view
{
    switch (t) {
    case Transform::identifier_rename: return "identifier_rename";
    case Transform::comment_insertion: return "comment_insertion";
    case Transform::statement_reorder: return "statement_reorder";
    case Transform::literal_change: return "literal_change";
    }
    return "?";
}

inline auto parse_transform(std::string_view name) -> Transform
{
    for (auto t : {Transform::identifier_rename, Transform::comment_insertion, Transform::statement_reorder,
                   Transform::literal_change}) {
        if (to_string(t) == name) {
            return t;
        }
    }
    if (name == "rename") {
        return Transform::identifier_rename;
    }
    if (name == "comment") {
        return Transform::comment_insertion;
    }
    if (name == "reorder") {
        return Transform::statement_reorder;
    }
    if (name == "literal") {
        return Transform::literal_change;
    }
    throw UsageError("unknown transform '" + std::string(name) + "'");
}

inline auto all_transforms() -> std::set<Transform>
{
    return {Transform::identifier_rename, Transform::comment_insertion, Transform::statement_reorder,
            Transform::literal_change};
}

struct PlantSpec {
    std::size_t n_docs = 0;
    std::size_t n_plag_pairs = 0;
    std::set<Transform> transforms = all_transforms();
    std::uint64_t seed = 0;

    void validate() const
    {
        if (n_docs == 0) {
            throw UsageError("corpus needs at least one document");
        }
        if (2 * n_plag_pairs > n_docs) {
            throw UsageError("too many planted pairs: at most n_docs / 2");
        }
        if (n_plag_pairs > 0 && transforms.empty()) {
            throw UsageError("planted copies need at least one transform");
        }
    }
};

struct Manifest {
    /// File names relative to the output directory, in doc-id order.
    std::vector<std::string> doc_paths;
    /// Planted pairs as (original, copy) file names.
    std::vector<std::pair<std::string, std::string>> planted;
    std::string qrels_path;

    /// Planted pairs as doc ids (file names sort in generation order).
    [[nodiscard]] auto planted_pairs() const -> PairSet
    {
        PairSet out;
        for (auto const& [a, b] : planted) {
            auto ia = std::find(doc_paths.begin(), doc_paths.end(), a) - doc_paths.begin();
            auto ib = std::find(doc_paths.begin(), doc_paths.end(), b) - doc_paths.begin();
            out.insert(DocPair::make(DocId{static_cast<std::uint32_t>(ia)}, DocId{static_cast<std::uint32_t>(ib)}));
        }
        return out;
    }
};

namespace gen {

    /// splitmix64; bounded draws by rejection so output does not depend on
    /// the standard library's distribution implementations.
    class Rng {
      public:
        explicit Rng(std::uint64_t seed) : m_state(seed) {}

        auto next() -> std::uint64_t
        {
            std::uint64_t z = (m_state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31U);
        }

        auto below(std::uint64_t n) -> std::uint64_t
        {
            if (n <= 1) {
                return 0;
            }
            std::uint64_t const limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
            std::uint64_t v = 0;
            do {
                v = next();
            } while (v >= limit);
            return v % n;
        }

        auto range(std::uint64_t lo, std::uint64_t hi) -> std::uint64_t { return lo + below(hi - lo + 1); }
        auto chance(std::uint64_t percent) -> bool { return below(100) < percent; }

        template <typename C>
        auto pick(C const& c) -> decltype(auto)
        {
            return c[below(std::size(c))];
        }

        template <typename C>
        void shuffle(C& c)
        {
            for (std::size_t i = c.size(); i > 1; --i) {
                std::swap(c[i - 1], c[below(i)]);
            }
        }

      private:
        std::uint64_t m_state;
    };

    inline constexpr std::string_view library_calls[] = {
        "Math.max",          "Math.min",           "Math.abs",           "Math.sqrt",          "Math.pow",
        "Math.floor",        "Math.ceil",          "Math.round",         "Math.hypot",         "Math.signum",
        "Math.floorMod",     "Math.floorDiv",      "Math.log10",         "Math.exp",           "Math.cbrt",
        "Math.toRadians",    "Integer.parseInt",   "Integer.valueOf",    "Integer.bitCount",   "Integer.reverse",
        "Integer.highestOneBit", "Integer.toBinaryString", "Integer.compare", "Integer.signum", "Integer.rotateLeft",
        "Long.parseLong",    "Long.numberOfTrailingZeros", "Long.hashCode", "Long.max",        "Double.parseDouble",
        "Double.isNaN",      "Double.compare",     "Double.toString",    "Character.isDigit",  "Character.isLetter",
        "Character.toUpperCase", "Character.getNumericValue", "Character.isWhitespace", "String.valueOf", "String.join",
        "String.format",     "Arrays.sort",        "Arrays.fill",        "Arrays.copyOf",      "Arrays.binarySearch",
        "Arrays.equals",     "Arrays.hashCode",    "Arrays.stream",      "Collections.sort",   "Collections.reverse",
        "Collections.max",   "Collections.shuffle", "Collections.frequency", "Collections.swap", "Objects.equals",
        "Objects.hash",      "Objects.requireNonNull", "System.arraycopy", "System.nanoTime",  "System.identityHashCode",
        "Thread.sleep",      "Runtime.getRuntime", "BigInteger.valueOf", "BigDecimal.valueOf", "Boolean.parseBoolean",
        "Byte.toUnsignedInt", "Short.reverseBytes", "Float.floatToIntBits", "StrictMath.atan2", "StrictMath.tanh",
        "Optional.ofNullable", "List.of",          "Map.entry",          "Set.copyOf",         "Stream.iterate",
        "IntStream.range",   "Pattern.compile",    "Matcher.quoteReplacement", "LocalDate.now", "Duration.ofMillis",
        "Instant.now",       "UUID.randomUUID",    "Files.readAllLines", "Paths.get",          "Base64.getEncoder",
        "Locale.getDefault", "TimeUnit.SECONDS.sleep", "Executors.newFixedThreadPool", "CompletableFuture.supplyAsync",
        "ThreadLocalRandom.current", "Spliterators.emptySpliterator", "BitSet.valueOf", "Calendar.getInstance",
        "Currency.getInstance", "Charset.forName", "MessageDigest.getInstance", "Logger.getLogger",
        "Level.parse",       "Array.getLength",    "StringBuilder.class.getName",
    };

    inline constexpr std::string_view syllables[] = {
        "ka",  "vo",  "ri",  "mel", "tos", "an",  "qu",  "zer", "lib", "pon", "ish", "dra", "bu",  "fen", "gor", "hal",
        "jin", "lor", "mu",  "nex", "oth", "pra", "sul", "tiv", "urk", "wen", "xa",  "yol", "zim", "cre", "dov", "eth",
    };

    inline constexpr std::string_view comment_words[] = {
        "compute", "the", "result", "loop", "over", "values", "check", "bounds", "helper", "update", "state", "index",
        "temporary", "buffer", "total", "count", "edge", "case", "handle", "input", "return", "value", "fast", "path",
    };

    struct Piece {
        enum class Role { text, ident, number, string, character };
        Role role = Role::text;
        std::string text;    // literal source for text pieces
        std::size_t id = 0;  // identifier slot or literal slot
    };

    struct Stmt {
        std::vector<Piece> head;  // rendered before the block (or the whole simple statement)
        std::vector<Stmt> body;
        std::vector<Stmt> else_body;
        bool compound = false;
        bool has_else = false;

        [[nodiscard]] auto size() const -> std::size_t
        {
            std::size_t n = head.size();
            for (auto const& s : body) {
                n += s.size();
            }
            for (auto const& s : else_body) {
                n += s.size();
            }
            return n;
        }
    };

    struct Method {
        std::vector<Piece> signature;
        std::vector<Stmt> body;
    };

    struct Program {
        std::size_t class_ident = 0;
        std::vector<Method> methods;
        std::vector<std::string> names;  // identifier slot -> name
        std::set<std::size_t> interface_names;  // class and method names
        std::vector<std::string> literals;
        std::vector<Piece::Role> literal_roles;
        std::vector<std::pair<std::size_t, std::string>> comments;  // (statement ordinal, text)
    };

    class ProgramBuilder {
      public:
        explicit ProgramBuilder(Rng& rng) : m_rng(rng) {}

        auto build() -> Program
        {
            m_prog = Program{};
            m_prog.class_ident = new_ident();
            m_prog.interface_names.insert(m_prog.class_ident);
            for (std::size_t i = 0, n = m_rng.range(8, 14); i < n; ++i) {
                m_api.emplace_back(m_rng.pick(library_calls));
            }
            auto n_methods = m_rng.range(2, 4);
            for (std::size_t i = 0; i < n_methods; ++i) {
                m_methods.push_back(new_ident());
                m_prog.interface_names.insert(m_methods.back());
            }
            for (std::size_t i = 0; i < n_methods; ++i) {
                m_prog.methods.push_back(method(m_methods[i]));
            }
            return std::move(m_prog);
        }

      private:
        using P = std::vector<Piece>;

        auto new_ident() -> std::size_t
        {
            m_prog.names.push_back(fresh_name(m_rng));
            return m_prog.names.size() - 1;
        }

        static auto fresh_name(Rng& rng) -> std::string
        {
            std::string name;
            for (std::size_t i = 0, n = rng.range(2, 4); i < n; ++i) {
                name += rng.pick(syllables);
            }
            if (rng.chance(40)) {
                name += std::string(rng.pick(syllables));
                name[name.size() - 2] = static_cast<char>(name[name.size() - 2] - 'a' + 'A');
            }
            return name;
        }

        static auto t(std::string_view s) -> Piece { return {Piece::Role::text, std::string(s), 0}; }
        static auto id(std::size_t slot) -> Piece { return {Piece::Role::ident, {}, slot}; }

        auto literal(Piece::Role role) -> Piece
        {
            m_prog.literals.push_back(random_literal(m_rng, role));
            m_prog.literal_roles.push_back(role);
            return {role, {}, m_prog.literals.size() - 1};
        }

      public:
        static auto random_literal(Rng& rng, Piece::Role role) -> std::string
        {
            switch (role) {
            case Piece::Role::number:
                return rng.chance(20) ? std::to_string(rng.below(1000)) + "." + std::to_string(rng.below(100))
                                      : std::to_string(rng.below(10000));
            case Piece::Role::string: return "\"" + fresh_name(rng) + " " + fresh_name(rng) + "\"";
            case Piece::Role::character: return std::string("'") + static_cast<char>('a' + rng.below(26)) + "'";
            default: return {};
            }
        }

      private:
        auto var() -> Piece
        {
            if (m_vars.empty() || m_rng.chance(15)) {
                m_vars.push_back(new_ident());
            }
            return id(m_rng.pick(m_vars));
        }

        auto type() -> std::string_view
        {
            static constexpr std::array<std::string_view, 8> types = {"int",  "long",    "double", "String",
                                                                      "char", "boolean", "float",  "short"};
            return m_rng.pick(types);
        }

        void api_call(P& out, std::size_t depth)
        {
            std::string_view call = m_rng.pick(m_api);
            std::size_t start = 0;
            while (true) {
                auto dot = call.find('.', start);
                if (dot == std::string_view::npos) {
                    out.push_back(t(call.substr(start)));
                    break;
                }
                out.push_back(t(call.substr(start, dot - start)));
                out.push_back(t("."));
                start = dot + 1;
            }
            args(out, depth, m_rng.range(0, 2));
        }

        void args(P& out, std::size_t depth, std::size_t n)
        {
            out.push_back(t("("));
            for (std::size_t i = 0; i < n; ++i) {
                if (i > 0) {
                    out.push_back(t(","));
                }
                expr(out, depth + 1);
            }
            out.push_back(t(")"));
        }

        void operand(P& out, std::size_t depth)
        {
            auto r = m_rng.below(100);
            if (r < 34) {
                out.push_back(var());
            } else if (r < 52) {
                out.push_back(literal(Piece::Role::number));
            } else if (r < 56) {
                out.push_back(literal(m_rng.chance(70) ? Piece::Role::string : Piece::Role::character));
            } else if (r < 72 && depth < 2) {
                api_call(out, depth);
            } else if (r < 80 && depth < 2) {
                out.push_back(id(m_rng.pick(m_methods)));
                args(out, depth, m_rng.range(0, 2));
            } else if (r < 88 && depth < 2) {
                out.push_back(var());
                out.push_back(t("["));
                expr(out, depth + 1);
                out.push_back(t("]"));
            } else if (r < 93 && depth < 2) {
                out.push_back(t("("));
                expr(out, depth + 1);
                out.push_back(t(")"));
            } else if (r < 96) {
                out.push_back(t(m_rng.chance(50) ? "-" : "!"));
                out.push_back(var());
            } else {
                out.push_back(var());
                out.push_back(t("."));
                out.push_back(t(m_rng.chance(50) ? "length" : "size"));
                if (m_rng.chance(50)) {
                    out.push_back(t("("));
                    out.push_back(t(")"));
                }
            }
        }

        void expr(P& out, std::size_t depth)
        {
            static constexpr std::array<std::string_view, 13> ops = {"+",  "-",  "*",  "/", "%", "<<", ">>",
                                                                     ">>>", "&", "|",  "^", "&&", "||"};
            operand(out, depth);
            auto extra = depth >= 2 ? 0 : m_rng.below(depth == 0 ? 3 : 2);
            for (std::size_t i = 0; i < extra; ++i) {
                out.push_back(t(m_rng.pick(ops)));
                operand(out, depth);
            }
            if (depth == 0 && m_rng.chance(12)) {
                out.push_back(t("?"));
                operand(out, depth + 1);
                out.push_back(t(":"));
                operand(out, depth + 1);
            }
        }

        void condition(P& out)
        {
            static constexpr std::array<std::string_view, 6> rel = {"<", "<=", ">", ">=", "==", "!="};
            expr(out, 1);
            out.push_back(t(m_rng.pick(rel)));
            expr(out, 1);
        }

        auto block(std::size_t depth, std::size_t lo, std::size_t hi) -> std::vector<Stmt>
        {
            std::vector<Stmt> out;
            for (std::size_t i = 0, n = m_rng.range(lo, hi); i < n; ++i) {
                out.push_back(statement(depth));
            }
            return out;
        }

        auto statement(std::size_t depth) -> Stmt
        {
            Stmt s;
            auto& h = s.head;
            auto r = m_rng.below(100);
            if (depth >= 2) {
                r = r % 55;
            }
            if (r < 16) {
                if (m_rng.chance(30)) {
                    h.push_back(t("final"));
                }
                h.push_back(t(type()));
                if (m_rng.chance(15)) {
                    h.push_back(t("["));
                    h.push_back(t("]"));
                }
                m_vars.push_back(new_ident());
                h.push_back(id(m_vars.back()));
                h.push_back(t("="));
                expr(h, 0);
                h.push_back(t(";"));
            } else if (r < 30) {
                static constexpr std::array<std::string_view, 7> assign = {"=", "+=", "-=", "*=", "|=", "^=", "<<="};
                h.push_back(var());
                h.push_back(t(m_rng.pick(assign)));
                expr(h, 0);
                h.push_back(t(";"));
            } else if (r < 42) {
                api_call(h, 1);
                h.push_back(t(";"));
            } else if (r < 48) {
                h.push_back(var());
                h.push_back(t(m_rng.chance(50) ? "++" : "--"));
                h.push_back(t(";"));
            } else if (r < 55) {
                h.push_back(id(m_rng.pick(m_methods)));
                args(h, 1, m_rng.range(0, 3));
                h.push_back(t(";"));
            } else if (r < 70) {
                s.compound = true;
                h.push_back(t("if"));
                h.push_back(t("("));
                condition(h);
                h.push_back(t(")"));
                s.body = block(depth + 1, 1, 2);
                if (m_rng.chance(40)) {
                    s.has_else = true;
                    s.else_body = block(depth + 1, 1, 2);
                }
            } else if (r < 82) {
                s.compound = true;
                h.push_back(t("for"));
                h.push_back(t("("));
                if (m_rng.chance(60)) {
                    h.push_back(t(m_rng.chance(75) ? "int" : "long"));
                }
                auto loop_var = new_ident();
                h.push_back(id(loop_var));
                h.push_back(t("="));
                expr(h, 2);
                h.push_back(t(";"));
                h.push_back(id(loop_var));
                static constexpr std::array<std::string_view, 4> rel = {"<", "<=", ">", "!="};
                h.push_back(t(m_rng.pick(rel)));
                expr(h, 1);
                h.push_back(t(";"));
                h.push_back(id(loop_var));
                static constexpr std::array<std::string_view, 4> step = {"++", "--", "+=", "-="};
                auto st = m_rng.pick(step);
                h.push_back(t(st));
                if (st.size() == 2 && st[1] == '=') {
                    expr(h, 2);
                }
                h.push_back(t(")"));
                m_vars.push_back(loop_var);
                s.body = block(depth + 1, 1, 2);
            } else if (r < 90) {
                s.compound = true;
                if (m_rng.chance(30)) {
                    h.push_back(t("do"));
                    s.body = block(depth + 1, 1, 2);
                    // The loop condition is carried as a one-statement tail.
                    Stmt tail;
                    tail.head = {t("while"), t("(")};
                    condition(tail.head);
                    tail.head.push_back(t(")"));
                    tail.head.push_back(t(";"));
                    s.else_body.push_back(std::move(tail));
                } else {
                    h.push_back(t("while"));
                    h.push_back(t("("));
                    condition(h);
                    h.push_back(t(")"));
                    s.body = block(depth + 1, 1, 2);
                }
            } else if (r < 95) {
                s.compound = true;
                h.push_back(t("try"));
                s.body = block(depth + 1, 1, 2);
                s.has_else = true;
                s.else_body = block(depth + 1, 1, 2);
            } else {
                h.push_back(t("System"));
                h.push_back(t("."));
                h.push_back(t(m_rng.chance(50) ? "out" : "err"));
                h.push_back(t("."));
                h.push_back(t(m_rng.chance(50) ? "println" : "print"));
                h.push_back(t("("));
                expr(h, 1);
                h.push_back(t(")"));
                h.push_back(t(";"));
            }
            return s;
        }

        auto method(std::size_t name) -> Method
        {
            static constexpr std::array<std::string_view, 7> mods = {"public static", "private static", "static",
                                                                     "public",        "private",        "protected",
                                                                     "public final"};
            m_vars.clear();
            Method m;
            std::string_view mod = m_rng.pick(mods);
            for (std::size_t start = 0;;) {
                auto sp = mod.find(' ', start);
                m.signature.push_back(t(mod.substr(start, sp == std::string_view::npos ? sp : sp - start)));
                if (sp == std::string_view::npos) {
                    break;
                }
                start = sp + 1;
            }
            bool returns = m_rng.chance(70);
            m.signature.push_back(t(returns ? type() : "void"));
            m.signature.push_back(id(name));
            m.signature.push_back(t("("));
            for (std::size_t i = 0, n = m_rng.range(0, 3); i < n; ++i) {
                if (i > 0) {
                    m.signature.push_back(t(","));
                }
                m.signature.push_back(t(type()));
                if (m_rng.chance(20)) {
                    m.signature.push_back(t("["));
                    m.signature.push_back(t("]"));
                }
                m_vars.push_back(new_ident());
                m.signature.push_back(id(m_vars.back()));
            }
            m.signature.push_back(t(")"));
            m.body = block(0, 2, 5);
            if (returns) {
                Stmt ret;
                ret.head.push_back(t("return"));
                expr(ret.head, 0);
                ret.head.push_back(t(";"));
                m.body.push_back(std::move(ret));
            }
            return m;
        }

        Rng& m_rng;
        Program m_prog;
        std::vector<std::string> m_api;
        std::vector<std::size_t> m_methods;
        std::vector<std::size_t> m_vars;
    };

    class Renderer {
      public:
        explicit Renderer(Program const& prog) : m_prog(prog) {}

        auto render(std::string_view package_suffix) -> std::string
        {
            m_out.clear();
            m_ordinal = 0;
            m_out += "package gen.";
            m_out += package_suffix;
            m_out += ";\n\nimport java.util.*;\nimport java.math.BigInteger;\n\n";
            m_out += "public class " + m_prog.names[m_prog.class_ident] + " {\n";
            for (auto const& m : m_prog.methods) {
                m_out += "\n    ";
                pieces(m.signature);
                m_out += " {\n";
                statements(m.body, 2);
                m_out += "    }\n";
            }
            m_out += "}\n";
            return m_out;
        }

      private:
        void pieces(std::vector<Piece> const& ps)
        {
            bool first = true;
            for (auto const& p : ps) {
                bool tight = p.text == "." || p.text == "(" || p.text == ")" || p.text == "[" || p.text == "]"
                             || p.text == ";" || p.text == "," || p.text == "++" || p.text == "--";
                if (!first && !tight && !m_out.ends_with("(") && !m_out.ends_with(".") && !m_out.ends_with("[")
                    && !m_out.ends_with(" ")) {
                    m_out += ' ';
                }
                switch (p.role) {
                case Piece::Role::text: m_out += p.text; break;
                case Piece::Role::ident: m_out += m_prog.names[p.id]; break;
                default: m_out += m_prog.literals[p.id]; break;
                }
                if (p.text == ",") {
                    m_out += ' ';
                }
                first = false;
            }
        }

        void indent(std::size_t level) { m_out.append(level * 4, ' '); }

        void emit_comments(std::size_t level)
        {
            for (auto const& [ordinal, text] : m_prog.comments) {
                if (ordinal == m_ordinal) {
                    indent(level);
                    m_out += text;
                    m_out += '\n';
                }
            }
            ++m_ordinal;
        }

        void statements(std::vector<Stmt> const& body, std::size_t level)
        {
            for (auto const& s : body) {
                emit_comments(level);
                indent(level);
                pieces(s.head);
                if (!s.compound) {
                    m_out += '\n';
                    continue;
                }
                m_out += " {\n";
                statements(s.body, level + 1);
                indent(level);
                m_out += "}";
                if (!s.head.empty() && s.head.front().text == "do") {
                    m_out += " ";
                    pieces(s.else_body.front().head);
                    m_out += '\n';
                } else if (!s.head.empty() && s.head.front().text == "try") {
                    m_out += " catch (Exception ex) {\n";
                    statements(s.else_body, level + 1);
                    indent(level);
                    m_out += "}\n";
                } else if (s.has_else) {
                    m_out += " else {\n";
                    statements(s.else_body, level + 1);
                    indent(level);
                    m_out += "}\n";
                } else {
                    m_out += '\n';
                }
            }
        }

        Program const& m_prog;
        std::string m_out;
        std::size_t m_ordinal = 0;
    };

    inline auto count_statements(std::vector<Stmt> const& body) -> std::size_t
    {
        std::size_t n = 0;
        for (auto const& s : body) {
            n += 1 + count_statements(s.body);
            bool const is_do = !s.head.empty() && s.head.front().text == "do";
            if (!is_do) {
                n += count_statements(s.else_body);
            }
        }
        return n;
    }

    inline void apply_transform(Program& prog, Transform tr, Rng& rng)
    {
        switch (tr) {
        case Transform::identifier_rename: {
            // Variables and parameters only; class and method names are
            // usually prescribed by the assignment.
            std::set<std::string> used(prog.names.begin(), prog.names.end());
            for (std::size_t slot = 0; slot < prog.names.size(); ++slot) {
                if (prog.interface_names.contains(slot)) {
                    continue;
                }
                auto& name = prog.names[slot];
                std::string fresh;
                do {
                    fresh = "";
                    for (std::size_t i = 0, n = rng.range(2, 4); i < n; ++i) {
                        fresh += rng.pick(syllables);
                    }
                    fresh += std::to_string(rng.below(100));
                } while (used.contains(fresh));
                used.insert(fresh);
                name = fresh;
            }
            break;
        }
        case Transform::literal_change:
            for (std::size_t i = 0; i < prog.literals.size(); ++i) {
                prog.literals[i] = ProgramBuilder::random_literal(rng, prog.literal_roles[i]);
            }
            break;
        case Transform::comment_insertion: {
            std::size_t total = 0;
            for (auto const& m : prog.methods) {
                total += count_statements(m.body);
            }
            for (std::size_t i = 0, n = rng.range(3, 8); i < n; ++i) {
                std::string text = rng.chance(50) ? "// " : "/* ";
                for (std::size_t w = 0, nw = rng.range(2, 6); w < nw; ++w) {
                    text += std::string(rng.pick(comment_words)) + (w + 1 < nw ? " " : "");
                }
                if (text.starts_with("/*")) {
                    text += " */";
                }
                prog.comments.emplace_back(rng.below(std::max<std::size_t>(total, 1)), std::move(text));
            }
            break;
        }
        case Transform::statement_reorder: {
            // Block-level only: methods are permuted and, inside each method,
            // one pair of adjacent large statements may swap.
            if (prog.methods.size() > 1) {
                std::vector<std::size_t> order(prog.methods.size());
                for (std::size_t i = 0; i < order.size(); ++i) {
                    order[i] = i;
                }
                rng.shuffle(order);
                if (std::is_sorted(order.begin(), order.end())) {
                    std::rotate(order.begin(), order.begin() + 1, order.end());
                }
                std::vector<Method> permuted;
                for (auto i : order) {
                    permuted.push_back(std::move(prog.methods[i]));
                }
                prog.methods = std::move(permuted);
            }
            for (auto& m : prog.methods) {
                for (std::size_t i = 0; i + 1 < m.body.size(); ++i) {
                    if (m.body[i].size() >= 12 && m.body[i + 1].size() >= 12 && m.body[i + 1].head.front().text != "return") {
                        std::swap(m.body[i], m.body[i + 1]);
                        break;
                    }
                }
            }
            break;
        }
        }
    }

}  // namespace gen

/// Writes the corpus plus `qrels.txt` into `out_dir` (created if needed).
inline auto generate(PlantSpec const& spec, std::filesystem::path const& out_dir) -> Manifest
{
    spec.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }

    gen::Rng rng(spec.seed);
    auto width = std::max<std::size_t>(4, std::to_string(spec.n_docs).size());
    auto file_name = [&](std::size_t i) {
        auto digits = std::to_string(i);
        return "src_" + std::string(width - digits.size(), '0') + digits + ".java";
    };

    std::vector<std::size_t> slots(spec.n_docs);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        slots[i] = i;
    }
    rng.shuffle(slots);

    Manifest manifest;
    for (std::size_t i = 0; i < spec.n_docs; ++i) {
        manifest.doc_paths.push_back(file_name(i));
    }
    std::vector<std::string> texts(spec.n_docs);
    // Slots [0, 2P) hold planted pairs (original, copy); the rest are singles.
    for (std::size_t k = 0; k < spec.n_docs;) {
        gen::ProgramBuilder builder(rng);
        auto prog = builder.build();
        auto const slot = slots[k];
        texts[slot] = gen::Renderer(prog).render("p" + std::to_string(slot));
        if (k < 2 * spec.n_plag_pairs) {
            auto copy = prog;
            for (auto tr : spec.transforms) {
                gen::apply_transform(copy, tr, rng);
            }
            auto const copy_slot = slots[k + 1];
            texts[copy_slot] = gen::Renderer(copy).render("p" + std::to_string(copy_slot));
            manifest.planted.emplace_back(file_name(slot), file_name(copy_slot));
            k += 2;
        } else {
            k += 1;
        }
    }

    for (std::size_t i = 0; i < spec.n_docs; ++i) {
        std::ofstream out(out_dir / manifest.doc_paths[i], std::ios::binary | std::ios::trunc);
        out << texts[i];
        if (!out.flush()) {
            throw DataError("cannot write " + (out_dir / manifest.doc_paths[i]).string());
        }
    }
    manifest.qrels_path = (out_dir / "qrels.txt").string();
    std::ofstream qrels(manifest.qrels_path, std::ios::binary | std::ios::trunc);
    qrels << "# planted pairs: original copy\n";
    for (auto const& [a, b] : manifest.planted) {
        qrels << a << ' ' << b << '\n';
    }
    if (!qrels.flush()) {
        throw DataError("cannot write " + manifest.qrels_path);
    }
    return manifest;
}

}  // namespace codesieve
