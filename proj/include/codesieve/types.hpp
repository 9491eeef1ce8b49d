#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace codesieve {

/// Dense document identifier. Assigned by lexicographic rank of the
/// file's path relative to the corpus root.
enum class DocId : std::uint32_t {};

constexpr auto to_underlying(DocId id) noexcept -> std::uint32_t
{
    return static_cast<std::uint32_t>(id);
}

inline auto to_string(DocId id) -> std::string { return std::to_string(to_underlying(id)); }

/// Unordered document pair, stored with low < high.
struct DocPair {
    DocId low{};
    DocId high{};

    static auto make(DocId a, DocId b) -> DocPair
    {
        if (a == b) {
            throw std::invalid_argument("self-pair for document " + to_string(a));
        }
        return a < b ? DocPair{a, b} : DocPair{b, a};
    }

    auto operator<=>(DocPair const&) const = default;
};

using PairSet = std::set<DocPair>;

// Exit-code carrying error families used across the library and the CLI.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual auto exit_code() const noexcept -> int { return 2; }
};

struct UsageError : Error {
    using Error::Error;
    [[nodiscard]] auto exit_code() const noexcept -> int override { return 1; }
};

struct DataError : Error {
    using Error::Error;
};

struct ExternalToolError : Error {
    using Error::Error;
    [[nodiscard]] auto exit_code() const noexcept -> int override { return 3; }
};

}  // namespace codesieve

template <>
struct std::hash<codesieve::DocPair> {
    auto operator()(codesieve::DocPair const& p) const noexcept -> std::size_t
    {
        return (std::size_t{to_underlying(p.low)} << 32U) ^ to_underlying(p.high);
    }
};
