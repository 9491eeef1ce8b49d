#pragma once

// Adapter that delegates pair verification to an external tool (for
// instance a JPlag wrapper script). The command is run through /bin/sh once
// per pair; a similarity percentage is pulled from its stdout.

#include <cstdio>
#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include <sys/wait.h>

#include "codesieve/types.hpp"

namespace codesieve {

struct ExternalVerifier {
    /// Must contain the placeholders {a} and {b}.
    std::string command_template;
    /// First capture group is read as a percentage in [0, 100].
    std::string pattern = R"(([0-9]+(?:\.[0-9]+)?))";
};

struct ExternalOutcome {
    DocPair pair{};
    std::optional<double> similarity;
    std::string error;

    [[nodiscard]] auto verified() const noexcept -> bool { return similarity.has_value(); }
};

inline auto shell_quote(std::string_view s) -> std::string
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += '\'';
    return out;
}

inline auto expand_command(std::string const& tmpl, std::string_view path_a, std::string_view path_b) -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < tmpl.size();) {
        if (tmpl.compare(i, 3, "{a}") == 0) {
            out += shell_quote(path_a);
            i += 3;
        } else if (tmpl.compare(i, 3, "{b}") == 0) {
            out += shell_quote(path_b);
            i += 3;
        } else {
            out += tmpl[i++];
        }
    }
    return out;
}

namespace detail {
    struct CommandOutput {
        int exit_status = -1;
        std::string stdout_text;
    };

    inline auto run_command(std::string const& cmd) -> CommandOutput
    {
        CommandOutput out;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (pipe == nullptr) {
            return out;
        }
        char buf[4096];
        std::size_t got = 0;
        while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
            out.stdout_text.append(buf, got);
        }
        int status = ::pclose(pipe);
        out.exit_status = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
        return out;
    }
}  // namespace detail

/// Failures are recorded per pair; the run always covers every pair.
inline auto external_verify(std::vector<DocPair> const& pairs, std::function<std::string(DocId)> const& path_of,
                            ExternalVerifier const& verifier) -> std::vector<ExternalOutcome>
{
    if (verifier.command_template.find("{a}") == std::string::npos
        || verifier.command_template.find("{b}") == std::string::npos) {
        throw UsageError("external verifier command must contain {a} and {b}");
    }
    std::regex re;
    try {
        re = std::regex(verifier.pattern);
    } catch (std::regex_error const& e) {
        throw UsageError("bad verifier output pattern: " + std::string(e.what()));
    }
    if (re.mark_count() < 1) {
        throw UsageError("verifier output pattern needs a capture group");
    }

    std::vector<ExternalOutcome> out;
    out.reserve(pairs.size());
    for (auto const& pair : pairs) {
        ExternalOutcome o;
        o.pair = pair;
        auto result = detail::run_command(expand_command(verifier.command_template, path_of(pair.low), path_of(pair.high)));
        std::smatch m;
        if (result.exit_status != 0) {
            o.error = "command exited with status " + std::to_string(result.exit_status);
        } else if (!std::regex_search(result.stdout_text, m, re)) {
            o.error = "no similarity found in output";
        } else {
            try {
                double pct = std::stod(m[1].str());
                if (pct < 0.0 || pct > 100.0) {
                    o.error = "similarity out of range: " + m[1].str();
                } else {
                    o.similarity = pct / 100.0;
                }
            } catch (std::exception const&) {
                o.error = "unparseable similarity: " + m[1].str();
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace codesieve
