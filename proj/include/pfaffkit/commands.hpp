#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pfk {

inline constexpr const char* kToolVersion = "pfaffkit 1.0.0";

// One subcommand invocation, flags already parsed. Session-based commands
// read `session_text` (the contents of --input); `input_path` is only echoed.
struct CommandRequest {
    std::string command;
    std::optional<std::string> input_path;
    std::string session_text;

    std::string poly;                     // check-invariant, extactic sieve
    std::string foliation;                // extactic, first-integral, census, degree, ...
    std::string form;                     // check-invariant, log-certificate, degree, verify
    std::string system;                   // extactic, first-integral
    std::string candidate;                // verify: "f" or "f/g" with declared polys
    std::vector<std::string> invariants;  // log-certificate

    std::optional<std::uint32_t> nu;      // census
    std::optional<std::uint64_t> prime;   // census over a rational session
    std::optional<std::uint64_t> cap;     // census scan cap
    std::uint64_t seed = 0;

    std::string formula;                  // bounds
    std::optional<int> n, r, d;
    std::optional<int> nu_bound;          // bounds --nu (census --nu is separate)
    std::vector<int> split;
    std::optional<int> h1cl, h0cl, picard;
    std::optional<long long> count;       // bounds verdict input
};

struct Report {
    std::string status;  // ok | refused | error
    std::string text;    // canonical JSON document, newline-terminated
    int exit_code = 0;   // 0 ok, 2 refused, 1 error
};

// Routes to the module matching req.command, catching every failure into an
// error report with a machine-readable code. Output is canonical: object keys
// sorted, all degrees, dimensions and counts as decimal strings, polynomials
// in the session's variable names under the global term order. Identical
// requests produce byte-identical reports.
Report run_command(const CommandRequest& req);

// Canonical error envelope for failures outside run_command (unreadable
// input files and the like).
Report error_report(const CommandRequest& req, const std::string& code,
                    const std::string& message);

}  // namespace pfk
