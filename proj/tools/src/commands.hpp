#ifndef VCOARSE_TOOLS_COMMANDS_HPP
#define VCOARSE_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <vcoarse/io.hpp>

namespace vcoarse::cli
{

// Parsed command line. Explicit flags override the matching config fields.
struct Options {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::string format = "json";
    std::optional<long> depth;
    std::optional<std::uint64_t> seed;
    std::optional<long> p;
    std::optional<std::size_t> rank;
    std::optional<std::vector<std::size_t>> select;
    std::optional<std::string> char_case;
    std::optional<std::string> formula;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> budget;
};

enum ExitCode { kExitOk = 0, kExitFailed = 1, kExitError = 2 };

struct Outcome {
    Json report;
    int exit_code = kExitOk;
};

const std::vector<std::string> &command_names();

// Runs one subcommand. Library errors propagate; a failed verification is reported with
// status FAIL and kExitFailed.
Outcome run(const Options &options);

// Hex SHA-256 of the text.
std::string sha256_hex(const std::string &text);

// Full entry point: flag parsing, report writing, error reporting on stderr.
int main_entry(int argc, char **argv);

} // namespace vcoarse::cli

#endif
