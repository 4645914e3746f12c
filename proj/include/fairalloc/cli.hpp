#ifndef FAIRALLOC_CLI_HPP
#define FAIRALLOC_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairalloc {

enum class Subcommand { evaluate, optimize, welfare_loss, frontier, gradcheck, oracle };
enum class OutputFormat { json, csv };

struct CliInvocation {
    Subcommand subcommand = Subcommand::evaluate;
    std::string scenario_path;
    std::string out_dir;                    ///< empty: report goes to stdout
    OutputFormat format = OutputFormat::json;
    std::optional<std::uint64_t> seed;      ///< overrides scenario solver.seed
    std::optional<double> grid_step;        ///< oracle only
    std::vector<double> caps;               ///< frontier only; +inf = no cap
    std::vector<double> d_override;         ///< evaluate/gradcheck; 1 value broadcasts
    std::vector<double> a_override;
};

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;      ///< parse/validation errors
inline constexpr int kExitNotConverged = 2;  ///< solver finished without converging

/// Executes one invocation: loads the scenario, runs the subcommand, and
/// writes the report to <out_dir>/<subcommand>.<format> (or stdout when
/// out_dir is empty). Errors are reported on stderr.
int run(const CliInvocation& invocation);

} // namespace fairalloc

#endif // FAIRALLOC_CLI_HPP
