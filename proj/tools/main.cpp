#include <CLI11.hpp>

#include "fairalloc/cli.hpp"

namespace {

struct CommonFlags {
    std::string scenario;
    std::string out_dir;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--scenario", flags.scenario, "Path to the scenario JSON document")
        ->required();
    cmd->add_option("--out", flags.out_dir,
                    "Directory for the report file (default: print to stdout)");
    cmd->add_option("--format", flags.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

void fill_common(fairalloc::CliInvocation& inv, const CommonFlags& flags) {
    inv.scenario_path = flags.scenario;
    inv.out_dir = flags.out_dir;
    inv.format = flags.format == "csv" ? fairalloc::OutputFormat::csv
                                       : fairalloc::OutputFormat::json;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Welfare analysis of biased emergency-response resource allocation"};
    app.require_subcommand(1);

    CommonFlags evaluate_flags, optimize_flags, loss_flags, frontier_flags, gradcheck_flags,
        oracle_flags;
    std::vector<double> evaluate_d, evaluate_a, gradcheck_d, gradcheck_a, caps;
    std::uint64_t seed = 0;
    double grid_step = 0.05;

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Evaluate outcomes, welfare, and costs at a profile");
    add_common(evaluate, evaluate_flags);
    evaluate->add_option("--d", evaluate_d,
                         "Data-quality levels (one value broadcasts to all groups)")
        ->delimiter(',');
    evaluate->add_option("--a", evaluate_a,
                         "Fairness levels (one value broadcasts to all groups)")
        ->delimiter(',');

    CLI::App* optimize =
        app.add_subcommand("optimize", "Maximize the objective over (D, A)");
    add_common(optimize, optimize_flags);
    CLI::Option* optimize_seed =
        optimize->add_option("--seed", seed, "Random-start seed override");

    CLI::App* loss = app.add_subcommand(
        "welfare-loss", "Welfare gap between the baseline and unbiased profiles");
    add_common(loss, loss_flags);

    CLI::App* frontier_cmd = app.add_subcommand(
        "frontier", "Efficiency-equity frontier over health-disparity caps");
    add_common(frontier_cmd, frontier_flags);
    frontier_cmd
        ->add_option("--caps", caps,
                     "Ascending disparity caps; the token inf means no cap (default: inf)")
        ->delimiter(',');
    CLI::Option* frontier_seed =
        frontier_cmd->add_option("--seed", seed, "Random-start seed override");

    CLI::App* gradcheck = app.add_subcommand(
        "gradcheck", "Compare the analytic gradient against central differences");
    add_common(gradcheck, gradcheck_flags);
    gradcheck
        ->add_option("--d", gradcheck_d,
                     "Data-quality levels (one value broadcasts to all groups)")
        ->delimiter(',');
    gradcheck
        ->add_option("--a", gradcheck_a,
                     "Fairness levels (one value broadcasts to all groups)")
        ->delimiter(',');

    CLI::App* oracle =
        app.add_subcommand("oracle", "Exhaustive grid search for validation");
    add_common(oracle, oracle_flags);
    CLI::Option* oracle_step =
        oracle->add_option("--grid-step", grid_step, "Lattice spacing in (0, 1)")
            ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fairalloc::kExitBadInput;
    }

    fairalloc::CliInvocation inv;
    if (app.got_subcommand(evaluate)) {
        inv.subcommand = fairalloc::Subcommand::evaluate;
        fill_common(inv, evaluate_flags);
        inv.d_override = evaluate_d;
        inv.a_override = evaluate_a;
    } else if (app.got_subcommand(optimize)) {
        inv.subcommand = fairalloc::Subcommand::optimize;
        fill_common(inv, optimize_flags);
        if (optimize_seed->count() > 0) inv.seed = seed;
    } else if (app.got_subcommand(loss)) {
        inv.subcommand = fairalloc::Subcommand::welfare_loss;
        fill_common(inv, loss_flags);
    } else if (app.got_subcommand(frontier_cmd)) {
        inv.subcommand = fairalloc::Subcommand::frontier;
        fill_common(inv, frontier_flags);
        inv.caps = caps;
        if (frontier_seed->count() > 0) inv.seed = seed;
    } else if (app.got_subcommand(gradcheck)) {
        inv.subcommand = fairalloc::Subcommand::gradcheck;
        fill_common(inv, gradcheck_flags);
        inv.d_override = gradcheck_d;
        inv.a_override = gradcheck_a;
    } else {
        inv.subcommand = fairalloc::Subcommand::oracle;
        fill_common(inv, oracle_flags);
        if (oracle_step->count() > 0) inv.grid_step = grid_step;
    }

    return fairalloc::run(inv);
}
