#include "fairalloc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "fairalloc/analysis.hpp"
#include "fairalloc/economics.hpp"
#include "fairalloc/model.hpp"
#include "fairalloc/scenario_io.hpp"
#include "fairalloc/solver.hpp"

namespace fairalloc {
namespace {

constexpr double kGradcheckStep = 1e-5;

const char* subcommand_name(Subcommand sub) {
    switch (sub) {
        case Subcommand::evaluate: return "evaluate";
        case Subcommand::optimize: return "optimize";
        case Subcommand::welfare_loss: return "welfare-loss";
        case Subcommand::frontier: return "frontier";
        case Subcommand::gradcheck: return "gradcheck";
        case Subcommand::oracle: return "oracle";
    }
    return "report";
}

// Applies --d/--a on top of the baseline profile. A single value broadcasts
// to all groups; otherwise the list must match the group count.
BiasProfile profile_from_overrides(const Scenario& scenario, const CliInvocation& inv) {
    BiasProfile profile = baseline_profile(scenario);
    const std::size_t n = scenario.groups.size();
    auto apply = [n](std::vector<double>& target, const std::vector<double>& values,
                     const char* flag) {
        if (values.empty()) return;
        if (values.size() == 1) {
            target.assign(n, values[0]);
        } else if (values.size() == n) {
            target = values;
        } else {
            throw ValidationError(flag, "expected 1 value or one value per group (got " +
                                            std::to_string(values.size()) + ")");
        }
    };
    apply(profile.d, inv.d_override, "--d");
    apply(profile.a, inv.a_override, "--a");
    return profile;
}

// Default gradcheck point: baselines pulled far enough inside the box for
// the central differences to stay in-domain.
BiasProfile gradcheck_profile(const Scenario& scenario, const CliInvocation& inv) {
    BiasProfile profile = profile_from_overrides(scenario, inv);
    if (inv.d_override.empty() && inv.a_override.empty()) {
        const double lo = kProfileFloor + 2.0 * kGradcheckStep;
        const double hi = 1.0 - 2.0 * kGradcheckStep;
        for (double& v : profile.d) v = std::clamp(v, lo, hi);
        for (double& v : profile.a) v = std::clamp(v, lo, hi);
    }
    return profile;
}

void write_payload(const CliInvocation& inv, const std::string& payload) {
    if (inv.out_dir.empty()) {
        std::cout << payload;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path dir(inv.out_dir);
    fs::create_directories(dir);
    const std::string ext = inv.format == OutputFormat::json ? ".json" : ".csv";
    const fs::path file = dir / (std::string(subcommand_name(inv.subcommand)) + ext);
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << payload;
    if (!out) throw std::runtime_error("cannot write " + file.string());
}

} // namespace

int run(const CliInvocation& inv) {
    try {
        Scenario scenario = load_scenario(inv.scenario_path);
        if (inv.seed) scenario.solver.seed = *inv.seed;

        std::string payload;
        bool converged = true;
        const bool json = inv.format == OutputFormat::json;

        switch (inv.subcommand) {
            case Subcommand::evaluate: {
                const BiasProfile profile = profile_from_overrides(scenario, inv);
                const EvaluationReport report = evaluate(scenario, profile);
                payload = json ? to_json(report, scenario) : to_csv(report, scenario);
                break;
            }
            case Subcommand::optimize: {
                const SolutionReport report = optimize(scenario);
                converged = report.converged;
                payload = json ? to_json(report, scenario) : to_csv(report, scenario);
                break;
            }
            case Subcommand::welfare_loss: {
                const WelfareLossReport report = welfare_loss(scenario);
                payload = json ? to_json(report, scenario) : to_csv(report, scenario);
                break;
            }
            case Subcommand::frontier: {
                std::vector<double> caps = inv.caps;
                if (caps.empty())
                    caps.push_back(std::numeric_limits<double>::infinity());
                const std::vector<FrontierPoint> points = frontier(scenario, caps);
                for (const FrontierPoint& p : points) converged = converged && p.converged;
                payload = json ? to_json(points) : to_csv(points);
                break;
            }
            case Subcommand::gradcheck: {
                const BiasProfile profile = gradcheck_profile(scenario, inv);
                const double err = finite_difference_check(scenario, profile, kGradcheckStep);
                if (json) {
                    payload = "{\n  \"step\": " + format_number(kGradcheckStep) +
                              ",\n  \"max_rel_error\": " + format_number(err) + "\n}\n";
                } else {
                    payload = "step,max_rel_error\n" + format_number(kGradcheckStep) + "," +
                              format_number(err) + "\n";
                }
                break;
            }
            case Subcommand::oracle: {
                const OracleResult result = grid_oracle(scenario, inv.grid_step.value_or(0.05));
                payload = json ? to_json(result, scenario) : to_csv(result, scenario);
                break;
            }
        }

        write_payload(inv, payload);
        return converged ? kExitOk : kExitNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

} // namespace fairalloc
