#include "fairalloc/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "eval_core.hpp"
#include "fairalloc/model.hpp"

namespace fairalloc {

WelfareLossReport welfare_loss(const Scenario& scenario) {
    const detail::EvalContext ctx(scenario);
    const std::size_t n = scenario.groups.size();
    const BiasProfile biased = baseline_profile(scenario);
    const BiasProfile unbiased = unbiased_profile(scenario);

    std::vector<GroupOutcome> rows_biased(n);
    std::vector<GroupOutcome> rows_unbiased(n);

    WelfareLossReport report;
    report.w_biased = ctx.welfare(biased, rows_biased.data());
    report.w_unbiased = ctx.welfare(unbiased, rows_unbiased.data());
    report.delta_w = report.w_unbiased - report.w_biased;

    const auto cost_biased = ctx.costs(biased);
    const auto cost_unbiased = ctx.costs(unbiased);
    report.delta_cost_total =
        (cost_biased.resource + cost_biased.response + cost_biased.health) -
        (cost_unbiased.resource + cost_unbiased.response + cost_unbiased.health);

    report.per_group.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        GroupDelta& delta = report.per_group[i];
        delta.delta_ra = ctx.ra_star()[i] - rows_biased[i].ra;
        delta.delta_rt = rows_biased[i].rt - scenario.groups[i].rt_star;
        delta.delta_h = rows_unbiased[i].health - rows_biased[i].health;
        delta.delta_u = rows_unbiased[i].utility - rows_biased[i].utility;
    }
    return report;
}

std::vector<FrontierPoint> frontier(const Scenario& scenario,
                                    const std::vector<double>& caps) {
    for (std::size_t k = 0; k < caps.size(); ++k) {
        if (std::isnan(caps[k]) || caps[k] < 0.0)
            throw std::invalid_argument("frontier: caps must be >= 0");
        if (k > 0 && caps[k] < caps[k - 1])
            throw std::invalid_argument("frontier: caps must be sorted ascending");
    }

    std::vector<FrontierPoint> points;
    points.reserve(caps.size());
    for (double cap : caps) {
        const SolutionReport run = optimize_with_fairness(scenario, cap);
        FrontierPoint point;
        point.disparity_cap = cap;
        point.objective = run.best_objective;
        double h_min = 0.0;
        double h_max = 0.0;
        for (std::size_t i = 0; i < run.evaluation.per_group.size(); ++i) {
            const double h = run.evaluation.per_group[i].health;
            if (i == 0 || h < h_min) h_min = h;
            if (i == 0 || h > h_max) h_max = h;
        }
        point.realized_disparity = h_max - h_min;
        point.converged = run.converged;
        points.push_back(point);
    }
    return points;
}

std::vector<GroupElasticity> elasticities(const Scenario& scenario,
                                          const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);

    const double welfare = ctx.welfare(profile);
    if (std::abs(welfare) < 1e-12)
        throw std::domain_error("elasticities: welfare is below 1e-12 in magnitude");

    detail::EvalContext::Gradient g;
    ctx.gradient(profile, g);

    std::vector<GroupElasticity> result(scenario.groups.size());
    for (std::size_t i = 0; i < result.size(); ++i) {
        result[i].eps_d = g.welfare_d[i] * profile.d[i] / welfare;
        result[i].eps_a = g.welfare_a[i] * profile.a[i] / welfare;
    }
    return result;
}

} // namespace fairalloc
