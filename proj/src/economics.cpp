#include "fairalloc/economics.hpp"

#include <cmath>
#include <stdexcept>

#include "eval_core.hpp"

namespace fairalloc {

CostBreakdown total_cost(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    const auto acc = ctx.costs(profile);
    return CostBreakdown{acc.resource, acc.response, acc.health};
}

double bias_reduction_cost(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    return ctx.costs(profile).bias_reduction;
}

double objective(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    return ctx.objective(profile);
}

WelfareGradient welfare_gradient(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    detail::EvalContext::Gradient g;
    ctx.gradient(profile, g);
    WelfareGradient out;
    out.d = std::move(g.welfare_d);
    out.a = std::move(g.welfare_a);
    return out;
}

GradientVector objective_gradient(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    detail::EvalContext::Gradient g;
    ctx.gradient(profile, g);
    GradientVector out;
    out.d_grad = std::move(g.d);
    out.a_grad = std::move(g.a);
    out.welfare_d_grad = std::move(g.welfare_d);
    out.welfare_a_grad = std::move(g.welfare_a);
    return out;
}

double finite_difference_check(const Scenario& scenario, const BiasProfile& profile,
                               double step) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    if (!(step > 0.0))
        throw std::domain_error("finite_difference_check: step must be > 0");
    for (std::size_t i = 0; i < profile.d.size(); ++i) {
        const bool inside = profile.d[i] >= kProfileFloor + 2.0 * step &&
                            profile.d[i] <= 1.0 - 2.0 * step &&
                            profile.a[i] >= kProfileFloor + 2.0 * step &&
                            profile.a[i] <= 1.0 - 2.0 * step;
        if (!inside)
            throw std::domain_error(
                "finite_difference_check: profile must sit at least 2*step inside the box");
    }

    detail::EvalContext::Gradient g;
    ctx.gradient(profile, g);

    BiasProfile work = profile;
    double worst = 0.0;
    auto check_coord = [&](double& coord, double analytic) {
        const double saved = coord;
        coord = saved + step;
        const double hi = ctx.objective(work);
        coord = saved - step;
        const double lo = ctx.objective(work);
        coord = saved;
        const double fd = (hi - lo) / (2.0 * step);
        const double err = std::abs(analytic - fd) / (1.0 + std::abs(analytic));
        if (err > worst) worst = err;
    };
    for (std::size_t i = 0; i < profile.d.size(); ++i) {
        check_coord(work.d[i], g.d[i]);
        check_coord(work.a[i], g.a[i]);
    }
    return worst;
}

} // namespace fairalloc
