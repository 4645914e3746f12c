#include "fairalloc/model.hpp"

#include <cmath>
#include <stdexcept>

#include "eval_core.hpp"

namespace fairalloc {

double bias_factor(double d, double a) {
    if (!(d > 0.0) || d > 1.0)
        throw std::domain_error("bias_factor: data quality must be in (0, 1]");
    if (!(a > 0.0) || a > 1.0)
        throw std::domain_error("bias_factor: algorithmic fairness must be in (0, 1]");
    return 1.0 / (d * a);
}

std::vector<double> ideal_allocation(const Scenario& scenario) {
    validate_scenario(scenario);
    return detail::ideal_allocation_unchecked(scenario);
}

std::vector<double> realized_allocation(const std::vector<double>& ra_star,
                                        const BiasProfile& profile) {
    if (ra_star.size() != profile.d.size() || ra_star.size() != profile.a.size())
        throw std::invalid_argument("realized_allocation: length mismatch");
    std::vector<double> ra(ra_star.size());
    for (std::size_t i = 0; i < ra_star.size(); ++i)
        ra[i] = ra_star[i] * (profile.d[i] * profile.a[i]);
    return ra;
}

std::vector<double> realized_response_time(const std::vector<double>& rt_star,
                                           const BiasProfile& profile) {
    if (rt_star.size() != profile.d.size() || rt_star.size() != profile.a.size())
        throw std::invalid_argument("realized_response_time: length mismatch");
    std::vector<double> rt(rt_star.size());
    for (std::size_t i = 0; i < rt_star.size(); ++i)
        rt[i] = rt_star[i] / (profile.d[i] * profile.a[i]);
    return rt;
}

double health_outcome(double ra, double rt, const FunctionalForms& forms,
                      std::size_t group_index) {
    if (!(ra > 0.0)) throw std::domain_error("health_outcome: resources must be > 0");
    if (!(rt > 0.0)) throw std::domain_error("health_outcome: response time must be > 0");
    const double theta = forms.theta.at(group_index);
    if (forms.h_variant == HealthVariant::multiplicative)
        return theta * std::pow(ra, forms.beta) * std::exp(-forms.kappa * rt);
    return theta * std::pow(ra, forms.beta) - forms.kappa * rt;
}

double health_partial_ra(double ra, double rt, const FunctionalForms& forms,
                         std::size_t group_index) {
    if (!(ra > 0.0)) throw std::domain_error("health_partial_ra: resources must be > 0");
    if (!(rt > 0.0)) throw std::domain_error("health_partial_ra: response time must be > 0");
    const double theta = forms.theta.at(group_index);
    if (forms.h_variant == HealthVariant::multiplicative)
        return theta * forms.beta * std::pow(ra, forms.beta - 1.0) *
               std::exp(-forms.kappa * rt);
    return theta * forms.beta * std::pow(ra, forms.beta - 1.0);
}

double health_partial_rt(double ra, double rt, const FunctionalForms& forms,
                         std::size_t group_index) {
    if (!(ra > 0.0)) throw std::domain_error("health_partial_rt: resources must be > 0");
    if (!(rt > 0.0)) throw std::domain_error("health_partial_rt: response time must be > 0");
    const double theta = forms.theta.at(group_index);
    if (forms.h_variant == HealthVariant::multiplicative)
        return -forms.kappa * theta * std::pow(ra, forms.beta) * std::exp(-forms.kappa * rt);
    return -forms.kappa;
}

double utility(double h, const FunctionalForms& forms) {
    const double rho = forms.rho;
    if (rho == 0.0) return h;
    if (!(h > 0.0))
        throw std::domain_error("utility: health must be > 0 when rho > 0");
    if (rho == 1.0) return std::log(h);
    return std::pow(h, 1.0 - rho) / (1.0 - rho);
}

double utility_prime(double h, const FunctionalForms& forms) {
    const double rho = forms.rho;
    if (rho == 0.0) return 1.0;
    if (!(h > 0.0))
        throw std::domain_error("utility_prime: health must be > 0 when rho > 0");
    return std::pow(h, -rho);
}

double social_welfare(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);
    return ctx.welfare(profile);
}

EvaluationReport evaluate(const Scenario& scenario, const BiasProfile& profile) {
    const detail::EvalContext ctx(scenario);
    validate_profile(scenario, profile);

    EvaluationReport report;
    report.per_group.resize(scenario.groups.size());
    report.welfare = ctx.welfare(profile, report.per_group.data());
    const auto costs = ctx.costs(profile);
    report.budget_used = costs.budget_used;
    report.cost_resource = costs.resource;
    report.cost_response = costs.response;
    report.cost_health = costs.health;
    report.cost_bias_reduction = costs.bias_reduction;
    report.objective = report.welfare - scenario.lambda *
                                            (report.cost_resource + report.cost_response +
                                             report.cost_health + report.cost_bias_reduction);
    return report;
}

} // namespace fairalloc
