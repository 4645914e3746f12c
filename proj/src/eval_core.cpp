#include "eval_core.hpp"

#include <cmath>

#include "fairalloc/model.hpp"

namespace fairalloc::detail {

std::vector<double> ideal_allocation_unchecked(const Scenario& scenario) {
    std::vector<double> need;
    need.reserve(scenario.groups.size());
    double total_need = 0.0;
    for (const auto& g : scenario.groups) {
        const double n = g.population * g.eir * g.severity;
        need.push_back(n);
        total_need += n;
    }
    std::vector<double> ra_star;
    ra_star.reserve(need.size());
    for (double n : need) {
        ra_star.push_back(scenario.ra_star_total * n / total_need);
    }
    return ra_star;
}

EvalContext::EvalContext(const Scenario& scenario) : scenario_(&scenario) {
    validate_scenario(scenario);
    ra_star_ = ideal_allocation_unchecked(scenario);
}

EvalContext::CostAccum EvalContext::costs(const BiasProfile& profile) const {
    const Scenario& s = *scenario_;
    CostAccum acc;
    for (std::size_t i = 0; i < ra_star_.size(); ++i) {
        const double da = profile.d[i] * profile.a[i];
        const double ra = ra_star_[i] * da;
        const double rt = s.groups[i].rt_star / da;
        const double h = health_outcome(ra, rt, s.forms, i);
        acc.resource += s.costs.c_ra * ra;
        acc.response += s.costs.c_rt * rt * rt;
        acc.health += s.costs.c_h * std::max(0.0, s.costs.h_ref - h);
        acc.budget_used += ra;
        const double md = std::max(0.0, profile.d[i] - s.groups[i].d_baseline);
        const double ma = std::max(0.0, profile.a[i] - s.groups[i].a_baseline);
        acc.bias_reduction += s.costs.kappa_d * md * md + s.costs.kappa_a * ma * ma;
    }
    return acc;
}

double EvalContext::welfare(const BiasProfile& profile, GroupOutcome* rows) const {
    const Scenario& s = *scenario_;
    double w = 0.0;
    for (std::size_t i = 0; i < ra_star_.size(); ++i) {
        const double da = profile.d[i] * profile.a[i];
        const double ra = ra_star_[i] * da;
        const double rt = s.groups[i].rt_star / da;
        const double h = health_outcome(ra, rt, s.forms, i);
        const double u = utility(h, s.forms);
        if (rows != nullptr) {
            rows[i].ra = ra;
            rows[i].rt = rt;
            rows[i].bias_b = 1.0 / da;
            rows[i].health = h;
            rows[i].utility = u;
        }
        w += s.groups[i].weight * u;
    }
    return w;
}

double EvalContext::objective(const BiasProfile& profile) const {
    const CostAccum acc = costs(profile);
    const double w = welfare(profile);
    return w - scenario_->lambda *
                   (acc.resource + acc.response + acc.health + acc.bias_reduction);
}

void EvalContext::gradient(const BiasProfile& profile, Gradient& out) const {
    const Scenario& s = *scenario_;
    const std::size_t n = ra_star_.size();
    out.d.assign(n, 0.0);
    out.a.assign(n, 0.0);
    out.welfare_d.assign(n, 0.0);
    out.welfare_a.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = profile.d[i];
        const double a = profile.a[i];
        const double da = d * a;
        const double ra = ra_star_[i] * da;
        const double rt = s.groups[i].rt_star / da;
        const double h = health_outcome(ra, rt, s.forms, i);
        const double up = utility_prime(h, s.forms);
        const double h_ra = health_partial_ra(ra, rt, s.forms, i);
        const double h_rt = health_partial_rt(ra, rt, s.forms, i);

        const double dra_dd = ra_star_[i] * a;
        const double drt_dd = -s.groups[i].rt_star / (d * d * a);
        const double dra_da = ra_star_[i] * d;
        const double drt_da = -s.groups[i].rt_star / (d * a * a);

        const double dh_dd = h_ra * dra_dd + h_rt * drt_dd;
        const double dh_da = h_ra * dra_da + h_rt * drt_da;

        const double wd = s.groups[i].weight * up * dh_dd;
        const double wa = s.groups[i].weight * up * dh_da;
        out.welfare_d[i] = wd;
        out.welfare_a[i] = wa;

        // Health-cost hinge: zero subgradient at the kink (h == h_ref).
        const double hinge_dd = (h < s.costs.h_ref) ? -s.costs.c_h * dh_dd : 0.0;
        const double hinge_da = (h < s.costs.h_ref) ? -s.costs.c_h * dh_da : 0.0;

        const double cost_dd = s.costs.c_ra * dra_dd + 2.0 * s.costs.c_rt * rt * drt_dd +
                               hinge_dd +
                               2.0 * s.costs.kappa_d *
                                   std::max(0.0, d - s.groups[i].d_baseline);
        const double cost_da = s.costs.c_ra * dra_da + 2.0 * s.costs.c_rt * rt * drt_da +
                               hinge_da +
                               2.0 * s.costs.kappa_a *
                                   std::max(0.0, a - s.groups[i].a_baseline);

        out.d[i] = wd - s.lambda * cost_dd;
        out.a[i] = wa - s.lambda * cost_da;
    }
}

void EvalContext::health(const BiasProfile& profile, std::vector<double>& h) const {
    const Scenario& s = *scenario_;
    const std::size_t n = ra_star_.size();
    h.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double da = profile.d[i] * profile.a[i];
        const double ra = ra_star_[i] * da;
        const double rt = s.groups[i].rt_star / da;
        h[i] = health_outcome(ra, rt, s.forms, i);
    }
}

void EvalContext::health_with_partials(const BiasProfile& profile, std::vector<double>& h,
                                       std::vector<double>& dh_dd,
                                       std::vector<double>& dh_da) const {
    const Scenario& s = *scenario_;
    const std::size_t n = ra_star_.size();
    h.assign(n, 0.0);
    dh_dd.assign(n, 0.0);
    dh_da.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = profile.d[i];
        const double a = profile.a[i];
        const double da = d * a;
        const double ra = ra_star_[i] * da;
        const double rt = s.groups[i].rt_star / da;
        h[i] = health_outcome(ra, rt, s.forms, i);
        const double h_ra = health_partial_ra(ra, rt, s.forms, i);
        const double h_rt = health_partial_rt(ra, rt, s.forms, i);
        dh_dd[i] = h_ra * (ra_star_[i] * a) + h_rt * (-s.groups[i].rt_star / (d * d * a));
        dh_da[i] = h_ra * (ra_star_[i] * d) + h_rt * (-s.groups[i].rt_star / (d * a * a));
    }
}

} // namespace fairalloc::detail
