#include "fairalloc/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace fairalloc {

namespace {

std::string got(double v) { return " (got " + std::to_string(v) + ")"; }

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ValidationError(field, message);
}

void require_finite(double v, const std::string& field) {
    require(std::isfinite(v), field, "must be finite");
}

} // namespace

void validate_scenario(const Scenario& scenario) {
    require(!scenario.groups.empty(), "groups", "at least one group is required");

    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < scenario.groups.size(); ++i) {
        const GroupParams& g = scenario.groups[i];
        const std::string prefix = "groups[" + std::to_string(i) + "].";
        require(!g.name.empty(), prefix + "name", "must be non-empty");
        require(names.insert(g.name).second, prefix + "name",
                "duplicate group name '" + g.name + "'");
        require_finite(g.population, prefix + "population");
        require(g.population > 0.0, prefix + "population", "must be > 0" + got(g.population));
        require_finite(g.eir, prefix + "eir");
        require(g.eir > 0.0, prefix + "eir", "must be > 0" + got(g.eir));
        require_finite(g.severity, prefix + "severity");
        require(g.severity > 0.0, prefix + "severity", "must be > 0" + got(g.severity));
        require_finite(g.rt_star, prefix + "rt_star");
        require(g.rt_star > 0.0, prefix + "rt_star", "must be > 0" + got(g.rt_star));
        require_finite(g.d_baseline, prefix + "d_baseline");
        require(g.d_baseline > 0.0 && g.d_baseline <= 1.0, prefix + "d_baseline",
                "must be in (0, 1]" + got(g.d_baseline));
        require_finite(g.a_baseline, prefix + "a_baseline");
        require(g.a_baseline > 0.0 && g.a_baseline <= 1.0, prefix + "a_baseline",
                "must be in (0, 1]" + got(g.a_baseline));
        require_finite(g.weight, prefix + "weight");
        require(g.weight >= 0.0, prefix + "weight", "must be >= 0" + got(g.weight));
    }

    const FunctionalForms& f = scenario.forms;
    require(f.theta.size() == scenario.groups.size(), "forms.theta",
            "needs one entry per group (got " + std::to_string(f.theta.size()) +
                " for " + std::to_string(scenario.groups.size()) + " groups)");
    for (std::size_t i = 0; i < f.theta.size(); ++i) {
        const std::string field = "forms.theta[" + std::to_string(i) + "]";
        require_finite(f.theta[i], field);
        require(f.theta[i] > 0.0, field, "must be > 0" + got(f.theta[i]));
    }
    require_finite(f.beta, "forms.beta");
    require(f.beta > 0.0 && f.beta < 1.0, "forms.beta",
            "must be strictly inside (0, 1)" + got(f.beta));
    require_finite(f.kappa, "forms.kappa");
    require(f.kappa > 0.0, "forms.kappa", "must be > 0" + got(f.kappa));
    require_finite(f.rho, "forms.rho");
    require(f.rho >= 0.0, "forms.rho", "must be >= 0" + got(f.rho));

    const CostParams& c = scenario.costs;
    const std::pair<const char*, double> coeffs[] = {
        {"costs.c_ra", c.c_ra},       {"costs.c_rt", c.c_rt},
        {"costs.c_h", c.c_h},         {"costs.h_ref", c.h_ref},
        {"costs.kappa_d", c.kappa_d}, {"costs.kappa_a", c.kappa_a},
    };
    for (const auto& [field, value] : coeffs) {
        require_finite(value, field);
        require(value >= 0.0, field, "must be >= 0" + got(value));
    }

    require_finite(scenario.ra_total, "budget.ra_total");
    require(scenario.ra_total > 0.0, "budget.ra_total", "must be > 0" + got(scenario.ra_total));
    require_finite(scenario.ra_star_total, "budget.ra_star_total");
    require(scenario.ra_star_total > 0.0, "budget.ra_star_total",
            "must be > 0" + got(scenario.ra_star_total));
    require(scenario.ra_star_total <= scenario.ra_total, "budget.ra_star_total",
            "must be <= ra_total so the budget is feasible at the unbiased point" +
                got(scenario.ra_star_total));

    require_finite(scenario.lambda, "lambda");
    require(scenario.lambda >= 0.0, "lambda", "must be >= 0" + got(scenario.lambda));

    const SolverSettings& s = scenario.solver;
    require(s.max_iters >= 1, "solver.max_iters", "must be >= 1");
    require(std::isfinite(s.grad_tol) && s.grad_tol > 0.0, "solver.grad_tol", "must be > 0");
    require(s.n_starts >= 1, "solver.n_starts", "must be >= 1");
    require(std::isfinite(s.armijo_c) && s.armijo_c > 0.0, "solver.armijo_c", "must be > 0");
    require(std::isfinite(s.backtrack_factor) && s.backtrack_factor > 0.0 &&
                s.backtrack_factor < 1.0,
            "solver.backtrack_factor", "must be in (0, 1)" + got(s.backtrack_factor));
    require(std::isfinite(s.penalty_mu0) && s.penalty_mu0 > 0.0, "solver.penalty_mu0",
            "must be > 0");
    require(std::isfinite(s.penalty_growth) && s.penalty_growth > 0.0,
            "solver.penalty_growth", "must be > 0");
    require(std::isfinite(s.penalty_mu_max) && s.penalty_mu_max > 0.0,
            "solver.penalty_mu_max", "must be > 0");
}

void validate_profile(const Scenario& scenario, const BiasProfile& profile) {
    const std::size_t n = scenario.groups.size();
    require(profile.d.size() == n, "profile.d",
            "length " + std::to_string(profile.d.size()) + " does not match group count " +
                std::to_string(n));
    require(profile.a.size() == n, "profile.a",
            "length " + std::to_string(profile.a.size()) + " does not match group count " +
                std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::string di = "profile.d[" + std::to_string(i) + "]";
        require(std::isfinite(profile.d[i]) && profile.d[i] >= kProfileFloor &&
                    profile.d[i] <= 1.0,
                di, "must be in [" + std::to_string(kProfileFloor) + ", 1]" + got(profile.d[i]));
        const std::string ai = "profile.a[" + std::to_string(i) + "]";
        require(std::isfinite(profile.a[i]) && profile.a[i] >= kProfileFloor &&
                    profile.a[i] <= 1.0,
                ai, "must be in [" + std::to_string(kProfileFloor) + ", 1]" + got(profile.a[i]));
    }
}

BiasProfile baseline_profile(const Scenario& scenario) {
    // Baselines live in (0,1] but profiles in [kProfileFloor, 1]; a baseline
    // below the floor is clamped up so it is always evaluable.
    BiasProfile p;
    p.d.reserve(scenario.groups.size());
    p.a.reserve(scenario.groups.size());
    for (const GroupParams& g : scenario.groups) {
        p.d.push_back(std::max(g.d_baseline, kProfileFloor));
        p.a.push_back(std::max(g.a_baseline, kProfileFloor));
    }
    return p;
}

BiasProfile unbiased_profile(const Scenario& scenario) {
    BiasProfile p;
    p.d.assign(scenario.groups.size(), 1.0);
    p.a.assign(scenario.groups.size(), 1.0);
    return p;
}

} // namespace fairalloc
