#ifndef FAIRALLOC_TYPES_HPP
#define FAIRALLOC_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairalloc {

// Hard floor for data-quality / fairness levels. The model's open interval
// (0,1] makes response time unbounded as D*A -> 0; every profile entry is
// kept in [kProfileFloor, 1].
inline constexpr double kProfileFloor = 1e-3;

// Raised when a scenario, profile, or document violates a declared
// constraint. `field` names the offending entry, `what()` carries the
// full message ("groups[0].eir: must be > 0 (got 0)").
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct GroupParams {
    std::string name;
    double population = 0.0; ///< persons in the group, > 0
    double eir = 0.0;        ///< emergency incidents per person per period, > 0
    double severity = 0.0;   ///< dimensionless severity index, > 0
    double rt_star = 0.0;    ///< optimal (minimal) response time, minutes, > 0
    double d_baseline = 1.0; ///< current data-quality level, in (0,1]
    double a_baseline = 1.0; ///< current algorithmic-fairness level, in (0,1]
    double weight = 1.0;     ///< welfare weight, >= 0
};

// Decision vector: one data-quality and one fairness level per group,
// each in [kProfileFloor, 1].
struct BiasProfile {
    std::vector<double> d;
    std::vector<double> a;
};

enum class HealthVariant { multiplicative, additive };

struct FunctionalForms {
    std::vector<double> theta;  ///< per-group health productivity, > 0
    double beta = 0.5;          ///< resource elasticity, in (0,1)
    double kappa = 0.1;         ///< response-time decay per minute, > 0
    double rho = 0.5;           ///< relative risk aversion, >= 0
    HealthVariant h_variant = HealthVariant::multiplicative;
};

struct CostParams {
    double c_ra = 0.0;    ///< currency per resource unit
    double c_rt = 0.0;    ///< currency per squared minute of response time
    double c_h = 0.0;     ///< currency per unit of health shortfall
    double h_ref = 0.0;   ///< reference health level defining shortfall
    double kappa_d = 0.0; ///< scale of data-quality improvement cost
    double kappa_a = 0.0; ///< scale of fairness improvement cost
};

struct SolverSettings {
    int max_iters = 10000;        ///< inner ascent iteration cap per penalty stage
    double grad_tol = 1e-8;       ///< projected-gradient infinity-norm stop tolerance
    int n_starts = 5;             ///< multi-start count
    std::uint64_t seed = 0;       ///< seed for the random starts
    double armijo_c = 1e-4;       ///< sufficient-increase constant
    double backtrack_factor = 0.5; ///< step shrink factor, in (0,1)
    double penalty_mu0 = 10.0;    ///< initial constraint penalty weight
    double penalty_growth = 10.0; ///< penalty escalation factor
    double penalty_mu_max = 1e8;  ///< penalty weight cap
    bool parallel = false;        ///< run starts concurrently (identical results either way)
};

struct Scenario {
    std::vector<GroupParams> groups;
    FunctionalForms forms;
    CostParams costs;
    double ra_total = 0.0;      ///< total resource budget
    double ra_star_total = 0.0; ///< resource mass distributed by the ideal allocator
    double lambda = 1.0;        ///< marginal utility of income
    SolverSettings solver;
};

struct GroupOutcome {
    double ra = 0.0;
    double rt = 0.0;
    double bias_b = 0.0;
    double health = 0.0;
    double utility = 0.0;
};

struct EvaluationReport {
    std::vector<GroupOutcome> per_group;
    double welfare = 0.0;
    double cost_resource = 0.0;
    double cost_response = 0.0;
    double cost_health = 0.0;
    double cost_bias_reduction = 0.0;
    double objective = 0.0; ///< welfare - lambda * (sum of the four cost fields)
    double budget_used = 0.0;
};

/// Throws ValidationError on the first violated invariant.
void validate_scenario(const Scenario& scenario);

/// Checks lengths against the scenario and every entry against [kProfileFloor, 1].
void validate_profile(const Scenario& scenario, const BiasProfile& profile);

/// The baseline profile (D0, A0) of a scenario.
BiasProfile baseline_profile(const Scenario& scenario);

/// The unbiased profile: D = A = 1 for every group.
BiasProfile unbiased_profile(const Scenario& scenario);

} // namespace fairalloc

#endif // FAIRALLOC_TYPES_HPP
