#ifndef FAIRALLOC_MODEL_HPP
#define FAIRALLOC_MODEL_HPP

#include "fairalloc/types.hpp"

namespace fairalloc {

/// Multiplicative bias factor B = 1/(d*a). B = 1 means unbiased, B > 1 is
/// bias against the group. Throws std::domain_error if d or a is outside (0,1].
double bias_factor(double d, double a);

/// Ideal allocation RA*: ra_star_total split in proportion to each group's
/// need product population*eir*severity. Entries sum to ra_star_total.
std::vector<double> ideal_allocation(const Scenario& scenario);

/// Realized allocation RA = RA* * D * A, elementwise.
std::vector<double> realized_allocation(const std::vector<double>& ra_star,
                                        const BiasProfile& profile);

/// Realized response time RT = RT* / (D * A), elementwise.
std::vector<double> realized_response_time(const std::vector<double>& rt_star,
                                           const BiasProfile& profile);

/// Health production h(ra, rt) for group `group_index`:
///   multiplicative: theta * ra^beta * exp(-kappa*rt), always > 0
///   additive:       theta * ra^beta - kappa*rt, may be <= 0
/// Throws std::domain_error on non-positive ra or rt.
double health_outcome(double ra, double rt, const FunctionalForms& forms,
                      std::size_t group_index);

/// dh/dRA at (ra, rt); positive for both variants.
double health_partial_ra(double ra, double rt, const FunctionalForms& forms,
                         std::size_t group_index);

/// dh/dRT at (ra, rt); negative for both variants.
double health_partial_rt(double ra, double rt, const FunctionalForms& forms,
                         std::size_t group_index);

/// CRRA utility u(h) = h^(1-rho)/(1-rho), ln h at rho = 1, identity at rho = 0.
/// Throws std::domain_error if h <= 0 while rho > 0.
double utility(double h, const FunctionalForms& forms);

/// u'(h) = h^(-rho) on the admitted domain.
double utility_prime(double h, const FunctionalForms& forms);

/// Social welfare W = sum_i w_i * u(h(RA_i, RT_i)).
double social_welfare(const Scenario& scenario, const BiasProfile& profile);

/// Full evaluation of one profile: per-group RA/RT/B/H/U, welfare, the cost
/// decomposition, and the objective J = W - lambda*(C_total + C_bias_reduction).
EvaluationReport evaluate(const Scenario& scenario, const BiasProfile& profile);

} // namespace fairalloc

#endif // FAIRALLOC_MODEL_HPP
