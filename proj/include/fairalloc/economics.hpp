#ifndef FAIRALLOC_ECONOMICS_HPP
#define FAIRALLOC_ECONOMICS_HPP

#include "fairalloc/types.hpp"

namespace fairalloc {

struct CostBreakdown {
    double resource = 0.0; ///< sum c_ra * RA_i
    double response = 0.0; ///< sum c_rt * RT_i^2
    double health = 0.0;   ///< sum c_h * max(0, h_ref - H_i)
};

/// Direct cost ledger at a profile.
CostBreakdown total_cost(const Scenario& scenario, const BiasProfile& profile);

/// One-sided quadratic improvement cost:
/// sum_i kappa_d*max(0, D_i - D0_i)^2 + kappa_a*max(0, A_i - A0_i)^2.
double bias_reduction_cost(const Scenario& scenario, const BiasProfile& profile);

/// J = W - lambda * (C_resource + C_response + C_health + C_bias_reduction).
double objective(const Scenario& scenario, const BiasProfile& profile);

struct WelfareGradient {
    std::vector<double> d; ///< dW/dD_i
    std::vector<double> a; ///< dW/dA_i
};

/// Analytic marginal welfare of data quality and fairness per group,
/// chain-ruled through allocation and response time.
WelfareGradient welfare_gradient(const Scenario& scenario, const BiasProfile& profile);

struct GradientVector {
    std::vector<double> d_grad;         ///< dJ/dD_i
    std::vector<double> a_grad;         ///< dJ/dA_i
    std::vector<double> welfare_d_grad; ///< dW/dD_i
    std::vector<double> welfare_a_grad; ///< dW/dA_i
};

/// Analytic gradient of the full objective. At the health-cost kink
/// H_i == h_ref the subgradient 0 is used for the shortfall term.
GradientVector objective_gradient(const Scenario& scenario, const BiasProfile& profile);

/// Max over all 2n coordinates of
/// |analytic - central difference| / (1 + |analytic|)
/// for the objective gradient. The profile must sit at least 2*step inside
/// the box [kProfileFloor, 1]; throws std::domain_error otherwise.
double finite_difference_check(const Scenario& scenario, const BiasProfile& profile,
                               double step);

} // namespace fairalloc

#endif // FAIRALLOC_ECONOMICS_HPP
