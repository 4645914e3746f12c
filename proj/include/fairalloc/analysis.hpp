#ifndef FAIRALLOC_ANALYSIS_HPP
#define FAIRALLOC_ANALYSIS_HPP

#include "fairalloc/solver.hpp"
#include "fairalloc/types.hpp"

namespace fairalloc {

struct GroupDelta {
    double delta_ra = 0.0; ///< RA* - RA, resources foregone to bias
    double delta_rt = 0.0; ///< RT - RT*, extra delay
    double delta_h = 0.0;  ///< H(unbiased) - H(baseline)
    double delta_u = 0.0;  ///< U(unbiased) - U(baseline)
};

struct WelfareLossReport {
    double w_unbiased = 0.0;
    double w_biased = 0.0;
    double delta_w = 0.0;          ///< w_unbiased - w_biased
    double delta_cost_total = 0.0; ///< C_total(baseline) - C_total(unbiased), improvement costs excluded
    std::vector<GroupDelta> per_group;
};

/// Welfare impact of the baseline bias: compares the baseline profile
/// (D0, A0) against the unbiased profile (1, 1). No improvement cost is
/// charged on either side.
WelfareLossReport welfare_loss(const Scenario& scenario);

struct FrontierPoint {
    double disparity_cap = 0.0; ///< may be +infinity (no cap)
    double objective = 0.0;
    double realized_disparity = 0.0;
    bool converged = false;
};

/// Efficiency-equity frontier: one fairness-constrained solve per cap.
/// Caps must be non-negative and sorted ascending; output keeps input order.
std::vector<FrontierPoint> frontier(const Scenario& scenario,
                                    const std::vector<double>& caps);

struct GroupElasticity {
    double eps_d = 0.0; ///< (dW/dD_i) * D_i / W
    double eps_a = 0.0; ///< (dW/dA_i) * A_i / W
};

/// Welfare elasticities of data quality and fairness at a profile.
/// Throws std::domain_error when |W| < 1e-12.
std::vector<GroupElasticity> elasticities(const Scenario& scenario,
                                          const BiasProfile& profile);

} // namespace fairalloc

#endif // FAIRALLOC_ANALYSIS_HPP
