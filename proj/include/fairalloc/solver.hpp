#ifndef FAIRALLOC_SOLVER_HPP
#define FAIRALLOC_SOLVER_HPP

#include <optional>

#include "fairalloc/types.hpp"

namespace fairalloc {

struct SolutionReport {
    BiasProfile best_profile;
    double best_objective = 0.0;
    EvaluationReport evaluation;            ///< full evaluation at best_profile
    std::vector<int> iterations_per_start;  ///< inner iterations, all penalty stages
    std::vector<double> starts_summary;     ///< final objective of each start
    std::vector<bool> converged_per_start;
    bool converged = false;                 ///< winning start converged
    double projected_grad_norm = 0.0;       ///< final infinity norm, winning start
    double budget_violation = 0.0;          ///< max(0, sum RA - ra_total)
    std::optional<double> residual_disparity; ///< max pairwise |H_i - H_j|; fairness runs only
    std::optional<double> oracle_objective;   ///< filled by oracle cross-check tooling
    std::optional<double> oracle_gap;
};

/// Maximizes J(D, A) over the box [kProfileFloor, 1]^{2n} subject to the
/// resource budget, via multi-start projected gradient ascent with Armijo
/// backtracking and an escalating quadratic penalty on budget violation.
/// Never throws on non-convergence (flags it in the report); throws on an
/// invalid scenario, or a domain error if no start point is admissible.
SolutionReport optimize(const Scenario& scenario);

/// Same problem with the added constraint
/// max_{i,j} |H(g_i) - H(g_j)| <= disparity_cap, handled by the same
/// escalating penalty. An infinite cap reproduces optimize() exactly.
SolutionReport optimize_with_fairness(const Scenario& scenario, double disparity_cap);

struct OracleResult {
    BiasProfile profile;
    double objective = 0.0;
};

/// Exhaustive lattice search over {kProfileFloor, +step, ...} U {1} per
/// coordinate with a hard budget feasibility filter, followed by one
/// refinement pass at step/10 around the incumbent. Rejects scenarios with
/// more than 3 groups (cost grows as ((1/step)^2)^n).
OracleResult grid_oracle(const Scenario& scenario, double grid_step = 0.05);

} // namespace fairalloc

#endif // FAIRALLOC_SOLVER_HPP
