#ifndef FAIRALLOC_EVAL_CORE_HPP
#define FAIRALLOC_EVAL_CORE_HPP

#include "fairalloc/types.hpp"

namespace fairalloc::detail {

/// Need-proportional shares of ra_star_total; no validation.
std::vector<double> ideal_allocation_unchecked(const Scenario& scenario);

/// Per-scenario evaluation context. Validates the scenario once at
/// construction; all evaluation entry points below skip re-validation and
/// assume profiles already lie in the box. The hot paths (solver, grid
/// oracle) construct one context and reuse it.
class EvalContext {
public:
    explicit EvalContext(const Scenario& scenario);

    const Scenario& scenario() const noexcept { return *scenario_; }
    const std::vector<double>& ra_star() const noexcept { return ra_star_; }
    std::size_t group_count() const noexcept { return ra_star_.size(); }

    struct CostAccum {
        double resource = 0.0;
        double response = 0.0;
        double health = 0.0;
        double bias_reduction = 0.0;
        double budget_used = 0.0;
    };

    /// Cost ledger only; never touches the utility layer.
    CostAccum costs(const BiasProfile& profile) const;

    /// Welfare; fills per-group rows when `rows` is non-null (size n).
    double welfare(const BiasProfile& profile, GroupOutcome* rows = nullptr) const;

    /// J = W - lambda * (resource + response + health + bias_reduction).
    double objective(const BiasProfile& profile) const;

    struct Gradient {
        std::vector<double> d;         ///< dJ/dD_i
        std::vector<double> a;         ///< dJ/dA_i
        std::vector<double> welfare_d; ///< dW/dD_i
        std::vector<double> welfare_a; ///< dW/dA_i
    };

    /// Analytic gradient of J (and the welfare-only parts) at an interior
    /// profile. Buffers in `out` are resized as needed.
    void gradient(const BiasProfile& profile, Gradient& out) const;

    /// Health levels H_i only.
    void health(const BiasProfile& profile, std::vector<double>& h) const;

    /// Health levels H_i and the diagonal partials dH_i/dD_i, dH_i/dA_i
    /// (H_i depends only on that group's own levels). Used by the fairness
    /// disparity penalty.
    void health_with_partials(const BiasProfile& profile, std::vector<double>& h,
                              std::vector<double>& dh_dd, std::vector<double>& dh_da) const;

private:
    const Scenario* scenario_;
    std::vector<double> ra_star_;
};

} // namespace fairalloc::detail

#endif // FAIRALLOC_EVAL_CORE_HPP
