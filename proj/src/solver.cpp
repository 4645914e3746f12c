#include "fairalloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

#include "eval_core.hpp"
#include "fairalloc/model.hpp"

namespace fairalloc {
namespace {

using detail::EvalContext;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieBand = 1e-12;        // objective ties broken lexicographically
constexpr double kDisparitySlack = 1e-6;  // accepted residual above the cap
constexpr int kMaxPenaltyStages = 100;
constexpr int kMaxBacktracks = 60;
constexpr double kMaxStep = 1e6;

// Raw 64-bit draw mapped to [0, 1); avoids std::uniform_real_distribution,
// whose output is not pinned down by the standard.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Compares the concatenated (D, A) vectors element-wise.
bool lex_less(const BiasProfile& x, const BiasProfile& y) {
    for (std::size_t i = 0; i < x.d.size(); ++i) {
        if (x.d[i] != y.d[i]) return x.d[i] < y.d[i];
    }
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        if (x.a[i] != y.a[i]) return x.a[i] < y.a[i];
    }
    return false;
}

// Max pairwise |H_i - H_j| is the range of the vector.
double disparity_of(const std::vector<double>& h) {
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    return *hi - *lo;
}

// Penalized objective P(x) = J(x) - mu * (viol^2 + sum_{i<j} t_ij^2).
// Returns -infinity when x is outside the utility domain (the additive
// health variant can push H nonpositive under rho > 0).
double penalized_value(const EvalContext& ctx, const BiasProfile& x, double mu,
                       double disparity_cap, std::vector<double>& h_buf) {
    const Scenario& s = ctx.scenario();
    try {
        const auto acc = ctx.costs(x);
        const double w = ctx.welfare(x);
        const double j =
            w - s.lambda * (acc.resource + acc.response + acc.health + acc.bias_reduction);
        const double viol = std::max(0.0, acc.budget_used - s.ra_total);
        double pen = viol * viol;
        if (std::isfinite(disparity_cap)) {
            ctx.health(x, h_buf);
            for (std::size_t i = 0; i + 1 < h_buf.size(); ++i) {
                for (std::size_t k = i + 1; k < h_buf.size(); ++k) {
                    const double t =
                        std::max(0.0, std::abs(h_buf[i] - h_buf[k]) - disparity_cap);
                    pen += t * t;
                }
            }
        }
        return j - mu * pen;
    } catch (const std::domain_error&) {
        return -kInf;
    }
}

// Gradient of the penalized objective at an admissible point.
void penalized_gradient(const EvalContext& ctx, const BiasProfile& x, double mu,
                        double disparity_cap, EvalContext::Gradient& g,
                        std::vector<double>& h_buf, std::vector<double>& dh_dd,
                        std::vector<double>& dh_da) {
    const Scenario& s = ctx.scenario();
    ctx.gradient(x, g);
    const auto acc = ctx.costs(x);
    const double viol = std::max(0.0, acc.budget_used - s.ra_total);
    if (viol > 0.0) {
        for (std::size_t i = 0; i < g.d.size(); ++i) {
            g.d[i] -= mu * 2.0 * viol * (ctx.ra_star()[i] * x.a[i]);
            g.a[i] -= mu * 2.0 * viol * (ctx.ra_star()[i] * x.d[i]);
        }
    }
    if (std::isfinite(disparity_cap)) {
        ctx.health_with_partials(x, h_buf, dh_dd, dh_da);
        for (std::size_t i = 0; i + 1 < h_buf.size(); ++i) {
            for (std::size_t k = i + 1; k < h_buf.size(); ++k) {
                const double diff = h_buf[i] - h_buf[k];
                const double t = std::max(0.0, std::abs(diff) - disparity_cap);
                if (t <= 0.0) continue;
                const double sgn = diff > 0.0 ? 1.0 : -1.0;
                g.d[i] -= mu * 2.0 * t * sgn * dh_dd[i];
                g.a[i] -= mu * 2.0 * t * sgn * dh_da[i];
                g.d[k] += mu * 2.0 * t * sgn * dh_dd[k];
                g.a[k] += mu * 2.0 * t * sgn * dh_da[k];
            }
        }
    }
}

struct StartResult {
    BiasProfile profile;
    double objective = -kInf; ///< J at the final iterate; -inf if inadmissible
    int iterations = 0;
    bool converged = false; ///< gradient tolerance met and constraints satisfied
    bool feasible = false;
    double pg_norm = kInf;
};

// Projected gradient ascent with Armijo backtracking on the projection arc,
// wrapped in an escalating penalty loop. Pure function of (ctx, start, cap).
StartResult solve_start(const EvalContext& ctx, const BiasProfile& start,
                        double disparity_cap) {
    const Scenario& s = ctx.scenario();
    const SolverSettings& cfg = s.solver;
    const std::size_t n = ctx.group_count();

    StartResult res;
    res.profile = start;

    std::vector<double> h_buf, dh_dd, dh_da;
    BiasProfile x = start;
    double mu = cfg.penalty_mu0;
    double p = penalized_value(ctx, x, mu, disparity_cap, h_buf);
    if (!std::isfinite(p)) return res; // inadmissible start point

    EvalContext::Gradient g;
    EvalContext::Gradient g_prev;
    BiasProfile trial = x;
    BiasProfile x_prev = x;
    bool stage_converged = false;
    double pg_norm = kInf;

    for (int stage = 0; stage < kMaxPenaltyStages; ++stage) {
        double step = 1.0;
        stage_converged = false;
        bool have_prev = false; // BB pairs are invalid across penalty stages
        for (int it = 0; it < cfg.max_iters; ++it) {
            penalized_gradient(ctx, x, mu, disparity_cap, g, h_buf, dh_dd, dh_da);
            pg_norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double pd = g.d[i];
                if (x.d[i] <= kProfileFloor) pd = std::max(pd, 0.0);
                if (x.d[i] >= 1.0) pd = std::min(pd, 0.0);
                double pa = g.a[i];
                if (x.a[i] <= kProfileFloor) pa = std::max(pa, 0.0);
                if (x.a[i] >= 1.0) pa = std::min(pa, 0.0);
                pg_norm = std::max(pg_norm, std::max(std::abs(pd), std::abs(pa)));
            }
            if (pg_norm <= cfg.grad_tol) {
                stage_converged = true;
                break;
            }

            ++res.iterations;
            // Barzilai-Borwein trial step from the last accepted move; the
            // Armijo backtracking below keeps the ascent monotone. Plain
            // gradient steps crawl once the penalty weight makes the
            // curvature stiff; the spectral step does not.
            double t = step;
            if (have_prev) {
                double ss = 0.0;
                double sy = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double sd = x.d[i] - x_prev.d[i];
                    const double sa = x.a[i] - x_prev.a[i];
                    ss += sd * sd + sa * sa;
                    sy += sd * (g_prev.d[i] - g.d[i]) + sa * (g_prev.a[i] - g.a[i]);
                }
                if (std::isfinite(sy) && sy > 0.0 && ss > 0.0)
                    t = std::clamp(ss / sy, 1e-12, kMaxStep);
            }
            bool accepted = false;
            for (int ls = 0; ls < kMaxBacktracks; ++ls) {
                double dir_dot = 0.0;
                bool moved = false;
                for (std::size_t i = 0; i < n; ++i) {
                    trial.d[i] = std::clamp(x.d[i] + t * g.d[i], kProfileFloor, 1.0);
                    trial.a[i] = std::clamp(x.a[i] + t * g.a[i], kProfileFloor, 1.0);
                    dir_dot += g.d[i] * (trial.d[i] - x.d[i]);
                    dir_dot += g.a[i] * (trial.a[i] - x.a[i]);
                    moved = moved || trial.d[i] != x.d[i] || trial.a[i] != x.a[i];
                }
                if (!moved) break;
                const double pt = penalized_value(ctx, trial, mu, disparity_cap, h_buf);
                if (pt >= p + cfg.armijo_c * dir_dot) {
                    x_prev = x;
                    g_prev = g;
                    have_prev = true;
                    x = trial;
                    p = pt;
                    step = std::min(t / cfg.backtrack_factor, kMaxStep);
                    accepted = true;
                    break;
                }
                t *= cfg.backtrack_factor;
            }
            if (!accepted) break; // stalled line search; flagged via converged
        }

        const auto acc = ctx.costs(x);
        const double viol = std::max(0.0, acc.budget_used - s.ra_total);
        bool feasible = viol <= 1e-9 * (1.0 + s.ra_total);
        if (feasible && std::isfinite(disparity_cap) && n > 1) {
            ctx.health(x, h_buf);
            feasible = disparity_of(h_buf) <= disparity_cap + kDisparitySlack;
        }
        if (feasible) {
            res.feasible = true;
            break;
        }
        if (mu >= cfg.penalty_mu_max) break;
        mu = std::min(mu * cfg.penalty_growth, cfg.penalty_mu_max);
        p = penalized_value(ctx, x, mu, disparity_cap, h_buf);
    }

    res.profile = x;
    res.objective = ctx.objective(x);
    res.pg_norm = pg_norm;
    res.converged = stage_converged && res.feasible;
    return res;
}

// Deterministic start set {baseline, all-ones, all-floor, center}, padded
// with seeded random interior points up to n_starts.
std::vector<BiasProfile> build_starts(const Scenario& s) {
    const std::size_t n = s.groups.size();
    const std::size_t count = static_cast<std::size_t>(s.solver.n_starts);

    std::vector<BiasProfile> starts;
    starts.push_back(baseline_profile(s));
    starts.push_back(unbiased_profile(s));
    starts.push_back(BiasProfile{std::vector<double>(n, kProfileFloor),
                                 std::vector<double>(n, kProfileFloor)});
    const double center = (kProfileFloor + 1.0) / 2.0;
    starts.push_back(
        BiasProfile{std::vector<double>(n, center), std::vector<double>(n, center)});
    if (starts.size() > count) starts.resize(count);

    std::mt19937_64 rng(s.solver.seed);
    while (starts.size() < count) {
        BiasProfile r{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i)
            r.d[i] = kProfileFloor + uniform01(rng) * (1.0 - kProfileFloor);
        for (std::size_t i = 0; i < n; ++i)
            r.a[i] = kProfileFloor + uniform01(rng) * (1.0 - kProfileFloor);
        starts.push_back(std::move(r));
    }
    return starts;
}

SolutionReport run_optimize(const Scenario& scenario, double disparity_cap) {
    if (std::isnan(disparity_cap) || disparity_cap < 0.0)
        throw std::invalid_argument("optimize_with_fairness: disparity cap must be >= 0");

    const EvalContext ctx(scenario);
    const std::vector<BiasProfile> starts = build_starts(scenario);

    std::vector<StartResult> results(starts.size());
    if (scenario.solver.parallel && starts.size() > 1) {
        std::vector<std::future<StartResult>> futures;
        futures.reserve(starts.size());
        for (const BiasProfile& start : starts) {
            futures.push_back(std::async(std::launch::async, [&ctx, &start, disparity_cap] {
                return solve_start(ctx, start, disparity_cap);
            }));
        }
        for (std::size_t k = 0; k < futures.size(); ++k) results[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < starts.size(); ++k)
            results[k] = solve_start(ctx, starts[k], disparity_cap);
    }

    // Winner: feasible starts first, then best objective, ties within
    // kTieBand broken by the lexicographically smallest (D, A).
    const StartResult* winner = nullptr;
    for (int pass = 0; pass < 2 && winner == nullptr; ++pass) {
        double best = -kInf;
        for (const StartResult& r : results) {
            if (!std::isfinite(r.objective)) continue;
            if (pass == 0 && !r.feasible) continue;
            best = std::max(best, r.objective);
        }
        if (best == -kInf) continue;
        for (const StartResult& r : results) {
            if (!std::isfinite(r.objective)) continue;
            if (pass == 0 && !r.feasible) continue;
            if (r.objective < best - kTieBand) continue;
            if (winner == nullptr || lex_less(r.profile, winner->profile)) winner = &r;
        }
    }
    if (winner == nullptr)
        throw std::domain_error("optimize: no admissible start point for this scenario");

    SolutionReport report;
    report.best_profile = winner->profile;
    report.best_objective = winner->objective;
    report.evaluation = evaluate(scenario, winner->profile);
    report.iterations_per_start.reserve(results.size());
    report.starts_summary.reserve(results.size());
    report.converged_per_start.reserve(results.size());
    for (const StartResult& r : results) {
        report.iterations_per_start.push_back(r.iterations);
        report.starts_summary.push_back(r.objective);
        report.converged_per_start.push_back(r.converged);
    }
    report.converged = winner->converged;
    report.projected_grad_norm = winner->pg_norm;
    report.budget_violation =
        std::max(0.0, report.evaluation.budget_used - scenario.ra_total);
    if (std::isfinite(disparity_cap)) {
        std::vector<double> h;
        ctx.health(report.best_profile, h);
        report.residual_disparity = h.size() > 1 ? disparity_of(h) : 0.0;
    }
    return report;
}

struct LatticeBest {
    double objective = -kInf;
    std::vector<std::pair<double, BiasProfile>> ties;
};

// Exhaustive scan over the Cartesian product of per-coordinate axes with a
// hard budget filter. Keeps every profile within kTieBand of the running max.
void scan_lattice(const EvalContext& ctx, const std::vector<std::vector<double>>& axes,
                  LatticeBest& best) {
    const Scenario& s = ctx.scenario();
    const std::size_t n = ctx.group_count();
    const std::size_t dims = axes.size();

    std::vector<std::size_t> idx(dims, 0);
    BiasProfile x{std::vector<double>(n), std::vector<double>(n)};
    while (true) {
        for (std::size_t c = 0; c < dims; ++c) {
            const double v = axes[c][idx[c]];
            if (c < n)
                x.d[c] = v;
            else
                x.a[c - n] = v;
        }

        const auto acc = ctx.costs(x);
        if (acc.budget_used <= s.ra_total) {
            double j;
            bool admissible = true;
            try {
                const double w = ctx.welfare(x);
                j = w - s.lambda *
                        (acc.resource + acc.response + acc.health + acc.bias_reduction);
            } catch (const std::domain_error&) {
                admissible = false;
                j = -kInf;
            }
            if (admissible && j >= best.objective - kTieBand) {
                best.ties.emplace_back(j, x);
                if (j > best.objective) {
                    best.objective = j;
                    std::erase_if(best.ties, [&](const auto& cand) {
                        return cand.first < best.objective - kTieBand;
                    });
                }
            }
        }

        std::size_t c = 0;
        for (; c < dims; ++c) {
            if (++idx[c] < axes[c].size()) break;
            idx[c] = 0;
        }
        if (c == dims) break;
    }
}

OracleResult pick_lattice_winner(const LatticeBest& best) {
    if (best.ties.empty())
        throw std::domain_error("grid_oracle: no feasible lattice point");
    const std::pair<double, BiasProfile>* win = &best.ties.front();
    for (const auto& cand : best.ties) {
        if (lex_less(cand.second, win->second)) win = &cand;
    }
    return OracleResult{win->second, win->first};
}

} // namespace

SolutionReport optimize(const Scenario& scenario) {
    return run_optimize(scenario, kInf);
}

SolutionReport optimize_with_fairness(const Scenario& scenario, double disparity_cap) {
    return run_optimize(scenario, disparity_cap);
}

OracleResult grid_oracle(const Scenario& scenario, double grid_step) {
    const EvalContext ctx(scenario);
    const std::size_t n = ctx.group_count();
    if (n > 3)
        throw std::invalid_argument(
            "grid_oracle: group count exceeds the 3-group exhaustive-search bound");
    if (!(grid_step > 0.0) || !(grid_step < 1.0))
        throw std::invalid_argument("grid_oracle: grid_step must be in (0, 1)");

    std::vector<double> axis;
    for (std::size_t k = 0;; ++k) {
        const double v = kProfileFloor + static_cast<double>(k) * grid_step;
        if (v >= 1.0 - 1e-12) break;
        axis.push_back(v);
    }
    axis.push_back(1.0);

    LatticeBest coarse;
    scan_lattice(ctx, std::vector<std::vector<double>>(2 * n, axis), coarse);
    const OracleResult incumbent = pick_lattice_winner(coarse);

    // One refinement pass at step/10 around the incumbent.
    const double fine = grid_step / 10.0;
    auto refine_axis = [&](double center) {
        std::vector<double> vals;
        vals.reserve(21);
        for (int m = -10; m <= 10; ++m)
            vals.push_back(std::clamp(center + static_cast<double>(m) * fine,
                                      kProfileFloor, 1.0));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    };
    std::vector<std::vector<double>> fine_axes;
    fine_axes.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) fine_axes.push_back(refine_axis(incumbent.profile.d[i]));
    for (std::size_t i = 0; i < n; ++i) fine_axes.push_back(refine_axis(incumbent.profile.a[i]));

    LatticeBest refined;
    scan_lattice(ctx, fine_axes, refined);
    return pick_lattice_winner(refined);
}

} // namespace fairalloc
