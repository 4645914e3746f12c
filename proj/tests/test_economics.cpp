#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fairalloc/economics.hpp"
#include "fairalloc/model.hpp"
#include "test_support.hpp"

using namespace fairalloc;
using test_support::rel_err;

namespace {

Scenario worked_single_group() {
    Scenario s;
    GroupParams g;
    g.name = "core";
    g.population = 1000.0;
    g.eir = 0.01;
    g.severity = 1.0;
    g.rt_star = 2.0;
    g.d_baseline = 0.8;
    g.a_baseline = 0.5;
    s.groups.push_back(g);
    s.forms.theta = {1.0};
    s.forms.beta = 0.5;
    s.forms.kappa = 0.1;
    s.forms.rho = 0.0;
    s.costs.c_ra = 1.0;
    s.costs.c_rt = 0.1;
    s.ra_total = 10.0;
    s.ra_star_total = 10.0;
    return s;
}

} // namespace

TEST_CASE("zero coefficients give a zero cost ledger") {
    Scenario s = worked_single_group();
    s.costs = CostParams{};
    CostBreakdown c = total_cost(s, baseline_profile(s));
    CHECK(c.resource == 0.0);
    CHECK(c.response == 0.0);
    CHECK(c.health == 0.0);
}

TEST_CASE("worked cost ledger at the baseline") {
    Scenario s = worked_single_group();
    CostBreakdown c = total_cost(s, baseline_profile(s));
    CHECK(c.resource == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.response == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(c.health == 0.0);
}

TEST_CASE("health shortfall cost switches on below the reference level") {
    Scenario s = worked_single_group();
    s.costs.c_h = 2.0;
    s.costs.h_ref = 1.0;
    // Baseline health 2*exp(-0.5) ~ 1.213 sits above the reference.
    CHECK(total_cost(s, baseline_profile(s)).health == 0.0);
    s.costs.h_ref = 2.0;
    const double h = 1.2130613194252668;
    CHECK(total_cost(s, baseline_profile(s)).health ==
          doctest::Approx(2.0 * (2.0 - h)).epsilon(1e-13));
}

TEST_CASE("additive health shortfall stays computable when utility would not be") {
    Scenario s = worked_single_group();
    s.forms.h_variant = HealthVariant::additive;
    s.forms.rho = 0.5;
    s.costs.c_h = 1.0;
    s.costs.h_ref = 0.5;
    BiasProfile p{{0.05}, {0.05}};
    // Health is far below zero here, so utility is undefined but costs are not.
    CHECK_THROWS_AS(social_welfare(s, p), std::domain_error);
    CostBreakdown c = total_cost(s, p);
    CHECK(c.health > 1.0);
}

TEST_CASE("bias reduction cost is zero at and below the baselines") {
    Scenario s = worked_single_group();
    s.costs.kappa_d = 10.0;
    s.costs.kappa_a = 3.0;
    CHECK(bias_reduction_cost(s, baseline_profile(s)) == 0.0);
    BiasProfile below{{0.4}, {0.2}};
    CHECK(bias_reduction_cost(s, below) == 0.0);
}

TEST_CASE("worked bias reduction cost above the baseline") {
    Scenario s = worked_single_group();
    s.groups[0].d_baseline = 0.5;
    s.costs.kappa_d = 10.0;
    BiasProfile p{{0.8}, {0.5}};
    CHECK(bias_reduction_cost(s, p) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("bias reduction cost grows along any improvement ray") {
    std::mt19937_64 rng(321);
    for (int t = 0; t < 200; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 2;
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile base = baseline_profile(s);
        BiasProfile step1 = base;
        BiasProfile step2 = base;
        for (std::size_t i = 0; i < 2; ++i) {
            const double room_d = 1.0 - base.d[i];
            const double room_a = 1.0 - base.a[i];
            const double t1 = test_support::uniform(rng, 0.1, 0.4);
            const double t2 = t1 + test_support::uniform(rng, 0.1, 0.4);
            step1.d[i] = base.d[i] + t1 * room_d;
            step1.a[i] = base.a[i] + t1 * room_a;
            step2.d[i] = base.d[i] + t2 * room_d;
            step2.a[i] = base.a[i] + t2 * room_a;
        }
        const double c1 = bias_reduction_cost(s, step1);
        const double c2 = bias_reduction_cost(s, step2);
        CHECK(c1 > 0.0);
        CHECK(c2 > c1);
    }
}

TEST_CASE("objective equals welfare when lambda is zero") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 1 + static_cast<int>(rng() % 3);
        Scenario s = test_support::random_scenario(rng, opt);
        s.lambda = 0.0;
        BiasProfile p = test_support::random_interior_profile(rng, s.groups.size());
        CHECK(objective(s, p) == social_welfare(s, p));
    }
}

TEST_CASE("objective combines the ledger with the configured lambda") {
    Scenario s = worked_single_group();
    s.lambda = 0.7;
    s.costs.kappa_d = 1.5;
    s.groups[0].d_baseline = 0.6;
    BiasProfile p{{0.8}, {0.5}};
    CostBreakdown c = total_cost(s, p);
    const double br = bias_reduction_cost(s, p);
    const double w = social_welfare(s, p);
    CHECK(objective(s, p) == doctest::Approx(w - 0.7 * (c.resource + c.response +
                                                        c.health + br)).epsilon(1e-14));
}

TEST_CASE("objective is invariant under group reordering") {
    std::mt19937_64 rng(42);
    test_support::GenOptions opt;
    opt.n_groups = 3;
    Scenario s = test_support::random_scenario(rng, opt);
    BiasProfile p = test_support::random_interior_profile(rng, 3);

    Scenario r = s;
    std::swap(r.groups[0], r.groups[2]);
    std::swap(r.forms.theta[0], r.forms.theta[2]);
    BiasProfile q = p;
    std::swap(q.d[0], q.d[2]);
    std::swap(q.a[0], q.a[2]);

    CHECK(rel_err(objective(s, p), objective(r, q)) < 1e-14);
}

TEST_CASE("evaluate report matches the standalone cost functions") {
    std::mt19937_64 rng(909);
    for (int t = 0; t < 50; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 2;
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile p = test_support::random_interior_profile(rng, 2);
        test_support::anchor_h_ref(s, p, rng);
        EvaluationReport r = evaluate(s, p);
        CostBreakdown c = total_cost(s, p);
        CHECK(r.cost_resource == c.resource);
        CHECK(r.cost_response == c.response);
        CHECK(r.cost_health == c.health);
        CHECK(r.cost_bias_reduction == bias_reduction_cost(s, p));
        CHECK(r.objective == objective(s, p));
        CHECK(rel_err(r.objective,
                      r.welfare - s.lambda * (c.resource + c.response + c.health +
                                              r.cost_bias_reduction)) < 1e-15);
    }
}

TEST_CASE("welfare partials are positive under the default form") {
    std::mt19937_64 rng(606);
    for (int t = 0; t < 100; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 1 + static_cast<int>(rng() % 3);
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile p = test_support::random_interior_profile(rng, s.groups.size());
        WelfareGradient g = welfare_gradient(s, p);
        for (std::size_t i = 0; i < s.groups.size(); ++i) {
            CHECK(g.d[i] > 0.0);
            CHECK(g.a[i] > 0.0);
        }
    }
}

TEST_CASE("zero-weight groups contribute nothing to the welfare gradient") {
    std::mt19937_64 rng(17);
    test_support::GenOptions opt;
    opt.n_groups = 2;
    Scenario s = test_support::random_scenario(rng, opt);
    s.groups[1].weight = 0.0;
    BiasProfile p = test_support::random_interior_profile(rng, 2);
    WelfareGradient g = welfare_gradient(s, p);
    CHECK(g.d[1] == 0.0);
    CHECK(g.a[1] == 0.0);
    CHECK(g.d[0] > 0.0);
}

TEST_CASE("objective gradient reduces to the welfare gradient without costs") {
    std::mt19937_64 rng(23);
    test_support::GenOptions opt;
    opt.n_groups = 2;
    opt.with_costs = false;
    Scenario s = test_support::random_scenario(rng, opt);
    BiasProfile p = test_support::random_interior_profile(rng, 2);
    GradientVector g = objective_gradient(s, p);
    WelfareGradient w = welfare_gradient(s, p);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(g.d_grad[i] == w.d[i]);
        CHECK(g.a_grad[i] == w.a[i]);
        CHECK(g.welfare_d_grad[i] == w.d[i]);
        CHECK(g.welfare_a_grad[i] == w.a[i]);
    }

    Scenario costly = test_support::random_scenario(rng, {});
    costly.lambda = 0.0;
    BiasProfile q = test_support::random_interior_profile(rng, 2);
    GradientVector gz = objective_gradient(costly, q);
    WelfareGradient wz = welfare_gradient(costly, q);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(gz.d_grad[i] == wz.d[i]);
        CHECK(gz.a_grad[i] == wz.a[i]);
    }
}

TEST_CASE("gradients of symmetric twins coincide") {
    Scenario s = worked_single_group();
    s.groups.push_back(s.groups[0]);
    s.groups[1].name = "mirror";
    s.forms.theta = {1.0, 1.0};
    s.forms.rho = 0.5;
    s.costs.kappa_d = 0.3;
    s.costs.kappa_a = 0.3;
    BiasProfile p{{0.6, 0.6}, {0.7, 0.7}};
    GradientVector g = objective_gradient(s, p);
    CHECK(g.d_grad[0] == g.d_grad[1]);
    CHECK(g.a_grad[0] == g.a_grad[1]);
}

TEST_CASE("finite differences confirm the analytic gradient") {
    std::mt19937_64 rng(2718);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 1 + static_cast<int>(rng() % 3);
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile p = test_support::random_interior_profile(rng, s.groups.size());
        test_support::anchor_h_ref(s, p, rng);
        const double err = finite_difference_check(s, p, 1e-5);
        worst = std::max(worst, err);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("a coarser step loses accuracy") {
    std::mt19937_64 rng(3141);
    test_support::GenOptions opt;
    opt.n_groups = 2;
    Scenario s = test_support::random_scenario(rng, opt);
    BiasProfile p = test_support::random_interior_profile(rng, 2, 0.3, 0.7);
    test_support::anchor_h_ref(s, p, rng);
    const double fine = finite_difference_check(s, p, 1e-5);
    const double coarse = finite_difference_check(s, p, 1e-2);
    CHECK(fine <= 1e-6);
    CHECK(coarse > fine);
}

TEST_CASE("finite difference check refuses profiles hugging the box") {
    Scenario s = worked_single_group();
    BiasProfile at_floor{{kProfileFloor}, {0.5}};
    CHECK_THROWS_AS(finite_difference_check(s, at_floor, 1e-5), std::domain_error);
    BiasProfile at_one{{0.5}, {1.0}};
    CHECK_THROWS_AS(finite_difference_check(s, at_one, 1e-5), std::domain_error);
    BiasProfile inside{{0.5}, {0.5}};
    CHECK_NOTHROW(finite_difference_check(s, inside, 1e-5));
    CHECK_THROWS_AS(finite_difference_check(s, inside, 0.0), std::domain_error);
}
