#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

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

TEST_CASE("bias factor on the admitted square") {
    CHECK(bias_factor(1.0, 1.0) == 1.0);
    CHECK(bias_factor(0.8, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(bias_factor(0.5, 1.0) == 2.0);
    CHECK_THROWS_AS(bias_factor(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bias_factor(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bias_factor(-0.2, 0.5), std::domain_error);
    CHECK_THROWS_AS(bias_factor(1.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(bias_factor(0.5, 1.0 + 1e-12), std::domain_error);
}

TEST_CASE("ideal allocation splits the budget by need share") {
    Scenario s = worked_single_group();
    s.ra_star_total = 7.0;
    s.ra_total = 7.0;
    CHECK(ideal_allocation(s) == std::vector<double>{7.0});

    Scenario twin = worked_single_group();
    twin.groups.push_back(twin.groups[0]);
    twin.groups[1].name = "twin";
    twin.forms.theta = {1.0, 1.0};
    CHECK(ideal_allocation(twin) == std::vector<double>{5.0, 5.0});

    Scenario skewed = twin;
    skewed.ra_total = 8.0;
    skewed.ra_star_total = 8.0;
    skewed.groups[1].severity = 3.0;
    std::vector<double> ra_star = ideal_allocation(skewed);
    CHECK(ra_star[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ra_star[1] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ra_star[0] + ra_star[1] == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("realized allocation scales the ideal by d*a") {
    BiasProfile unbiased{{1.0}, {1.0}};
    CHECK(realized_allocation({10.0}, unbiased) == std::vector<double>{10.0});

    BiasProfile biased{{0.8}, {0.5}};
    CHECK(realized_allocation({10.0}, biased)[0] == doctest::Approx(4.0).epsilon(1e-12));

    BiasProfile half{{0.5}, {0.5}};
    CHECK(realized_allocation({6.0}, half)[0] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("realized response time inflates by the bias factor") {
    BiasProfile unbiased{{1.0}, {1.0}};
    CHECK(realized_response_time({2.0}, unbiased) == std::vector<double>{2.0});

    BiasProfile biased{{0.8}, {0.5}};
    CHECK(realized_response_time({2.0}, biased)[0] == doctest::Approx(5.0).epsilon(1e-12));

    BiasProfile quarter{{1.0}, {0.25}};
    CHECK(realized_response_time({4.0}, quarter)[0] == 16.0);
}

TEST_CASE("multiplicative health outcome") {
    FunctionalForms f;
    f.theta = {1.0};
    f.beta = 0.5;
    f.kappa = 0.1;
    CHECK(health_outcome(10.0, 2.0, f, 0) == doctest::Approx(2.5890539701513355).epsilon(1e-15));
    f.theta = {2.0};
    CHECK(health_outcome(4.0, 5.0, f, 0) == doctest::Approx(2.4261226388505337).epsilon(1e-15));
    CHECK_THROWS_AS(health_outcome(0.0, 2.0, f, 0), std::domain_error);
    CHECK_THROWS_AS(health_outcome(4.0, 0.0, f, 0), std::domain_error);
    CHECK_THROWS_AS(health_outcome(-1.0, 2.0, f, 0), std::domain_error);
}

TEST_CASE("additive health outcome can go non-positive") {
    FunctionalForms f;
    f.theta = {1.0};
    f.beta = 0.5;
    f.kappa = 0.1;
    f.h_variant = HealthVariant::additive;
    CHECK(health_outcome(4.0, 5.0, f, 0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(health_outcome(0.01, 10.0, f, 0) == doctest::Approx(-0.9).epsilon(1e-14));
}

TEST_CASE("health partials have the modelled signs") {
    std::mt19937_64 rng(1234);
    FunctionalForms forms;
    forms.theta = {1.3};
    forms.beta = 0.4;
    forms.kappa = 0.08;
    for (int variant = 0; variant < 2; ++variant) {
        forms.h_variant = variant == 0 ? HealthVariant::multiplicative : HealthVariant::additive;
        for (int t = 0; t < 200; ++t) {
            const double ra = test_support::uniform(rng, 0.5, 20.0);
            const double rt = test_support::uniform(rng, 0.5, 15.0);
            CHECK(health_partial_ra(ra, rt, forms, 0) > 0.0);
            CHECK(health_partial_rt(ra, rt, forms, 0) < 0.0);
        }
    }
}

TEST_CASE("health partials match central differences") {
    std::mt19937_64 rng(99);
    FunctionalForms forms;
    forms.theta = {1.1, 0.9};
    forms.beta = 0.55;
    forms.kappa = 0.12;
    const double step = 1e-6;
    for (int t = 0; t < 100; ++t) {
        const double ra = test_support::uniform(rng, 1.0, 15.0);
        const double rt = test_support::uniform(rng, 1.0, 10.0);
        const std::size_t gi = t % 2;
        const double fd_ra = (health_outcome(ra + step, rt, forms, gi) -
                              health_outcome(ra - step, rt, forms, gi)) / (2.0 * step);
        const double fd_rt = (health_outcome(ra, rt + step, forms, gi) -
                              health_outcome(ra, rt - step, forms, gi)) / (2.0 * step);
        CHECK(rel_err(health_partial_ra(ra, rt, forms, gi), fd_ra) < 1e-7);
        CHECK(rel_err(health_partial_rt(ra, rt, forms, gi), fd_rt) < 1e-7);
    }
}

TEST_CASE("health is strictly concave in the resource argument") {
    std::mt19937_64 rng(7);
    FunctionalForms forms;
    forms.theta = {1.0};
    forms.beta = 0.5;
    forms.kappa = 0.1;
    const double delta = 0.05;
    for (int t = 0; t < 500; ++t) {
        const double ra = test_support::uniform(rng, 0.5, 20.0);
        const double rt = test_support::uniform(rng, 0.5, 10.0);
        const double second = health_outcome(ra + delta, rt, forms, 0) -
                              2.0 * health_outcome(ra, rt, forms, 0) +
                              health_outcome(ra - delta, rt, forms, 0);
        CHECK(second < 0.0);
    }
}

TEST_CASE("CRRA utility and its special cases") {
    FunctionalForms f;
    f.rho = 0.0;
    CHECK(utility(2.5, f) == 2.5);
    f.rho = 1.0;
    CHECK(utility(1.0, f) == 0.0);
    CHECK(utility(std::exp(1.0), f) == doctest::Approx(1.0).epsilon(1e-14));
    f.rho = 0.5;
    CHECK(utility(4.0, f) == doctest::Approx(4.0).epsilon(1e-14));
    f.rho = 2.0;
    CHECK(utility(2.0, f) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("utility rejects non-positive health unless risk neutral") {
    FunctionalForms f;
    f.rho = 0.5;
    CHECK_THROWS_AS(utility(0.0, f), std::domain_error);
    CHECK_THROWS_AS(utility(-1.0, f), std::domain_error);
    CHECK_THROWS_AS(utility_prime(0.0, f), std::domain_error);
    f.rho = 1.0;
    CHECK_THROWS_AS(utility(0.0, f), std::domain_error);
    f.rho = 0.0;
    CHECK(utility(-0.9, f) == -0.9);
    CHECK(utility_prime(5.0, f) == 1.0);
}

TEST_CASE("marginal utility matches the power rule") {
    std::mt19937_64 rng(55);
    FunctionalForms f;
    const double rhos[] = {0.0, 0.5, 1.0, 2.0};
    for (double rho : rhos) {
        f.rho = rho;
        for (int t = 0; t < 50; ++t) {
            const double h = test_support::uniform(rng, 0.2, 8.0);
            const double step = 1e-6;
            const double fd = (utility(h + step, f) - utility(h - step, f)) / (2.0 * step);
            CHECK(rel_err(utility_prime(h, f), fd) < 1e-8);
        }
    }
}

TEST_CASE("social welfare of the worked single-group scenario") {
    Scenario s = worked_single_group();
    CHECK(social_welfare(s, unbiased_profile(s)) ==
          doctest::Approx(2.5890539701513355).epsilon(1e-15));
}

TEST_CASE("evaluate reproduces the worked baseline numbers") {
    Scenario s = worked_single_group();
    EvaluationReport r = evaluate(s, baseline_profile(s));
    REQUIRE(r.per_group.size() == 1);
    CHECK(r.per_group[0].ra == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.per_group[0].rt == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(r.per_group[0].bias_b == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.per_group[0].health == doctest::Approx(1.2130613194252668).epsilon(1e-14));
    CHECK(r.per_group[0].utility == r.per_group[0].health);
    CHECK(r.welfare == r.per_group[0].utility);
    CHECK(r.cost_resource == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.cost_response == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(r.cost_health == 0.0);
    CHECK(r.cost_bias_reduction == 0.0);
    CHECK(r.budget_used == r.per_group[0].ra);
    CHECK(r.objective == r.welfare - s.lambda * (r.cost_resource + r.cost_response +
                                                 r.cost_health + r.cost_bias_reduction));
}

TEST_CASE("no-bias identity holds exactly") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 1 + static_cast<int>(rng() % 4);
        Scenario s = test_support::random_scenario(rng, opt);
        const std::vector<double> ra_star = ideal_allocation(s);
        EvaluationReport r = evaluate(s, unbiased_profile(s));
        for (std::size_t i = 0; i < s.groups.size(); ++i) {
            CHECK(r.per_group[i].ra == ra_star[i]);
            CHECK(r.per_group[i].rt == s.groups[i].rt_star);
            CHECK(r.per_group[i].bias_b == 1.0);
        }
    }
}

TEST_CASE("bias never helps a group's allocation or delay") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 200; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 1 + static_cast<int>(rng() % 3);
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile p = test_support::random_interior_profile(rng, s.groups.size());
        const std::vector<double> ra_star = ideal_allocation(s);
        std::vector<double> rt_star;
        for (const auto& g : s.groups) rt_star.push_back(g.rt_star);
        const std::vector<double> ra = realized_allocation(ra_star, p);
        const std::vector<double> rt = realized_response_time(rt_star, p);
        for (std::size_t i = 0; i < s.groups.size(); ++i) {
            CHECK(ra[i] <= ra_star[i]);
            CHECK(rt[i] >= rt_star[i]);
            CHECK(ra[i] < ra_star[i]);
            CHECK(rt[i] > rt_star[i]);
        }
    }
}

TEST_CASE("welfare adds the weighted per-group utilities") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 2 + static_cast<int>(rng() % 3);
        Scenario s = test_support::random_scenario(rng, opt);
        BiasProfile p = test_support::random_interior_profile(rng, s.groups.size());
        EvaluationReport r = evaluate(s, p);
        double acc = 0.0;
        for (std::size_t i = 0; i < s.groups.size(); ++i)
            acc += s.groups[i].weight * r.per_group[i].utility;
        CHECK(rel_err(r.welfare, acc) < 1e-14);
        CHECK(r.welfare == social_welfare(s, p));
    }
}

TEST_CASE("raising a group's bias levels raises its welfare term") {
    std::mt19937_64 rng(404);
    for (int t = 0; t < 200; ++t) {
        test_support::GenOptions opt;
        opt.n_groups = 2;
        Scenario s = test_support::random_scenario(rng, opt);
        s.lambda = 0.0;
        BiasProfile lo = test_support::random_interior_profile(rng, 2, 0.2, 0.6);
        BiasProfile hi = lo;
        const std::size_t coord = rng() % 2;
        const std::size_t group = rng() % 2;
        double& entry = coord == 0 ? hi.d[group] : hi.a[group];
        entry += test_support::uniform(rng, 0.05, 0.3);
        CHECK(social_welfare(s, hi) > social_welfare(s, lo));
    }
}

TEST_CASE("scenario validation names the offending field") {
    Scenario s = worked_single_group();
    s.groups[0].population = 0.0;
    try {
        validate_scenario(s);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "groups[0].population");
    }

    s = worked_single_group();
    s.forms.beta = 1.0;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.forms.theta = {1.0, 2.0};
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.groups[0].d_baseline = 0.0;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.groups[0].a_baseline = 1.5;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.ra_star_total = 11.0;
    try {
        validate_scenario(s);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "budget.ra_star_total");
    }

    s = worked_single_group();
    s.costs.c_ra = -0.1;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.solver.n_starts = 0;
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);

    s = worked_single_group();
    s.groups.push_back(s.groups[0]);
    s.forms.theta = {1.0, 1.0};
    CHECK_THROWS_AS(validate_scenario(s), ValidationError);
}

TEST_CASE("profile validation enforces the box and the lengths") {
    Scenario s = worked_single_group();
    BiasProfile p{{0.5}, {0.5}};
    CHECK_NOTHROW(validate_profile(s, p));

    p.d[0] = kProfileFloor / 2.0;
    CHECK_THROWS_AS(validate_profile(s, p), ValidationError);
    p.d[0] = 1.0 + 1e-9;
    CHECK_THROWS_AS(validate_profile(s, p), ValidationError);
    p.d[0] = kProfileFloor;
    p.a[0] = 1.0;
    CHECK_NOTHROW(validate_profile(s, p));

    BiasProfile wrong{{0.5, 0.5}, {0.5}};
    CHECK_THROWS_AS(validate_profile(s, wrong), ValidationError);
}

TEST_CASE("baseline profile clamps tiny baselines up to the floor") {
    Scenario s = worked_single_group();
    s.groups[0].d_baseline = 1e-4;
    BiasProfile p = baseline_profile(s);
    CHECK(p.d[0] == kProfileFloor);
    CHECK(p.a[0] == 0.5);
    CHECK_NOTHROW(validate_profile(s, p));
}

TEST_CASE("evaluate rejects profiles outside the box") {
    Scenario s = worked_single_group();
    BiasProfile p{{0.0}, {0.5}};
    CHECK_THROWS_AS(evaluate(s, p), ValidationError);
    BiasProfile q{{0.5, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_AS(evaluate(s, q), ValidationError);
}
