#include <cmath>

#include "dcakit/problem_zoo.hpp"
#include "doctest.h"

using namespace dcakit;

TEST_CASE("the catalog lists its problems in a fixed order") {
    const std::vector<std::string> want = {
        "ex1_bad",   "ex1_good",  "ex2_oscillate",        "ex2_endpoint", "ex3_weak",
        "ex3_good_selection", "ex3_alt_decomp", "no_solution", "divergent",
        "level_bounded_no_min", "quartic",   "quadratic",    "convex_oneshot"};
    CHECK(zoo_names() == want);
    CHECK_THROWS_AS(zoo_build("not_a_problem"), UnknownName);
}

TEST_CASE("every catalog entry does what its card says") {
    for (const std::string& name : zoo_names()) {
        const ZooEntry e = zoo_build(name);
        const Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);
        std::string why;
        const bool ok = behavior_satisfied(e.expected, tr, &why);
        const std::string context = name + ": " + why;
        INFO(context);
        CHECK(ok);
    }
}

TEST_CASE("square-root split: the first two updates match the radical formula") {
    const ZooEntry e = zoo_build("ex1_good");
    const Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);

    REQUIRE(tr.records.size() >= 3);
    CHECK(tr.records[0].x[0] == 1.0);
    CHECK(tr.records[1].x[0] == doctest::Approx(0.17965204298588821).epsilon(1e-12));
    CHECK(tr.records[2].x[0] == doctest::Approx(0.04330843946003007).epsilon(1e-12));

    // Strict decrease of the iterates and monotone objective down to zero.
    for (std::size_t i = 0; i + 1 < tr.records.size(); ++i) {
        CHECK(tr.records[i + 1].x[0] < tr.records[i].x[0]);
        CHECK(tr.records[i + 1].f <= tr.records[i].f);
    }
    CHECK(tr.records.back().x[0] >= 0.0);
    CHECK(tr.records.back().x[0] < 1e-3);
}

TEST_CASE("quartic valley: frozen first step and tail value") {
    const ZooEntry e = zoo_build("quartic");
    const Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);

    CHECK(tr.status == RunStatus::MaxIters);
    REQUIRE(tr.records.size() == 2001);
    CHECK(tr.records[0].x[0] == 0.5);
    CHECK(tr.records[1].x[0] == doctest::Approx(0.42385379906978327).epsilon(1e-14));
    CHECK(tr.records.back().x[0] == doctest::Approx(0.0158234702603168).epsilon(1e-9));
}

TEST_CASE("flat valley with a reflecting tie-break bounces forever") {
    const ZooEntry e = zoo_build("ex2_oscillate");
    const Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);

    CHECK(tr.status == RunStatus::MaxIters);
    REQUIRE(tr.records.size() == 101);
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        const double want = (i % 2 == 0) ? 0.1 : 0.9;
        CHECK(tr.records[i].x[0] == doctest::Approx(want).epsilon(1e-13));
        CHECK(std::abs(tr.records[i].f) <= 1e-15);
        if (tr.records[i].step_norm)
            CHECK(std::abs(*tr.records[i].step_norm - 0.8) <= 1e-12);
    }
}

TEST_CASE("flat valley with the lowest-point tie-break settles at the left end") {
    const ZooEntry e = zoo_build("ex2_endpoint");
    const Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);

    CHECK(tr.status == RunStatus::FixedPoint);
    CHECK(tr.records.back().x[0] == 0.0);
}

TEST_CASE("the kink objective stalls or escapes depending on the selection") {
    const Trace weak = [] {
        const ZooEntry e = zoo_build("ex3_weak");
        return run_dca(e.problem, e.recommended_x0, e.recommended_config);
    }();
    CHECK(weak.status == RunStatus::FixedPoint);
    CHECK(weak.records.back().x[0] == 0.0);
    CHECK(weak.records.back().f == 0.0);

    const Trace good = [] {
        const ZooEntry e = zoo_build("ex3_good_selection");
        return run_dca(e.problem, e.recommended_x0, e.recommended_config);
    }();
    CHECK(good.records[1].x[0] == -1.0);  // one step to the true minimizer
    CHECK(good.records.back().x[0] == -1.0);
    CHECK(good.records.back().f == -1.0);

    const Trace alt = [] {
        const ZooEntry e = zoo_build("ex3_alt_decomp");
        return run_dca(e.problem, e.recommended_x0, e.recommended_config);
    }();
    CHECK(alt.records[1].x[0] == -1.0);
    CHECK(alt.records.back().f == -1.0);
}

TEST_CASE("recorded optima agree with the oracles") {
    for (const std::string& name : zoo_names()) {
        const ZooEntry e = zoo_build(name);
        if (!e.problem.known_optimum) continue;
        INFO(name);
        CHECK(eval_f(e.problem, e.problem.known_optimum->first) ==
              e.problem.known_optimum->second);
    }
}

TEST_CASE("well-posedness screening separates the two square-root splits") {
    const AssumptionReport bad = check_assumption_b(zoo_build("ex1_bad").problem);
    CHECK_FALSE(bad.subdiff_domain_inclusion);

    const AssumptionReport good = check_assumption_b(zoo_build("ex1_good").problem);
    CHECK(good.subdiff_domain_inclusion);
    CHECK(good.subproblems_solvable);

    const AssumptionReport quartic = check_assumption_b(zoo_build("quartic").problem);
    CHECK(quartic.subdiff_domain_inclusion);
    CHECK(quartic.subproblems_solvable);
}

TEST_CASE("behavior mismatches come with an explanation") {
    const ZooEntry e = zoo_build("quadratic");
    const Trace tr = run_dca(e.problem, vec1(1.0), e.recommended_config);

    std::string why;
    CHECK_FALSE(behavior_satisfied(ExpectedBehavior::diverges(), tr, &why));
    CHECK_FALSE(why.empty());

    why.clear();
    CHECK_FALSE(behavior_satisfied(ExpectedBehavior::converges_to(1.0, 1e-3), tr, &why));
    CHECK(why.find("away from the target") != std::string::npos);
}
