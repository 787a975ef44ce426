#include <cmath>

#include "dcakit/problem_zoo.hpp"
#include "dcakit/trace_io.hpp"
#include "doctest.h"

using namespace dcakit;

TEST_CASE("halving run: every record is exact in binary") {
    const ZooEntry e = zoo_build("quadratic");
    Trace tr = run_dca(e.problem, vec1(1.0), e.recommended_config);

    CHECK(tr.status == RunStatus::FixedPoint);
    REQUIRE(tr.records.size() == 48);
    CHECK(tr.iterations() == 47);
    CHECK(tr.problem_name == "quadratic");
    CHECK(tr.rho == 3.0);
    CHECK(tr.known_fstar == 0.0);

    for (std::size_t k = 0; k < tr.records.size(); ++k) {
        const StepRecord& r = tr.records[k];
        CHECK(r.k == static_cast<long>(k));
        CHECK(r.x[0] == std::ldexp(1.0, -static_cast<int>(k)));
        CHECK(r.f == std::ldexp(1.0, -2 * static_cast<int>(k) - 1));
        if (k + 1 < tr.records.size()) {
            REQUIRE(r.step_norm.has_value());
            CHECK(*r.step_norm == std::ldexp(1.0, -static_cast<int>(k) - 1));
            CHECK(*r.descent_delta == 3 * std::ldexp(1.0, -2 * static_cast<int>(k) - 3));
            CHECK(*r.certificate == 0.0);
        } else {
            CHECK_FALSE(r.step_norm.has_value());
            REQUIRE(r.y.has_value());  // terminal subgradient is still selectable
            CHECK((*r.y)[0] == r.x[0]);
        }
    }
}

TEST_CASE("empty-subdifferential breakdown leaves a two-row trace") {
    const ZooEntry e = zoo_build("ex1_bad");
    Trace tr = run_dca(e.problem, vec1(1.0), e.recommended_config);

    CHECK(tr.status == RunStatus::BreakdownEmptySubdifferential);
    CHECK(is_breakdown(tr.status));
    CHECK(tr.breakdown_iter == 1);
    REQUIRE(tr.records.size() == 2);

    CHECK(tr.records[0].x[0] == 1.0);
    REQUIRE(tr.records[0].y.has_value());
    CHECK((*tr.records[0].y)[0] == -0.5);
    CHECK(*tr.records[0].step_norm == 1.0);
    CHECK(tr.records[0].f == 1.5);

    CHECK(tr.records[1].k == 1);
    CHECK(tr.records[1].x[0] == 0.0);
    CHECK(tr.records[1].f == 0.0);
    CHECK_FALSE(tr.records[1].y.has_value());
    CHECK_FALSE(tr.records[1].step_norm.has_value());
}

TEST_CASE("a subproblem without a minimizer stops the run at once") {
    const ZooEntry e = zoo_build("no_solution");
    Trace tr = run_dca(e.problem, e.recommended_x0, e.recommended_config);

    CHECK(tr.status == RunStatus::BreakdownNoMinimizer);
    CHECK(tr.breakdown_iter == 0);
    REQUIRE(tr.records.size() == 1);
    REQUIRE(tr.records[0].y.has_value());
    CHECK((*tr.records[0].y)[0] == 0.0);
    CHECK_FALSE(tr.warnings.empty());
}

TEST_CASE("exponential feedback trips the divergence guard") {
    const ZooEntry e = zoo_build("divergent");
    Trace tr = run_dca(e.problem, vec1(0.0), e.recommended_config);

    CHECK(tr.status == RunStatus::Diverged);
    REQUIRE(tr.records.size() == 5);  // value guard fires when f overflows
    CHECK(tr.records[1].x[0] == 1.0);
    CHECK(tr.records[2].x[0] == doctest::Approx(std::exp(1.0)));
    CHECK_FALSE(tr.records[4].y.has_value());  // subgradient overflowed there
}

TEST_CASE("step-tolerance halt is reported as inconclusive by name") {
    const ZooEntry e = zoo_build("quadratic");
    RunConfig cfg = e.recommended_config;
    cfg.halt_step_tol = 1e-3;
    Trace tr = run_dca(e.problem, vec1(1.0), cfg);

    CHECK(tr.status == RunStatus::ToleranceHalt);
    CHECK(tr.records.size() == 11);
    CHECK(status_string(tr.status) == "tolerance_halt (optimality not guaranteed)");
}

TEST_CASE("the iteration budget caps the trace length") {
    const ZooEntry e = zoo_build("quadratic");
    RunConfig cfg = e.recommended_config;
    cfg.max_iters = 5;
    Trace tr = run_dca(e.problem, vec1(1.0), cfg);

    CHECK(tr.status == RunStatus::MaxIters);
    CHECK(tr.records.size() == 6);
    CHECK(tr.iterations() == 5);
}

TEST_CASE("a run started at the optimum stops as a fixed point") {
    const ZooEntry e = zoo_build("convex_oneshot");
    Trace tr = run_dca(e.problem, vec1(3.0), e.recommended_config);

    CHECK(tr.status == RunStatus::FixedPoint);
    REQUIRE(tr.records.size() == 2);
    CHECK(*tr.records[0].step_norm == 0.0);
    CHECK(tr.records[1].x[0] == 3.0);
}

TEST_CASE("starting where h has no subgradient breaks down immediately") {
    const ZooEntry e = zoo_build("ex1_good");
    Trace tr = run_dca(e.problem, vec1(0.0), e.recommended_config);

    CHECK(tr.status == RunStatus::BreakdownEmptySubdifferential);
    CHECK(tr.breakdown_iter == 0);
    CHECK(tr.records.size() == 1);
    REQUIRE_FALSE(tr.warnings.empty());
    CHECK(tr.warnings[0].find("subdifferential domain") != std::string::npos);
}

TEST_CASE("iterate blow-up without overflow also counts as divergence") {
    DCProblem p;
    p.name = "explode";
    p.g.eval = [](const Vector& x) { return x[0] * x[0] / 2; };
    p.g.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(x[0]); };
    p.g.strong_convexity = 1.0;
    p.closed_form_1d = [](double y) { return ClosedFormResult::at(y); };
    p.h.eval = [](const Vector& x) { return x[0] * x[0]; };
    p.h.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(2 * x[0]); };
    p.h.strong_convexity = 2.0;

    RunConfig cfg;
    cfg.max_iters = 200;
    Trace tr = run_dca(p, vec1(1.0), cfg);
    CHECK(tr.status == RunStatus::Diverged);
    CHECK(tr.records.size() < 40);
}

TEST_CASE("identical runs serialize to identical bytes") {
    const ZooEntry e = zoo_build("ex1_good");
    Trace a = run_dca(e.problem, vec1(1.0), e.recommended_config);
    Trace b = run_dca(e.problem, vec1(1.0), e.recommended_config);
    CHECK(trace_to_json(a) == trace_to_json(b));
    CHECK(trace_to_csv(a) == trace_to_csv(b));
}

TEST_CASE("the trace echoes the configuration it ran with") {
    const ZooEntry e = zoo_build("quadratic");
    RunConfig cfg = e.recommended_config;
    cfg.max_iters = 7;
    cfg.halt_step_tol = 0.5;
    cfg.rule = SelectionRule::adversarial_alternate();
    cfg.subsolver.tie_break = TieBreak::Alternate;
    Trace tr = run_dca(e.problem, vec1(1.0), cfg);

    CHECK(tr.config.max_iters == 7);
    CHECK(tr.config.halt_step_tol == 0.5);
    CHECK(tr.config.rule.kind == SelectionRule::Kind::AdversarialAlternate);
    CHECK(tr.config.subsolver.tie_break == TieBreak::Alternate);
}

TEST_CASE("single steps expose the selected subgradient and subproblem result") {
    const ZooEntry weak = zoo_build("ex3_weak");
    StepOutcome out = dca_step(weak.problem, vec1(0.0), weak.recommended_config, 0);
    REQUIRE(out.y.has_value());
    CHECK((*out.y)[0] == 0.0);
    REQUIRE(out.sub.has_value());
    CHECK(out.sub->status == SubproblemStatus::Solved);

    const ZooEntry bad = zoo_build("ex1_bad");
    out = dca_step(bad.problem, vec1(0.0), bad.recommended_config, 0);
    CHECK_FALSE(out.y.has_value());
    CHECK_FALSE(out.sub.has_value());
}

TEST_CASE("run statuses print stable names") {
    CHECK(status_string(RunStatus::MaxIters) == "max_iters");
    CHECK(status_string(RunStatus::BreakdownEmptySubdifferential) ==
          "breakdown_empty_subdifferential");
    CHECK(status_string(RunStatus::BreakdownNoMinimizer) == "breakdown_no_minimizer");
    CHECK(status_string(RunStatus::Diverged) == "diverged");
    CHECK(status_string(RunStatus::FixedPoint) == "fixed_point");
    CHECK_FALSE(is_breakdown(RunStatus::Diverged));
    CHECK(is_breakdown(RunStatus::BreakdownNoMinimizer));
}
