#include "dcakit/problem_zoo.hpp"

#include <cmath>

#include "dcakit/diagnostics.hpp"
#include "dcakit/subsolvers.hpp"

namespace dcakit {

namespace {

// ---------------------------------------------------------------------------
// Oracle building blocks (all 1-D)
// ---------------------------------------------------------------------------

/// g(x) = w * x^2 / 2, smooth and w-strongly convex.
ConvexOracle quadratic_oracle(double w) {
    ConvexOracle o;
    o.eval = [w](const Vector& x) { return w * x[0] * x[0] / 2; };
    o.subdiff = [w](const Vector& x) { return SubdiffSet::singleton1(w * x[0]); };
    o.strong_convexity = w;
    o.grad_lipschitz = w;
    return o;
}

ConvexOracle zero_oracle() {
    ConvexOracle o;
    o.eval = [](const Vector&) { return 0.0; };
    o.subdiff = [](const Vector& x) { return SubdiffSet::singleton(Vector::Zero(x.size())); };
    o.grad_lipschitz = 0.0;
    return o;
}

/// Real root of t^3 + p t = q (monotone cubic, p > 0), by the radical formula.
double increasing_cubic_root(double p, double q) {
    const double disc = q * q / 4 + p * p * p / 27;
    const double s = std::sqrt(disc);
    return std::cbrt(q / 2 + s) + std::cbrt(q / 2 - s);
}

/// h(x) = max(0, -x): the negative-part function, kinked at 0.
ConvexOracle neg_part_oracle() {
    ConvexOracle o;
    o.eval = [](const Vector& x) { return std::max(0.0, -x[0]); };
    o.subdiff = [](const Vector& x) -> SubdiffSet {
        if (x[0] < 0) return SubdiffSet::singleton1(-1.0);
        if (x[0] == 0) return SubdiffSet::interval(-1, 0);
        return SubdiffSet::singleton1(0.0);
    };
    return o;
}

RunConfig base_config(long max_iters) {
    RunConfig cfg;
    cfg.max_iters = max_iters;
    return cfg;
}

// ---------------------------------------------------------------------------
// Catalog entries
// ---------------------------------------------------------------------------

// Minimize x^2/2 + sqrt(x) over x >= 0 with the split g = x^2/2 (over the
// half-line), h = -sqrt(x). The subdifferential of h is empty at 0, and the
// first subproblem lands exactly there: the iteration cannot continue.
ZooEntry make_ex1_bad() {
    ZooEntry e;
    e.name = "ex1_bad";
    e.summary = "first step lands where h has no subgradient; stops with an "
                "empty-subdifferential breakdown at k=1";

    DCProblem p;
    p.name = e.name;
    p.g = quadratic_oracle(1.0);
    p.h.eval = [](const Vector& x) { return x[0] >= 0 ? -std::sqrt(x[0]) : kInf; };
    p.h.subdiff = [](const Vector& x) {
        if (x[0] > 0) return SubdiffSet::singleton1(-0.5 / std::sqrt(x[0]));
        return SubdiffSet::empty(1);
    };
    p.h.domain_meta.domain = RegionDesc::interval(0, kInf);
    p.h.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.constraint = ConstraintSet::half_line(+1, 0);
    p.known_optimum = {vec1(0.0), 0.0};
    p.closed_form_1d = [](double y) {
        return ClosedFormResult::at(std::max(y, 0.0));
    };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(1.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::breaks_down(RunStatus::BreakdownEmptySubdifferential, 1);
    return e;
}

// The same objective with the repaired split g = x^2/2 - sqrt(x),
// h = -2 sqrt(x): now every subdifferential of g lives where h has one, the
// infinite slope of g at 0 keeps iterates strictly positive, and the run
// settles at the minimizer. Subgradients blow up along the way, which is
// exactly why the terminal criticality residual is screened out.
ZooEntry make_ex1_good() {
    ZooEntry e;
    e.name = "ex1_good";
    e.summary = "repaired split of the ex1_bad objective; converges to 0 with "
                "unbounded subgradients";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) {
        return x[0] >= 0 ? x[0] * x[0] / 2 - std::sqrt(x[0]) : kInf;
    };
    p.g.subdiff = [](const Vector& x) {
        if (x[0] > 0) return SubdiffSet::singleton1(x[0] - 0.5 / std::sqrt(x[0]));
        return SubdiffSet::empty(1);
    };
    p.g.strong_convexity = 1.0;
    p.g.domain_meta.domain = RegionDesc::interval(0, kInf);
    p.g.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.h.eval = [](const Vector& x) { return x[0] >= 0 ? -2 * std::sqrt(x[0]) : kInf; };
    p.h.subdiff = [](const Vector& x) {
        if (x[0] > 0) return SubdiffSet::singleton1(-1.0 / std::sqrt(x[0]));
        return SubdiffSet::empty(1);
    };
    p.h.domain_meta.domain = RegionDesc::interval(0, kInf);
    p.h.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.known_optimum = {vec1(0.0), 0.0};
    // Stationarity x - 1/(2 sqrt(x)) = y substitutes t = sqrt(x) into the
    // monotone cubic t^3 - y t = 1/2; for y < 0 the radical formula applies
    // (for y >= 0 it would hit the three-real-root case, so defer).
    p.closed_form_1d = [](double y) -> std::optional<ClosedFormResult> {
        if (y >= 0) return std::nullopt;
        const double t = increasing_cubic_root(-y, 0.5);
        return ClosedFormResult::at(t * t);
    };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(1.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::converges_to(0.0, 1e-10);
    return e;
}

// g = max(-x, 0, x-1) and h = max(0, -x), both piecewise linear (polyhedral),
// neither strictly nor strongly convex. f = g - h = max(0, x-1), flat on
// (-inf, 1]. For iterates in [0, 1] the selected subgradient is 0, so every
// subproblem minimizes g itself and the argmin is the whole valley [0, 1]:
// the tie-break decides everything.
DCProblem piecewise_flat_problem(const std::string& name) {
    DCProblem p;
    p.name = name;
    p.g.eval = [](const Vector& x) { return std::max({-x[0], 0.0, x[0] - 1}); };
    p.g.subdiff = [](const Vector& x) -> SubdiffSet {
        if (x[0] < 0) return SubdiffSet::singleton1(-1.0);
        if (x[0] == 0) return SubdiffSet::interval(-1, 0);
        if (x[0] < 1) return SubdiffSet::singleton1(0.0);
        if (x[0] == 1) return SubdiffSet::interval(0, 1);
        return SubdiffSet::singleton1(1.0);
    };
    p.h = neg_part_oracle();
    p.known_optimum = {vec1(0.0), 0.0};
    return p;
}

// The reflecting tie-break bounces between 0.1 and 0.9 forever -- the
// objective values are constant (trivially monotone) yet the iterates are not
// Cauchy and the steps are not square-summable. The tail check flags it.
ZooEntry make_ex2_oscillate() {
    ZooEntry e;
    e.name = "ex2_oscillate";
    e.summary = "flat valley of piecewise-linear functions with a reflecting "
                "tie-break: iterates oscillate 0.1 <-> 0.9 without converging";
    e.problem = piecewise_flat_problem(e.name);
    e.recommended_x0 = vec1(0.1);
    e.recommended_config = base_config(100);
    e.recommended_config.subsolver.tie_break = TieBreak::Alternate;
    e.expected = ExpectedBehavior::oscillates();
    return e;
}

// Same functions with the default lowest-point tie-break: lands on the left
// end of the valley after one step and stays.
ZooEntry make_ex2_endpoint() {
    ZooEntry e;
    e.name = "ex2_endpoint";
    e.summary = "flat valley of piecewise-linear functions with the "
                "lowest-point tie-break: settles at 0";
    e.problem = piecewise_flat_problem(e.name);
    e.recommended_x0 = vec1(0.1);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::converges_to(0.0, 1e-15);
    return e;
}

// f(x) = x on [-1, inf), split as g = max(0, x) + indicator of [-1, inf) and
// h = max(0, -x). The point 0 satisfies the two-set criticality condition
// (0 sits in both subdifferentials: [0,1] and [-1,0]) but is not a local
// minimizer: f decreases toward -1. Selecting y = 0 keeps the iteration glued
// to 0; any y in [-1, 0) sends it straight to -1.
DCProblem kink_problem(const std::string& name) {
    DCProblem p;
    p.name = name;
    p.g.eval = [](const Vector& x) { return x[0] >= -1 ? std::max(0.0, x[0]) : kInf; };
    p.g.subdiff = [](const Vector& x) -> SubdiffSet {
        if (x[0] < -1) return SubdiffSet::empty(1);
        if (x[0] == -1) return SubdiffSet::interval(-kInf, 0);
        if (x[0] < 0) return SubdiffSet::singleton1(0.0);
        if (x[0] == 0) return SubdiffSet::interval(0, 1);
        return SubdiffSet::singleton1(1.0);
    };
    p.g.domain_meta.domain = RegionDesc::interval(-1, kInf);
    p.g.domain_meta.subdiff_domain = RegionDesc::interval(-1, kInf);
    p.h = neg_part_oracle();
    p.known_optimum = {vec1(-1.0), -1.0};
    return p;
}

ZooEntry make_ex3_weak() {
    ZooEntry e;
    e.name = "ex3_weak";
    e.summary = "stalls at a critical point that is not a minimizer "
                "(f(0) = 0 while the minimum is f(-1) = -1)";
    e.problem = kink_problem(e.name);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.recommended_config.rule = SelectionRule::fixed_value1(0.0);
    e.recommended_config.subsolver.tie_break = TieBreak::StayIfCurrentOptimal;
    e.expected = ExpectedBehavior::converges_to(0.0, 1e-15);
    return e;
}

// The same objective under a different valid subgradient choice at 0:
// y = -1/2 from [-1, 0) tilts the majorant enough that the next iterate is
// the true minimizer -1. Selection can rescue what criticality cannot.
ZooEntry make_ex3_good_selection() {
    ZooEntry e;
    e.name = "ex3_good_selection";
    e.summary = "same objective as ex3_weak; a different subgradient choice "
                "escapes the spurious critical point and reaches -1";
    e.problem = kink_problem(e.name);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.recommended_config.rule = SelectionRule::fixed_value1(-0.5);
    e.expected = ExpectedBehavior::converges_to(-1.0, 1e-15);
    return e;
}

// Alternative decomposition of the same f: g = x + indicator, h = 0. Now 0 is
// not critical for the decomposition (residual 1), and the iteration marches
// straight to the minimizer.
ZooEntry make_ex3_alt_decomp() {
    ZooEntry e;
    e.name = "ex3_alt_decomp";
    e.summary = "plain decomposition of the ex3 objective: reaches the "
                "minimizer -1 in one step";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) { return x[0] >= -1 ? x[0] : kInf; };
    p.g.subdiff = [](const Vector& x) -> SubdiffSet {
        if (x[0] < -1) return SubdiffSet::empty(1);
        if (x[0] == -1) return SubdiffSet::interval(-kInf, 1);
        return SubdiffSet::singleton1(1.0);
    };
    p.g.domain_meta.domain = RegionDesc::interval(-1, kInf);
    p.g.domain_meta.subdiff_domain = RegionDesc::interval(-1, kInf);
    p.h = zero_oracle();
    p.known_optimum = {vec1(-1.0), -1.0};

    e.problem = std::move(p);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::converges_to(-1.0, 1e-15);
    return e;
}

// g = exp(x), h = 0: the very first subproblem min exp(x) has an infimum (0)
// but no minimizer. The solver detects the unbounded descent direction.
ZooEntry make_no_solution() {
    ZooEntry e;
    e.name = "no_solution";
    e.summary = "first convex subproblem has an infimum but no minimizer; "
                "stops immediately";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) { return std::exp(x[0]); };
    p.g.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(std::exp(x[0])); };
    p.h = zero_oracle();

    e.problem = std::move(p);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::breaks_down(RunStatus::BreakdownNoMinimizer, 0);
    return e;
}

// g = x^2/2, h = exp(x): the update is x_{k+1} = exp(x_k), a tower that
// escapes any bound in a handful of steps while f heads to -inf.
ZooEntry make_divergent() {
    ZooEntry e;
    e.name = "divergent";
    e.summary = "update x -> exp(x); iterates and objective diverge within a "
                "few steps";

    DCProblem p;
    p.name = e.name;
    p.g = quadratic_oracle(1.0);
    p.h.eval = [](const Vector& x) { return std::exp(x[0]); };
    p.h.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(std::exp(x[0])); };
    p.closed_form_1d = [](double y) { return ClosedFormResult::at(y); };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::diverges();
    return e;
}

// g the indicator of the open half-line (0, inf), h = -log x. Every sublevel
// set of f = log x restricted to (0, inf) is bounded, yet the subproblem
// min |y| x over x > 0 approaches its infimum at the open boundary and never
// attains it: level-boundedness of f does not make the subproblems solvable.
ZooEntry make_level_bounded_no_min() {
    ZooEntry e;
    e.name = "level_bounded_no_min";
    e.summary = "level-bounded objective whose first subproblem approaches an "
                "open boundary; no minimizer exists";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) { return x[0] > 0 ? 0.0 : kInf; };
    p.g.subdiff = [](const Vector& x) {
        return x[0] > 0 ? SubdiffSet::singleton1(0.0) : SubdiffSet::empty(1);
    };
    p.g.domain_meta.domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.g.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.h.eval = [](const Vector& x) { return x[0] > 0 ? -std::log(x[0]) : kInf; };
    p.h.subdiff = [](const Vector& x) {
        return x[0] > 0 ? SubdiffSet::singleton1(-1.0 / x[0]) : SubdiffSet::empty(1);
    };
    p.h.domain_meta.domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    p.h.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);

    e.problem = std::move(p);
    e.recommended_x0 = vec1(1.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::breaks_down(RunStatus::BreakdownNoMinimizer, 0);
    return e;
}

// f = x^4/4 via g = x^2/2 + x^4/4, h = x^2/2. The minimizer is degenerate
// (flat fourth-order), the envelope exponent is 3/4, and the iteration is
// sublinear: gaps ~ k^-2, iterates ~ k^-1/2.
ZooEntry make_quartic() {
    ZooEntry e;
    e.name = "quartic";
    e.summary = "degenerate quartic valley: sublinear convergence with "
                "envelope exponent 3/4";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) {
        const double t = x[0];
        return t * t / 2 + t * t * t * t / 4;
    };
    p.g.subdiff = [](const Vector& x) {
        const double t = x[0];
        return SubdiffSet::singleton1(t + t * t * t);
    };
    p.g.strong_convexity = 1.0;
    p.h = quadratic_oracle(1.0);
    p.known_optimum = {vec1(0.0), 0.0};
    p.known_theta = 0.75;
    // Stationarity x + x^3 = y is a monotone cubic with a single real root.
    p.closed_form_1d = [](double y) {
        return ClosedFormResult::at(increasing_cubic_root(1.0, y));
    };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(0.5);
    e.recommended_config = base_config(2000);
    e.expected = ExpectedBehavior::converges_to(0.0, 0.02);
    return e;
}

// f = x^2/2 via g = x^2, h = x^2/2: the update halves x every step, the
// cleanest possible linear convergence (exponent 1/2, exact geometric data).
ZooEntry make_quadratic() {
    ZooEntry e;
    e.name = "quadratic";
    e.summary = "benign quadratic: update halves the iterate, exactly "
                "geometric decay";

    DCProblem p;
    p.name = e.name;
    p.g = quadratic_oracle(2.0);
    p.h = quadratic_oracle(1.0);
    p.known_optimum = {vec1(0.0), 0.0};
    p.known_theta = 0.5;
    p.closed_form_1d = [](double y) { return ClosedFormResult::at(y / 2); };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(1.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::converges_to(0.0, 1e-13);
    return e;
}

// h = 0 reduces the iteration to a single convex solve: jumps to the
// minimizer of g in one step. The min-step bound is tight here at N = 0.
ZooEntry make_convex_oneshot() {
    ZooEntry e;
    e.name = "convex_oneshot";
    e.summary = "plain convex problem (h = 0): solved in one subproblem";

    DCProblem p;
    p.name = e.name;
    p.g.eval = [](const Vector& x) { return (x[0] - 3) * (x[0] - 3) / 2; };
    p.g.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(x[0] - 3); };
    p.g.strong_convexity = 1.0;
    p.g.grad_lipschitz = 1.0;
    p.h = zero_oracle();
    p.known_optimum = {vec1(3.0), 0.0};
    p.known_theta = 0.5;
    p.closed_form_1d = [](double y) { return ClosedFormResult::at(3.0 + y); };

    e.problem = std::move(p);
    e.recommended_x0 = vec1(0.0);
    e.recommended_config = base_config(100);
    e.expected = ExpectedBehavior::converges_to(3.0, 1e-13);
    return e;
}

using Maker = ZooEntry (*)();

struct NamedMaker {
    const char* name;
    Maker make;
};

constexpr NamedMaker kCatalog[] = {
    {"ex1_bad", make_ex1_bad},
    {"ex1_good", make_ex1_good},
    {"ex2_oscillate", make_ex2_oscillate},
    {"ex2_endpoint", make_ex2_endpoint},
    {"ex3_weak", make_ex3_weak},
    {"ex3_good_selection", make_ex3_good_selection},
    {"ex3_alt_decomp", make_ex3_alt_decomp},
    {"no_solution", make_no_solution},
    {"divergent", make_divergent},
    {"level_bounded_no_min", make_level_bounded_no_min},
    {"quartic", make_quartic},
    {"quadratic", make_quadratic},
    {"convex_oneshot", make_convex_oneshot},
};

}  // namespace

ExpectedBehavior ExpectedBehavior::converges_to(double target, double tol) {
    ExpectedBehavior b;
    b.kind = Kind::ConvergesTo;
    b.target = vec1(target);
    b.tol = tol;
    return b;
}

ExpectedBehavior ExpectedBehavior::breaks_down(RunStatus status, long at_iter) {
    ExpectedBehavior b;
    b.kind = Kind::BreaksDown;
    b.breakdown_status = status;
    b.at_iter = at_iter;
    return b;
}

ExpectedBehavior ExpectedBehavior::oscillates() {
    ExpectedBehavior b;
    b.kind = Kind::Oscillates;
    return b;
}

ExpectedBehavior ExpectedBehavior::diverges() {
    ExpectedBehavior b;
    b.kind = Kind::Diverges;
    return b;
}

std::vector<std::string> zoo_names() {
    std::vector<std::string> names;
    for (const auto& m : kCatalog) names.emplace_back(m.name);
    return names;
}

ZooEntry zoo_build(const std::string& name) {
    for (const auto& m : kCatalog)
        if (name == m.name) return m.make();
    throw UnknownName("no catalog problem named '" + name + "'");
}

bool behavior_satisfied(const ExpectedBehavior& expected, const Trace& tr, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (tr.records.empty()) return fail("empty trace");

    switch (expected.kind) {
        case ExpectedBehavior::Kind::ConvergesTo: {
            if (is_breakdown(tr.status) || tr.status == RunStatus::Diverged)
                return fail("run ended with status " + status_string(tr.status));
            const double dist = (tr.records.back().x - expected.target).norm();
            if (dist > expected.tol)
                return fail("final point is " + std::to_string(dist) +
                            " away from the target (allowed " + std::to_string(expected.tol) +
                            ")");
            return true;
        }
        case ExpectedBehavior::Kind::BreaksDown:
            if (tr.status != expected.breakdown_status)
                return fail("expected status " + status_string(expected.breakdown_status) +
                            ", got " + status_string(tr.status));
            if (expected.at_iter >= 0 && tr.breakdown_iter != expected.at_iter)
                return fail("breakdown at iteration " + std::to_string(tr.breakdown_iter) +
                            ", expected " + std::to_string(expected.at_iter));
            return true;
        case ExpectedBehavior::Kind::Oscillates: {
            if (tr.status != RunStatus::MaxIters)
                return fail("expected the iteration budget to run out, got " +
                            status_string(tr.status));
            const CheckResult tail = check_cauchy_tail(tr);
            if (tail.status != CheckStatus::Fail)
                return fail("tail check did not flag oscillation (" + to_string(tail.status) +
                            ")");
            return true;
        }
        case ExpectedBehavior::Kind::Diverges:
            if (tr.status != RunStatus::Diverged)
                return fail("expected divergence, got " + status_string(tr.status));
            return true;
    }
    return fail("unhandled expectation");
}

}  // namespace dcakit
