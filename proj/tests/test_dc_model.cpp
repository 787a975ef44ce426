#include <cmath>

#include "dcakit/dc_model.hpp"
#include "doctest.h"

using namespace dcakit;

TEST_CASE("extended subtraction dominates with the first operand") {
    CHECK(extended_sub(3.0, 1.0) == 2.0);
    CHECK(extended_sub(kInf, kInf) == kInf);   // g wins when both blow up
    CHECK(extended_sub(kInf, 5.0) == kInf);
    CHECK(extended_sub(2.0, kInf) == -kInf);
    CHECK(extended_sub(-kInf, 7.0) == -kInf);
}

TEST_CASE("interval membership honours open endpoints") {
    IntervalDesc closed{0.0, 1.0, false, false};
    CHECK(closed.contains(0.0));
    CHECK(closed.contains(1.0));
    CHECK_FALSE(closed.contains(-0.1));

    IntervalDesc open{0.0, 1.0, true, true};
    CHECK_FALSE(open.contains(0.0));
    CHECK_FALSE(open.contains(1.0));
    CHECK(open.contains(0.5));
    CHECK_FALSE(open.is_empty());
    CHECK(IntervalDesc{1.0, 0.0, false, false}.is_empty());
    CHECK(IntervalDesc{1.0, 1.0, true, false}.is_empty());

    CHECK(closed.includes(open));
    CHECK_FALSE(open.includes(closed));  // open set cannot include its closure
}

TEST_CASE("region descriptors nest correctly") {
    RegionDesc all = RegionDesc::all_space();
    RegionDesc half = RegionDesc::interval(0, kInf);
    RegionDesc half_open = RegionDesc::interval(0, kInf, /*lo_open=*/true);

    CHECK(all.contains(vec1(-1e300)));
    CHECK(half.contains(vec1(0.0)));
    CHECK_FALSE(half_open.contains(vec1(0.0)));

    CHECK(all.includes(half));
    CHECK(half.includes(half_open));
    CHECK_FALSE(half_open.includes(half));
    CHECK_FALSE(half.includes(all));
}

TEST_CASE("subdifferential sets: projection, minimum norm, distance") {
    SubdiffSet s = SubdiffSet::singleton1(4.0);
    CHECK(s.contains(vec1(4.0)));
    CHECK_FALSE(s.contains(vec1(4.1)));
    CHECK(s.contains(vec1(4.05), 0.1));
    CHECK(s.min_norm_element()[0] == 4.0);
    CHECK(s.distance(vec1(1.0)) == 3.0);

    SubdiffSet b = SubdiffSet::interval(-1.0, 2.0);
    CHECK(b.min_norm_element()[0] == 0.0);
    CHECK(b.project(vec1(5.0))[0] == 2.0);
    CHECK(b.project(vec1(-3.0))[0] == -1.0);
    CHECK(b.distance(vec1(5.0)) == 3.0);

    CHECK(SubdiffSet::interval(1.0, 3.0).min_norm_element()[0] == 1.0);
    CHECK(SubdiffSet::interval(-3.0, -1.0).min_norm_element()[0] == -1.0);

    SubdiffSet e = SubdiffSet::empty(1);
    CHECK(e.is_empty());
    CHECK(e.distance(vec1(0.0)) == kInf);
    CHECK_FALSE(e.contains(vec1(0.0)));

    SubdiffSet unbounded = SubdiffSet::interval(-kInf, 0.0);
    CHECK(unbounded.min_norm_element()[0] == 0.0);
    CHECK(unbounded.contains(vec1(-1e308)));
}

TEST_CASE("subdifferential sets add as intervals") {
    SubdiffSet a = SubdiffSet::interval(-1.0, 1.0);
    SubdiffSet b = SubdiffSet::interval(2.0, 5.0);
    SubdiffSet c = SubdiffSet::sum(a, b);
    CHECK(c.lo()[0] == 1.0);
    CHECK(c.hi()[0] == 6.0);

    SubdiffSet with_cone = SubdiffSet::sum(a, SubdiffSet::interval(0.0, kInf));
    CHECK(with_cone.lo()[0] == -1.0);
    CHECK(with_cone.hi()[0] == kInf);

    CHECK(SubdiffSet::sum(a, SubdiffSet::empty(1)).is_empty());
}

TEST_CASE("selection rules pick the promised member of an interval") {
    SubdiffSet box = SubdiffSet::interval(-2.0, 0.5);

    CHECK(select_from_set(box, SelectionRule::defaults(), 0)[0] == 0.0);  // minimum norm
    CHECK(select_from_set(box, SelectionRule::adversarial_alternate(), 0)[0] == 0.5);
    CHECK(select_from_set(box, SelectionRule::adversarial_alternate(), 1)[0] == -2.0);
    CHECK(select_from_set(box, SelectionRule::fixed_value1(-1.5), 0)[0] == -1.5);
    CHECK(select_from_set(box, SelectionRule::fixed_value1(9.0), 0)[0] == 0.5);  // projected in
    CHECK(select_from_set(box, SelectionRule::negative_side(), 0)[0] == -2.0);

    // Alternating selection falls back to the minimum-norm element rather
    // than returning an infinite endpoint.
    SubdiffSet cone = SubdiffSet::interval(0.0, kInf);
    CHECK(select_from_set(cone, SelectionRule::adversarial_alternate(), 0)[0] == 0.0);

    SubdiffSet single = SubdiffSet::singleton1(3.0);
    CHECK(select_from_set(single, SelectionRule::negative_side(), 0)[0] == 3.0);
    CHECK(select_from_set(single, SelectionRule::fixed_value1(-7.0), 4)[0] == 3.0);
}

TEST_CASE("selection through an oracle throws on an empty subdifferential") {
    ConvexOracle o;
    o.eval = [](const Vector& x) { return x[0] >= 0 ? -std::sqrt(x[0]) : kInf; };
    o.subdiff = [](const Vector& x) {
        if (x[0] > 0) return SubdiffSet::singleton1(-0.5 / std::sqrt(x[0]));
        return SubdiffSet::empty(1);
    };
    CHECK(select_subgradient(o, vec1(1.0), SelectionRule::defaults())[0] == -0.5);
    CHECK_THROWS_AS(select_subgradient(o, vec1(0.0), SelectionRule::defaults()),
                    EmptySubdifferential);
}

TEST_CASE("constraint sets: membership, projection, normal cones") {
    ConstraintSet all = ConstraintSet::all_space(1);
    CHECK(all.contains(vec1(1e308)));
    CHECK(all.normal_cone(vec1(5.0)).contains(vec1(0.0)));
    CHECK_FALSE(all.is_bounded());

    ConstraintSet box = ConstraintSet::box(vec1(-1.0), vec1(2.0));
    CHECK(box.contains(vec1(2.0)));
    CHECK_FALSE(box.contains(vec1(2.1)));
    CHECK(box.project(vec1(5.0))[0] == 2.0);
    CHECK(box.is_bounded());

    SubdiffSet at_interior = box.normal_cone(vec1(0.5));
    CHECK(at_interior.lo()[0] == 0.0);
    CHECK(at_interior.hi()[0] == 0.0);
    SubdiffSet at_lo = box.normal_cone(vec1(-1.0));
    CHECK(at_lo.lo()[0] == -kInf);
    CHECK(at_lo.hi()[0] == 0.0);
    SubdiffSet at_hi = box.normal_cone(vec1(2.0));
    CHECK(at_hi.lo()[0] == 0.0);
    CHECK(at_hi.hi()[0] == kInf);
    CHECK(box.normal_cone(vec1(9.0)).is_empty());

    ConstraintSet half = ConstraintSet::half_line(+1, 0.0);
    CHECK(half.contains(vec1(0.0)));
    CHECK_FALSE(half.contains(vec1(-1e-9)));
    CHECK(half.project(vec1(-2.0))[0] == 0.0);
    CHECK(half.project(vec1(3.0))[0] == 3.0);
    SubdiffSet at_edge = half.normal_cone(vec1(0.0));
    CHECK(at_edge.lo()[0] == -kInf);
    CHECK(at_edge.hi()[0] == 0.0);
    CHECK_FALSE(half.is_bounded());

    IntervalDesc iv = half.as_interval();
    CHECK(iv.lo == 0.0);
    CHECK(iv.hi == kInf);

    ConstraintSet lower = ConstraintSet::half_line(-1, 5.0);  // {x <= 5}
    CHECK(lower.contains(vec1(5.0)));
    CHECK_FALSE(lower.contains(vec1(5.5)));
    CHECK(lower.as_interval().hi == 5.0);
    SubdiffSet upper_cone = lower.normal_cone(vec1(5.0));
    CHECK(upper_cone.lo()[0] == 0.0);
    CHECK(upper_cone.hi()[0] == kInf);
}

TEST_CASE("objective evaluation folds the constraint indicator into g") {
    DCProblem p;
    p.g.eval = [](const Vector& x) { return x[0] * x[0]; };
    p.g.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(2 * x[0]); };
    p.h.eval = [](const Vector&) { return 1.0; };
    p.h.subdiff = [](const Vector&) { return SubdiffSet::singleton1(0.0); };
    p.constraint = ConstraintSet::box(vec1(0.0), vec1(1.0));

    CHECK(eval_f(p, vec1(0.5)) == doctest::Approx(-0.75));
    CHECK(eval_f(p, vec1(2.0)) == kInf);   // outside the constraint

    // When both parts blow up, the convex part dominates: f = +inf.
    p.h.eval = [](const Vector&) { return kInf; };
    CHECK(eval_f(p, vec1(2.0)) == kInf);
    CHECK(eval_f(p, vec1(0.5)) == -kInf);  // finite g minus infinite h
}

TEST_CASE("well-posedness report checks the declared subdifferential domains") {
    DCProblem good;
    good.g.eval = [](const Vector& x) { return x[0] * x[0]; };
    good.g.subdiff = [](const Vector& x) { return SubdiffSet::singleton1(2 * x[0]); };
    good.g.strong_convexity = 2.0;
    good.h.eval = [](const Vector&) { return 0.0; };
    good.h.subdiff = [](const Vector&) { return SubdiffSet::singleton1(0.0); };
    AssumptionReport rep = check_assumption_b(good);
    CHECK(rep.subdiff_domain_inclusion);
    CHECK(rep.subproblems_solvable);

    DCProblem bad = good;
    bad.h.domain_meta.subdiff_domain = RegionDesc::interval(0, kInf, /*lo_open=*/true);
    rep = check_assumption_b(bad);
    CHECK_FALSE(rep.subdiff_domain_inclusion);

    DCProblem weak = good;
    weak.g.strong_convexity = 0.0;
    rep = check_assumption_b(weak);
    CHECK_FALSE(rep.subproblems_solvable);

    // A bounded feasible box rescues solvability without strong convexity.
    weak.constraint = ConstraintSet::box(vec1(0.0), vec1(1.0));
    rep = check_assumption_b(weak);
    CHECK(rep.subproblems_solvable);
}

TEST_CASE("selection rule kinds have stable names") {
    CHECK(to_string(SelectionRule::Kind::Default) == "default");
    CHECK(to_string(SelectionRule::Kind::AdversarialAlternate) == "adversarial_alternate");
    CHECK(to_string(SelectionRule::Kind::FixedValue) == "fixed_value");
    CHECK(to_string(SelectionRule::Kind::NegativeSide) == "negative_side");
}
