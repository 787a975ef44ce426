#pragma once
// Core types for difference-of-convex (DC) programs: extended-real arithmetic,
// subdifferential sets, subgradient selection rules, convex-function oracles,
// simple constraint sets, and the DC problem container f = g - h over C.

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcakit {

using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Makes a 1-D vector (most of the toolkit's model problems live on the line).
inline Vector vec1(double t) {
    Vector v(1);
    v[0] = t;
    return v;
}

/// Extended-real subtraction with the convention inf - inf = +inf, so that
/// f = g - h is +inf wherever g is +inf regardless of h.
inline double extended_sub(double a, double b) {
    if (std::isinf(a) && a > 0) return kInf;
    if (std::isinf(b) && b > 0) return -kInf;
    return a - b;
}

/// Thrown when a subgradient is requested at a point with empty subdifferential.
struct EmptySubdifferential : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a set operation is asked for something outside the interval
/// (box) representation this toolkit supports.
struct NotRepresentable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------------------
// Declared domains
// --------------------------------------------------------------------------

/// One coordinate of a declared domain: an interval with open/closed endpoints.
struct IntervalDesc {
    double lo = -kInf;
    double hi = kInf;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double t) const {
        if (t < lo || (lo_open && t == lo)) return false;
        if (t > hi || (hi_open && t == hi)) return false;
        return true;
    }
    /// Set inclusion: does this interval contain `other` entirely?
    bool includes(const IntervalDesc& other) const {
        bool lo_ok = lo < other.lo || (lo == other.lo && (!lo_open || other.lo_open));
        bool hi_ok = hi > other.hi || (hi == other.hi && (!hi_open || other.hi_open));
        return lo_ok && hi_ok;
    }
    bool is_empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
};

/// Declared effective domain of a function or of its subdifferential map.
/// Descriptive metadata, not computed from the oracle: domains of
/// subdifferentials are not computable from black-box evaluations.
struct RegionDesc {
    enum class Kind { AllSpace, Box };
    Kind kind = Kind::AllSpace;
    std::vector<IntervalDesc> coords;  // per coordinate when kind == Box

    static RegionDesc all_space() { return {}; }
    static RegionDesc interval(double lo, double hi, bool lo_open = false, bool hi_open = false) {
        RegionDesc r;
        r.kind = Kind::Box;
        r.coords.push_back({lo, hi, lo_open, hi_open});
        return r;
    }

    bool contains(const Vector& x) const {
        if (kind == Kind::AllSpace) return true;
        assert(static_cast<size_t>(x.size()) == coords.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (!coords[static_cast<size_t>(i)].contains(x[i])) return false;
        return true;
    }
    /// Set inclusion on descriptors: this (as a set) contains `other`.
    bool includes(const RegionDesc& other) const {
        if (kind == Kind::AllSpace) return true;
        if (other.kind == Kind::AllSpace) {
            for (const auto& c : coords)
                if (std::isfinite(c.lo) || std::isfinite(c.hi) || c.lo_open || c.hi_open)
                    return false;
            return true;
        }
        assert(coords.size() == other.coords.size());
        for (size_t i = 0; i < coords.size(); ++i)
            if (!coords[i].includes(other.coords[i])) return false;
        return true;
    }
};

struct DomainMeta {
    RegionDesc domain;          // dom f
    RegionDesc subdiff_domain;  // dom of the subdifferential map (may be smaller)
};

// --------------------------------------------------------------------------
// Subdifferential sets
// --------------------------------------------------------------------------

/// A subdifferential evaluated at a point: empty, a singleton, or a coordinate
/// box (an interval per coordinate; the honest representation for the 1-D
/// problems this toolkit targets). Endpoints may be +-inf.
class SubdiffSet {
public:
    enum class Kind { Empty, Singleton, Box };

    static SubdiffSet empty(int dim) {
        SubdiffSet s;
        s.kind_ = Kind::Empty;
        s.dim_ = dim;
        return s;
    }
    static SubdiffSet singleton(Vector v) {
        SubdiffSet s;
        s.kind_ = Kind::Singleton;
        s.dim_ = static_cast<int>(v.size());
        s.lo_ = v;
        s.hi_ = std::move(v);
        return s;
    }
    static SubdiffSet singleton1(double t) { return singleton(vec1(t)); }
    static SubdiffSet box(Vector lo, Vector hi) {
        assert(lo.size() == hi.size());
        for (Eigen::Index i = 0; i < lo.size(); ++i) assert(lo[i] <= hi[i]);
        SubdiffSet s;
        s.kind_ = Kind::Box;
        s.dim_ = static_cast<int>(lo.size());
        s.lo_ = std::move(lo);
        s.hi_ = std::move(hi);
        return s;
    }
    static SubdiffSet interval(double lo, double hi) { return box(vec1(lo), vec1(hi)); }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_empty() const { return kind_ == Kind::Empty; }
    const Vector& lo() const {
        assert(!is_empty());
        return lo_;
    }
    const Vector& hi() const {
        assert(!is_empty());
        return hi_;
    }

    bool contains(const Vector& v, double tol = 0.0) const {
        if (is_empty()) return false;
        assert(v.size() == lo_.size());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (v[i] < lo_[i] - tol || v[i] > hi_[i] + tol) return false;
        return true;
    }

    /// Nearest point of the set (coordinate-wise clamp). Must not be empty.
    Vector project(const Vector& v) const {
        assert(!is_empty());
        Vector r = v;
        for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = std::clamp(r[i], lo_[i], hi_[i]);
        return r;
    }

    /// Minimum-norm element (clamp of the origin). Must not be empty.
    Vector min_norm_element() const { return project(Vector::Zero(dim_)); }

    /// Euclidean distance from v to the set; +inf when empty.
    double distance(const Vector& v) const {
        if (is_empty()) return kInf;
        return (v - project(v)).norm();
    }

    /// Minkowski sum of two box-representable sets.
    static SubdiffSet sum(const SubdiffSet& a, const SubdiffSet& b) {
        if (a.is_empty() || b.is_empty()) return empty(a.dim());
        assert(a.dim() == b.dim());
        auto add = [](double u, double v) {
            if (std::isinf(u)) return u;
            if (std::isinf(v)) return v;
            return u + v;
        };
        Vector lo(a.dim()), hi(a.dim());
        for (int i = 0; i < a.dim(); ++i) {
            lo[i] = add(a.lo_[i], b.lo_[i]);
            hi[i] = add(a.hi_[i], b.hi_[i]);
        }
        return box(std::move(lo), std::move(hi));
    }

private:
    Kind kind_ = Kind::Empty;
    int dim_ = 0;
    Vector lo_, hi_;
};

// --------------------------------------------------------------------------
// Subgradient selection
// --------------------------------------------------------------------------

/// How y^k is chosen from the (possibly set-valued) subdifferential of h at x^k.
/// Rules are stateless; alternating rules take the step index explicitly.
struct SelectionRule {
    enum class Kind {
        Default,               ///< minimum-norm element of the set
        AdversarialAlternate,  ///< interval endpoints by step parity (hi on even k)
        FixedValue,            ///< a caller-pinned value, projected onto the set
        NegativeSide           ///< lower endpoint: a limiting-gradient selection
                               ///< with -y in the limiting subdifferential of -h
    };
    Kind kind = Kind::Default;
    Vector value;  // FixedValue payload

    static SelectionRule defaults() { return {}; }
    static SelectionRule adversarial_alternate() { return {Kind::AdversarialAlternate, {}}; }
    static SelectionRule fixed_value(Vector v) { return {Kind::FixedValue, std::move(v)}; }
    static SelectionRule fixed_value1(double t) { return fixed_value(vec1(t)); }
    static SelectionRule negative_side() { return {Kind::NegativeSide, {}}; }
};

std::string to_string(SelectionRule::Kind k);

/// Selects a subgradient of `oracle` at x according to `rule`; k is the step
/// index (used by alternating rules). Throws EmptySubdifferential when the
/// subdifferential at x is empty. The returned vector is always a member of
/// the returned set.
Vector select_subgradient(const struct ConvexOracle& oracle, const Vector& x,
                          const SelectionRule& rule, long k = 0);

/// Same selection applied to an already-evaluated set.
Vector select_from_set(const SubdiffSet& set, const SelectionRule& rule, long k);

// --------------------------------------------------------------------------
// Oracles, constraints, problems
// --------------------------------------------------------------------------

/// A proper convex function given by evaluation + subdifferential oracles and
/// declared analytic metadata. eval returns +inf outside the effective domain.
struct ConvexOracle {
    std::function<double(const Vector&)> eval;
    std::function<SubdiffSet(const Vector&)> subdiff;
    double strong_convexity = 0.0;             ///< modulus rho >= 0 (0 = unknown/none)
    std::optional<double> grad_lipschitz;      ///< L for the gradient, when it exists
    DomainMeta domain_meta;
};

/// The closed convex constraint sets the toolkit understands natively. Any
/// other constraint should be folded into g as an indicator.
class ConstraintSet {
public:
    enum class Kind { AllSpace, Box, HalfLine };

    static ConstraintSet all_space(int dim = 1) {
        ConstraintSet c;
        c.kind_ = Kind::AllSpace;
        c.dim_ = dim;
        return c;
    }
    static ConstraintSet box(Vector lo, Vector hi) {
        assert(lo.size() == hi.size());
        ConstraintSet c;
        c.kind_ = Kind::Box;
        c.dim_ = static_cast<int>(lo.size());
        c.lo_ = std::move(lo);
        c.hi_ = std::move(hi);
        return c;
    }
    /// 1-D half-line {x : direction * (x - offset) >= 0}, direction = +-1.
    static ConstraintSet half_line(double direction, double offset) {
        assert(direction == 1.0 || direction == -1.0);
        ConstraintSet c;
        c.kind_ = Kind::HalfLine;
        c.dim_ = 1;
        c.dir_ = direction;
        c.offset_ = offset;
        return c;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    bool contains(const Vector& x, double tol = 0.0) const;
    Vector project(const Vector& x) const;
    /// Normal cone at x as a box set; empty when x is outside the set.
    SubdiffSet normal_cone(const Vector& x) const;
    /// 1-D view for the interval subsolver. Requires dim() == 1.
    IntervalDesc as_interval() const;
    /// True when the set is bounded in every coordinate.
    bool is_bounded() const;

private:
    Kind kind_ = Kind::AllSpace;
    int dim_ = 1;
    Vector lo_, hi_;        // Box
    double dir_ = 1.0;      // HalfLine
    double offset_ = 0.0;   // HalfLine
};

/// Result kinds a registered closed-form subproblem solver can produce.
struct ClosedFormResult {
    enum class Kind { Point, Interval, NoMinimizer };
    Kind kind = Kind::Point;
    double point = 0.0;             // Point
    double lo = 0.0, hi = 0.0;      // Interval (argmin set; endpoints may be +-inf)

    static ClosedFormResult at(double x) { return {Kind::Point, x, x, x}; }
    static ClosedFormResult over(double lo, double hi) { return {Kind::Interval, lo, lo, hi}; }
    static ClosedFormResult no_minimizer() { return {Kind::NoMinimizer, 0, 0, 0}; }
};

/// A DC program: minimize f = g - h + indicator(C). Both g and h are proper
/// closed convex; the indicator of C is folded into g by eval_f.
struct DCProblem {
    std::string name;
    int dimension = 1;
    ConvexOracle g, h;
    ConstraintSet constraint = ConstraintSet::all_space(1);
    std::optional<std::pair<Vector, double>> known_optimum;  // (x*, f*)
    std::optional<double> known_theta;                       // Lojasiewicz exponent, if known
    bool f_continuous_on_domain = true;                      // declared, not verified

    /// Optional exact subproblem solver for argmin_{x in C} g(x) - y*x (1-D).
    /// Returning nullopt defers to the generic solver for that y.
    std::function<std::optional<ClosedFormResult>(double y)> closed_form_1d;

    double rho() const { return g.strong_convexity + h.strong_convexity; }
};

/// f(x) = g(x) + indicator_C(x) - h(x) with the inf - inf = +inf convention.
double eval_f(const DCProblem& p, const Vector& x);

/// Advisory report for the standing assumption that makes DCA well-posed:
/// dom dg is contained in dom dh (checked on declared descriptors) and the
/// convex subproblems admit minimizers (heuristic: strong convexity of g or a
/// bounded feasible box).
struct AssumptionReport {
    bool subdiff_domain_inclusion = false;
    bool subproblems_solvable = false;
    std::string notes;
};

AssumptionReport check_assumption_b(const DCProblem& p);

}  // namespace dcakit
