#include "dcakit/dc_model.hpp"

#include <sstream>

namespace dcakit {

std::string to_string(SelectionRule::Kind k) {
    switch (k) {
        case SelectionRule::Kind::Default: return "default";
        case SelectionRule::Kind::AdversarialAlternate: return "adversarial_alternate";
        case SelectionRule::Kind::FixedValue: return "fixed_value";
        case SelectionRule::Kind::NegativeSide: return "negative_side";
    }
    return "?";
}

Vector select_from_set(const SubdiffSet& set, const SelectionRule& rule, long k) {
    if (set.is_empty()) throw EmptySubdifferential("subdifferential is empty");
    switch (rule.kind) {
        case SelectionRule::Kind::Default:
            return set.min_norm_element();
        case SelectionRule::Kind::AdversarialAlternate: {
            // Endpoint by step parity; fall back to the min-norm coordinate when
            // the preferred endpoint is infinite.
            Vector r(set.dim());
            const Vector mn = set.min_norm_element();
            for (int i = 0; i < set.dim(); ++i) {
                double e = (k % 2 == 0) ? set.hi()[i] : set.lo()[i];
                r[i] = std::isfinite(e) ? e : mn[i];
            }
            return r;
        }
        case SelectionRule::Kind::FixedValue: {
            assert(rule.value.size() == set.dim());
            return set.project(rule.value);
        }
        case SelectionRule::Kind::NegativeSide: {
            // Lower endpoint: at a kink of h the limiting subdifferential of -h
            // is {-lo, -hi} of the convex interval, so y = lo satisfies
            // -y in d(-h)(x). Infinite endpoints fall back to min-norm.
            Vector r(set.dim());
            const Vector mn = set.min_norm_element();
            for (int i = 0; i < set.dim(); ++i) {
                double e = set.lo()[i];
                r[i] = std::isfinite(e) ? e : mn[i];
            }
            return r;
        }
    }
    throw std::logic_error("unknown selection rule");
}

Vector select_subgradient(const ConvexOracle& oracle, const Vector& x, const SelectionRule& rule,
                          long k) {
    return select_from_set(oracle.subdiff(x), rule, k);
}

bool ConstraintSet::contains(const Vector& x, double tol) const {
    assert(x.size() == dim_);
    switch (kind_) {
        case Kind::AllSpace: return true;
        case Kind::Box:
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
            return true;
        case Kind::HalfLine: return dir_ * (x[0] - offset_) >= -tol;
    }
    return false;
}

Vector ConstraintSet::project(const Vector& x) const {
    assert(x.size() == dim_);
    switch (kind_) {
        case Kind::AllSpace: return x;
        case Kind::Box: {
            Vector r = x;
            for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = std::clamp(r[i], lo_[i], hi_[i]);
            return r;
        }
        case Kind::HalfLine: {
            Vector r = x;
            if (dir_ * (r[0] - offset_) < 0) r[0] = offset_;
            return r;
        }
    }
    return x;
}

SubdiffSet ConstraintSet::normal_cone(const Vector& x) const {
    assert(x.size() == dim_);
    // Boundary detection snaps within a tiny relative band; iterates produced
    // by the solvers land on boundaries exactly or within rounding of them.
    auto at = [](double t, double b) { return std::abs(t - b) <= 1e-12 * (1.0 + std::abs(b)); };
    switch (kind_) {
        case Kind::AllSpace:
            return SubdiffSet::singleton(Vector::Zero(dim_));
        case Kind::Box: {
            if (!contains(x, 1e-12)) return SubdiffSet::empty(dim_);
            Vector lo(dim_), hi(dim_);
            for (int i = 0; i < dim_; ++i) {
                bool at_lo = std::isfinite(lo_[i]) && at(x[i], lo_[i]);
                bool at_hi = std::isfinite(hi_[i]) && at(x[i], hi_[i]);
                lo[i] = at_lo ? -kInf : 0.0;
                hi[i] = at_hi ? kInf : 0.0;
            }
            return SubdiffSet::box(std::move(lo), std::move(hi));
        }
        case Kind::HalfLine: {
            if (!contains(x, 1e-12)) return SubdiffSet::empty(dim_);
            if (at(x[0], offset_)) {
                return dir_ > 0 ? SubdiffSet::interval(-kInf, 0.0)
                                : SubdiffSet::interval(0.0, kInf);
            }
            return SubdiffSet::singleton1(0.0);
        }
    }
    return SubdiffSet::empty(dim_);
}

IntervalDesc ConstraintSet::as_interval() const {
    if (dim_ != 1) throw NotRepresentable("constraint has no 1-D interval view");
    switch (kind_) {
        case Kind::AllSpace: return {};
        case Kind::Box: return {lo_[0], hi_[0], false, false};
        case Kind::HalfLine:
            return dir_ > 0 ? IntervalDesc{offset_, kInf, false, false}
                            : IntervalDesc{-kInf, offset_, false, false};
    }
    return {};
}

bool ConstraintSet::is_bounded() const {
    if (kind_ != Kind::Box) return false;
    for (int i = 0; i < dim_; ++i)
        if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) return false;
    return true;
}

double eval_f(const DCProblem& p, const Vector& x) {
    assert(x.size() == p.dimension);
    double gval = p.g.eval(x);
    if (!p.constraint.contains(x)) gval = kInf;  // fold the indicator of C into g
    return extended_sub(gval, p.h.eval(x));
}

AssumptionReport check_assumption_b(const DCProblem& p) {
    AssumptionReport r;
    r.subdiff_domain_inclusion =
        p.h.domain_meta.subdiff_domain.includes(p.g.domain_meta.subdiff_domain);

    r.subproblems_solvable = p.g.strong_convexity > 0.0 || p.constraint.is_bounded();

    std::ostringstream os;
    os << "subdifferential-domain inclusion (declared): "
       << (r.subdiff_domain_inclusion ? "holds" : "fails")
       << "; subproblem solvability heuristic: "
       << (r.subproblems_solvable ? "satisfied" : "not established")
       << " (rho_g = " << p.g.strong_convexity << ")";
    r.notes = os.str();
    return r;
}

}  // namespace dcakit
