#include "dcakit/subsolvers.hpp"

#include <algorithm>
#include <cmath>

namespace dcakit {

namespace {

constexpr double kMaxBracket = 1152921504606846976.0;  // 2^60

// Subdifferential interval of phi(x) = g(x) - y*x + indicator(search) at a
// 1-D point, including the normal cone of the (closed) search boundary.
struct DIv {
    double lo = 0, hi = 0;
    bool empty = false;
};

struct Scalar1D {
    const DCProblem& p;
    double y;
    IntervalDesc dom;  // intersection of declared dom g and the constraint

    double phi(double x) const { return p.g.eval(vec1(x)) - y * x; }

    DIv dphi(double x) const {
        SubdiffSet s = p.g.subdiff(vec1(x));
        if (s.is_empty()) return {0, 0, true};
        DIv r{s.lo()[0] - y, s.hi()[0] - y, false};
        if (std::isfinite(dom.lo) && !dom.lo_open && x == dom.lo) r.lo = -kInf;
        if (std::isfinite(dom.hi) && !dom.hi_open && x == dom.hi) r.hi = kInf;
        return r;
    }

    // Stationarity sign: +1 increasing (minimizer left), -1 decreasing
    // (minimizer right), 0 stationary. Empty subdifferentials only occur at
    // domain edges for the supported oracles, where the one-sided slope is
    // infinite and the minimizer lies strictly inside.
    int sigma(double x) const {
        DIv d = dphi(x);
        if (d.empty) {
            if (x <= dom.lo) return -1;
            if (x >= dom.hi) return +1;
            throw std::runtime_error("empty subdifferential inside the domain of g");
        }
        if (d.lo > 0) return +1;
        if (d.hi < 0) return -1;
        return 0;
    }

    double dist0(double x) const {
        DIv d = dphi(x);
        if (d.empty) return kInf;
        if (d.lo > 0) return d.lo;
        if (d.hi < 0) return -d.hi;
        return 0;
    }
};

IntervalDesc region_interval(const RegionDesc& r) {
    if (r.kind == RegionDesc::Kind::AllSpace) return {};
    assert(r.coords.size() == 1);
    return r.coords[0];
}

IntervalDesc intersect(const IntervalDesc& a, const IntervalDesc& b) {
    IntervalDesc r;
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.lo_open = a.lo_open;
    } else if (b.lo > a.lo) {
        r.lo = b.lo;
        r.lo_open = b.lo_open;
    } else {
        r.lo = a.lo;
        r.lo_open = a.lo_open || b.lo_open;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_open = a.hi_open;
    } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.hi_open = b.hi_open;
    } else {
        r.hi = a.hi;
        r.hi_open = a.hi_open || b.hi_open;
    }
    return r;
}

SubproblemResult make_result(double x, SubproblemStatus st, double cert, std::string note = {}) {
    SubproblemResult r;
    r.x_next = vec1(x);
    r.status = st;
    r.certificate = cert;
    r.note = std::move(note);
    return r;
}

// Locate the edge of a flat stationarity region by bisecting the transition
// between a point with sign `outer_sign` and a stationary point. Returns the
// stationary-side end, which is guaranteed to remain in the argmin set.
// Bisects to adjacency (full precision): reflecting tie-breaks compute
// lo + hi - x from these edges, and any slack here would leak into every
// subsequent iterate of a flat problem. The iteration budget covers the worst
// case of an edge at zero reached through the denormal range (~1100 halvings),
// so the loop always exits via the adjacency test.
double flat_edge(const Scalar1D& f, double outer, double inner, int outer_sign) {
    for (int i = 0; i < 1500; ++i) {
        double m = outer + (inner - outer) / 2;
        if (m == outer || m == inner) break;
        if (f.sigma(m) == outer_sign)
            outer = m;
        else
            inner = m;
    }
    return inner;
}

struct FlatScan {
    double edge = 0;
    bool unbounded = false;
    bool hit_iter_cap = false;
    bool via_transition = false;  ///< edge produced by a sign-change bisection
};

// From a stationary point, scan outward (dir = -1 left, +1 right) for the edge
// of the flat argmin region.
FlatScan scan_flat(const Scalar1D& f, double m, int dir, const SubsolverConfig& cfg) {
    FlatScan out;
    double bound = dir < 0 ? f.dom.lo : f.dom.hi;
    bool open = dir < 0 ? f.dom.lo_open : f.dom.hi_open;
    double inner = m;  // sigma == 0 here
    double tol = cfg.tol;

    if (std::isfinite(bound)) {
        if (!open && f.sigma(bound) == 0) {
            out.edge = bound;
            return out;
        }
        // Walk toward the (open or non-stationary) boundary by halving.
        double t = inner;
        for (int i = 0; i < cfg.max_inner_iters; ++i) {
            double nxt = bound + (t - bound) / 2;
            if (nxt == t || std::abs(nxt - bound) <= tol * (1.0 + std::abs(bound))) {
                out.edge = t;  // flat to within tolerance of the boundary
                return out;
            }
            int s = f.sigma(nxt);
            if (s == 0) {
                t = nxt;
                continue;
            }
            out.edge = flat_edge(f, nxt, t, s);
            out.via_transition = true;
            return out;
        }
        out.edge = t;
        out.hit_iter_cap = true;
        return out;
    }

    // Unbounded side: geometric expansion.
    double step = std::max(1.0, std::abs(inner));
    double t = inner;
    for (int i = 0; i < cfg.max_inner_iters; ++i) {
        double nxt = t + dir * step;
        if (std::abs(nxt) > kMaxBracket) {
            out.edge = dir < 0 ? -kInf : kInf;
            out.unbounded = true;
            return out;
        }
        int s = f.sigma(nxt);
        if (s == 0) {
            t = nxt;
            step *= cfg.bracket_expansion;
            continue;
        }
        out.edge = flat_edge(f, nxt, t, s);
        out.via_transition = true;
        return out;
    }
    out.edge = t;
    out.hit_iter_cap = true;
    return out;
}

SubproblemResult finish_flat(const Scalar1D& f, double m, const SubsolverConfig& cfg,
                             const double* current) {
    FlatScan left = scan_flat(f, m, -1, cfg);
    FlatScan right = scan_flat(f, m, +1, cfg);
    double lo = left.edge, hi = right.edge;
    double width = hi - lo;
    double x;
    if (std::isfinite(width) && width <= 10 * cfg.tol * (1.0 + std::abs(lo) + std::abs(hi))) {
        x = lo;  // numerically a singleton; the low edge is stationary and often exact
    } else {
        // A flat argmin region with genuine extent must be entered through a
        // kink: the subdifferential at its edge is a non-degenerate interval
        // containing 0 (polyhedral corner or constraint normal cone). A
        // degenerate {0} at a sign-transition edge means the slope decayed to
        // zero without ever vanishing structurally — an underflowed tail of a
        // strictly monotone objective, so the infimum is approached, not
        // attained. (A smooth function exactly flat on an interval would trip
        // this too, but flats of the supported oracles are polyhedral.)
        auto degenerate = [&](const FlatScan& s) {
            if (!s.via_transition) return false;
            DIv d = f.dphi(s.edge);
            return !d.empty && !(d.hi > d.lo);
        };
        if (degenerate(left) || degenerate(right))
            return make_result(current ? *current : m, SubproblemStatus::NoMinimizer, kInf,
                               "descent direction is unbounded; the infimum is not attained");
        x = resolve_tie(lo, hi, cfg.tie_break, current);
    }
    SubproblemResult r = make_result(x, SubproblemStatus::Solved, f.dist0(x));
    r.argmin_lo = lo;
    r.argmin_hi = hi;
    if (left.hit_iter_cap || right.hit_iter_cap) {
        r.status = SubproblemStatus::MaxItersExceeded;
        r.note = "flat-argmin edge scan hit the iteration cap";
    }
    return r;
}

SubproblemResult solve_1d(const DCProblem& p, double y, const SubsolverConfig& cfg,
                          const double* current) {
    Scalar1D f{p, y, intersect(region_interval(p.g.domain_meta.domain),
                               p.constraint.as_interval())};
    if (f.dom.is_empty())
        throw std::invalid_argument("empty feasible interval for the subproblem");

    // Degenerate single-point interval.
    if (f.dom.lo == f.dom.hi) return make_result(f.dom.lo, SubproblemStatus::Solved, 0.0);

    // Starting point: the current iterate when usable, else an interior point.
    double t0;
    auto strictly_inside = [&](double t) {
        return std::isfinite(t) && t > f.dom.lo && t < f.dom.hi;
    };
    if (current && strictly_inside(*current))
        t0 = *current;
    else if (std::isfinite(f.dom.lo) && std::isfinite(f.dom.hi))
        t0 = f.dom.lo + (f.dom.hi - f.dom.lo) / 2;
    else if (std::isfinite(f.dom.lo))
        t0 = f.dom.lo + 1.0;
    else if (std::isfinite(f.dom.hi))
        t0 = f.dom.hi - 1.0;
    else
        t0 = 0.0;

    int s0 = f.sigma(t0);
    if (s0 == 0) return finish_flat(f, t0, cfg, current);

    // Walk in the descent direction until the sign flips, a stationary point
    // appears, or the problem reveals it has no minimizer.
    int dir = (s0 == +1) ? -1 : +1;  // +1 at t0: minimizer to the left
    double bound = dir < 0 ? f.dom.lo : f.dom.hi;
    bool open = dir < 0 ? f.dom.lo_open : f.dom.hi_open;
    double near = t0;  // most recent point with sign s0
    double far = 0;
    int sfar = s0;

    if (std::isfinite(bound)) {
        if (!open) {
            int sb = f.sigma(bound);
            if (sb == 0) return finish_flat(f, bound, cfg, current);
            if (sb == s0) {
                // The whole interval carries one sign: the closed boundary is
                // the minimizer, and its normal cone certifies it. (Defensive;
                // boundary cones make sigma(bound) != s0 in practice.)
                return make_result(bound, SubproblemStatus::Solved, f.dist0(bound));
            }
            far = bound;
            sfar = sb;
        } else {
            double t = t0;
            bool bracketed = false;
            for (int i = 0; i < cfg.max_inner_iters && !bracketed; ++i) {
                double nxt = bound + (t - bound) / 2;
                if (nxt == t || nxt == bound) break;
                int s = f.sigma(nxt);
                if (s == 0) return finish_flat(f, nxt, cfg, current);
                if (s == s0) {
                    near = nxt;
                    t = nxt;
                    continue;
                }
                far = nxt;
                sfar = s;
                bracketed = true;
            }
            if (!bracketed)
                return make_result(near, SubproblemStatus::NoMinimizer, kInf,
                                   "infimum approached at an open boundary; no minimizer");
        }
    } else {
        double step = std::max(1.0, std::abs(t0));
        double t = t0;
        bool bracketed = false;
        for (int i = 0; i < cfg.max_inner_iters && !bracketed; ++i) {
            double nxt = t + dir * step;
            if (std::abs(nxt) > kMaxBracket)
                return make_result(t, SubproblemStatus::NoMinimizer, kInf,
                                   "descent direction is unbounded; the infimum is not attained");
            int s = f.sigma(nxt);
            if (s == 0) return finish_flat(f, nxt, cfg, current);
            if (s == s0) {
                near = nxt;
                t = nxt;
                step *= cfg.bracket_expansion;
                continue;
            }
            far = nxt;
            sfar = s;
            bracketed = true;
        }
        if (!bracketed)
            return make_result(t, SubproblemStatus::MaxItersExceeded, kInf,
                               "bracketing hit the iteration cap");
    }

    // Bracket [a, b] with sigma(a) = -1, sigma(b) = +1.
    double a = dir < 0 ? far : near;
    double b = dir < 0 ? near : far;
    assert(sfar == -s0);
    (void)sfar;
    for (int i = 0; i < cfg.max_inner_iters; ++i) {
        if (b - a <= cfg.tol * (1.0 + std::abs(a) + std::abs(b))) break;
        double m = a + (b - a) / 2;
        if (m == a || m == b) break;
        int s = f.sigma(m);
        if (s == 0) return finish_flat(f, m, cfg, current);
        if (s < 0)
            a = m;
        else
            b = m;
    }

    // No exact stationary point was observed: the minimizer is a kink inside
    // the collapsed bracket. Certify by value with supporting lines.
    double fa = f.phi(a), fb = f.phi(b);
    double xbest = fa <= fb ? a : b;
    double cert = f.dist0(xbest);
    DIv da = f.dphi(a), db = f.dphi(b);
    double sa = da.empty ? -kInf : da.hi;  // < 0
    double sb = db.empty ? kInf : db.lo;   // > 0
    if (std::isfinite(sa) && std::isfinite(sb) && sb > sa) {
        double xc = (fa - fb + sb * b - sa * a) / (sb - sa);
        xc = std::clamp(xc, a, b);
        double lb = fa + sa * (xc - a);
        cert = std::min(cert, std::max(0.0, std::min(fa, fb) - lb));
    } else {
        cert = std::min(cert, b - a);
    }
    SubproblemStatus st = cert <= cfg.tol ? SubproblemStatus::Solved
                                          : SubproblemStatus::MaxItersExceeded;
    return make_result(xbest, st, cert,
                       st == SubproblemStatus::Solved ? "" : "bisection stalled above tolerance");
}

SubproblemResult solve_pgd(const DCProblem& p, const Vector& y, const SubsolverConfig& cfg,
                           const Vector* current) {
    const int n = p.dimension;
    auto grad = [&](const Vector& x) {
        SubdiffSet s = p.g.subdiff(x);
        if (s.kind() != SubdiffSet::Kind::Singleton)
            throw NotRepresentable("multi-dimensional subproblems require smooth g");
        return Vector(s.lo() - y);
    };
    auto phi = [&](const Vector& x) { return p.g.eval(x) - y.dot(x); };

    Vector x = p.constraint.project(current ? *current : Vector::Zero(n));
    double L = p.g.grad_lipschitz.value_or(0.0);
    double t = L > 0 ? 1.0 / L : 1.0;
    double resid = kInf;
    for (int i = 0; i < cfg.max_inner_iters; ++i) {
        Vector gx = grad(x);
        double fx = phi(x);
        Vector d;
        for (int bt = 0; bt < 60; ++bt) {
            d = p.constraint.project(x - t * gx) - x;
            double quad = fx + gx.dot(d) + d.squaredNorm() / (2 * t);
            if (phi(x + d) <= quad + 1e-15 * (1 + std::abs(quad))) break;
            t *= 0.5;
        }
        x += d;
        resid = d.norm() / t;
        if (resid <= cfg.tol_multidim) {
            SubproblemResult r;
            r.x_next = x;
            r.status = SubproblemStatus::Solved;
            r.certificate = resid;
            return r;
        }
    }
    SubproblemResult r;
    r.x_next = x;
    r.status = SubproblemStatus::MaxItersExceeded;
    r.certificate = resid;
    r.note = "projected gradient descent hit the iteration cap";
    return r;
}

}  // namespace

std::string to_string(TieBreak tb) {
    switch (tb) {
        case TieBreak::LowestPoint: return "lowest";
        case TieBreak::HighestPoint: return "highest";
        case TieBreak::StayIfCurrentOptimal: return "stay";
        case TieBreak::Alternate: return "alternate";
    }
    return "?";
}

std::string to_string(SubproblemStatus s) {
    switch (s) {
        case SubproblemStatus::Solved: return "solved";
        case SubproblemStatus::NoMinimizer: return "no_minimizer";
        case SubproblemStatus::MaxItersExceeded: return "max_iters_exceeded";
    }
    return "?";
}

double resolve_tie(double lo, double hi, TieBreak tb, const double* current) {
    auto inside = [&](double c) { return c >= lo && c <= hi; };
    auto lowest = [&]() {
        if (std::isfinite(lo)) return lo;
        if (current && inside(*current)) return *current;
        return std::isfinite(hi) ? hi : 0.0;
    };
    switch (tb) {
        case TieBreak::LowestPoint:
            return lowest();
        case TieBreak::HighestPoint:
            if (std::isfinite(hi)) return hi;
            if (current && inside(*current)) return *current;
            return std::isfinite(lo) ? lo : 0.0;
        case TieBreak::StayIfCurrentOptimal:
            if (current) return std::clamp(*current, lo, hi);
            return lowest();
        case TieBreak::Alternate:
            if (current && std::isfinite(lo) && std::isfinite(hi))
                return lo + hi - std::clamp(*current, lo, hi);
            return lowest();
    }
    return lowest();
}

SubproblemResult solve_subproblem(const DCProblem& p, const Vector& y, const SubsolverConfig& cfg,
                                  const Vector* current, long k) {
    if (y.size() != p.dimension || !y.allFinite())
        throw std::invalid_argument("subproblem requires a finite y of the problem dimension");
    assert(cfg.max_inner_iters >= 1);
    (void)k;

    if (cfg.use_closed_form && p.closed_form_1d && p.dimension == 1) {
        if (auto r = p.closed_form_1d(y[0])) {
            switch (r->kind) {
                case ClosedFormResult::Kind::NoMinimizer:
                    return make_result(current ? (*current)[0] : 0.0,
                                       SubproblemStatus::NoMinimizer, kInf,
                                       "no minimizer (closed form)");
                case ClosedFormResult::Kind::Point:
                    return make_result(r->point, SubproblemStatus::Solved, 0.0);
                case ClosedFormResult::Kind::Interval: {
                    const double* cur = current ? &(*current)[0] : nullptr;
                    SubproblemResult out = make_result(
                        resolve_tie(r->lo, r->hi, cfg.tie_break, cur),
                        SubproblemStatus::Solved, 0.0);
                    out.argmin_lo = r->lo;
                    out.argmin_hi = r->hi;
                    return out;
                }
            }
        }
    }

    if (p.dimension == 1) {
        const double* cur = current ? &(*current)[0] : nullptr;
        return solve_1d(p, y[0], cfg, cur);
    }
    return solve_pgd(p, y, cfg, current);
}

double cardano_update(double x_k) {
    if (!(x_k > 0))
        throw std::domain_error("cardano_update requires x_k > 0");
    double u = 1.0 / (3.0 * std::sqrt(x_k));
    double delta = 1.0 / 16.0 + u * u * u;
    double s = std::sqrt(delta);
    double t = std::cbrt(0.25 + s) + std::cbrt(0.25 - s);
    return t * t;
}

}  // namespace dcakit
