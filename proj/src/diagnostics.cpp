#include "dcakit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dcakit/line_fit.hpp"

namespace dcakit {

namespace {

double slack(double scale, double sub_tol) {
    return 1e-9 + 10.0 * sub_tol * (1.0 + std::abs(scale));
}

std::string fmt_short(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

/// Tracks the iteration with the least slack. An inequality "lhs >= rhs"
/// contributes margin = lhs - rhs and the tolerance granted at that point;
/// the check passes when margin + tolerance >= 0 everywhere.
struct WorstTracker {
    bool any = false;
    double margin = kInf, tol = 0;
    long iter = -1;
    double violation = kInf;

    void add(long k, double m, double t) {
        any = true;
        double v = m + t;
        if (std::isnan(v)) v = -kInf;
        if (v < violation) {
            violation = v;
            margin = m;
            tol = t;
            iter = k;
        }
    }

    void finish(CheckResult& r, const std::string& skip_note = "no applicable iterations") const {
        if (!any) {
            r.status = CheckStatus::Skipped;
            if (r.note.empty()) r.note = skip_note;
            return;
        }
        r.status = violation >= 0 ? CheckStatus::Pass : CheckStatus::Fail;
        r.worst_margin = margin;
        r.worst_iter = iter;
        r.tolerance = tol;
    }
};

}  // namespace

double KLModel::phi(double t) const {
    if (t <= 0) return 0.0;
    return M * std::pow(t, 1.0 - theta);
}

double KLModel::phi_prime(double t) const {
    if (t <= 0) return kInf;
    return M * (1.0 - theta) * std::pow(t, -theta);
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

CheckResult check_monotone_descent(const Trace& tr) {
    CheckResult r;
    r.name = "monotone_descent";
    const double st = tr.config.subsolver.tol;
    WorstTracker w;
    for (const auto& rec : tr.records)
        if (rec.descent_delta) w.add(rec.k, *rec.descent_delta, slack(rec.f, st));
    w.finish(r, "no completed steps");
    return r;
}

CheckResult check_sufficient_descent(const Trace& tr, std::optional<double> f_star) {
    CheckResult r;
    r.name = "sufficient_descent";
    if (tr.rho <= 0) {
        r.note = "needs a positive strong-convexity modulus";
        return r;
    }
    const double st = tr.config.subsolver.tol;
    const double d = tr.rho / 2;
    WorstTracker w;
    double sum_sq = 0;
    bool any_step = false;
    for (const auto& rec : tr.records) {
        if (rec.k < 1 || !rec.step_norm) continue;
        any_step = true;
        const double s = *rec.step_norm;
        sum_sq += s * s;
        w.add(rec.k, *rec.descent_delta - d * s * s, slack(rec.f, st));
    }
    if (f_star && any_step && tr.records.size() >= 2) {
        const double bound = 2.0 * (tr.records[1].f - *f_star) / tr.rho;
        w.add(tr.records.back().k, bound - sum_sq, slack(bound, st));
        r.note = "includes the square-summability bound";
    }
    w.finish(r, "fewer than two completed steps");
    return r;
}

CheckResult check_min_step_bound(const Trace& tr, double f_star) {
    CheckResult r;
    r.name = "min_step_bound";
    if (tr.rho <= 0) {
        r.note = "needs a positive strong-convexity modulus";
        return r;
    }
    const double st = tr.config.subsolver.tol;
    for (const auto& rec : tr.records)
        if (rec.f < f_star - slack(rec.f, st))
            throw InvalidReferenceValue("reference value " + fmt_short(f_star) +
                                        " exceeds the objective at iteration " +
                                        std::to_string(rec.k));
    if (tr.records.empty() || !tr.records[0].step_norm) {
        r.note = "no completed steps";
        return r;
    }
    const double gap0 = extended_sub(tr.records[0].f, f_star);
    WorstTracker w;
    double min_step = kInf, sum_sq = 0;
    long n = 0;
    for (const auto& rec : tr.records) {
        if (!rec.step_norm) break;
        const double s = *rec.step_norm;
        min_step = std::min(min_step, s);
        sum_sq += s * s;
        ++n;
        const double bound = std::sqrt(2.0 * gap0 / (tr.rho * static_cast<double>(n)));
        const double tol = slack(bound, st);
        w.add(rec.k, bound - min_step, tol);
        w.add(rec.k, bound - std::sqrt(sum_sq / static_cast<double>(n)), tol);
    }
    w.finish(r);
    return r;
}

double criticality_residual(const DCProblem& p, const Vector& x, const Vector& y) {
    SubdiffSet dg = p.g.subdiff(x);
    SubdiffSet nc = p.constraint.normal_cone(x);
    const double d1 = SubdiffSet::sum(dg, nc).distance(y);
    const double d2 = p.h.subdiff(x).distance(y);
    return d1 + d2;
}

CheckResult check_criticality(const DCProblem& p, const Trace& tr) {
    CheckResult r;
    r.name = "criticality";
    if (tr.records.empty()) {
        r.note = "empty trace";
        return r;
    }
    if (tr.status != RunStatus::FixedPoint && tr.status != RunStatus::ToleranceHalt &&
        tr.status != RunStatus::MaxIters) {
        r.note = "terminal point is not a convergence candidate (" + status_string(tr.status) + ")";
        return r;
    }
    const StepRecord& last = tr.records.back();
    if (!last.y) {
        r.note = "no subgradient available at the final point";
        return r;
    }
    double y0_norm = last.y->norm();
    for (const auto& rec : tr.records)
        if (rec.y) {
            y0_norm = rec.y->norm();
            break;
        }
    if (last.y->norm() > 100.0 * (1.0 + y0_norm)) {
        r.note = "subgradients grew unbounded along the run; the pointwise condition "
                 "is not meaningful here";
        return r;
    }
    const double residual = criticality_residual(p, last.x, *last.y);
    double last_step = 0;
    for (auto it = tr.records.rbegin(); it != tr.records.rend(); ++it)
        if (it->step_norm) {
            last_step = *it->step_norm;
            break;
        }
    const double tol = std::max(1e-6, 10.0 * last_step);
    r.status = residual <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    r.worst_margin = tol - residual;
    r.worst_iter = last.k;
    r.tolerance = tol;
    r.note = "residual " + fmt_short(residual) + " vs tolerance " + fmt_short(tol);
    return r;
}

KLFit estimate_kl_exponent(const Trace& tr, double f_star, double L) {
    const double st = tr.config.subsolver.tol;
    std::vector<double> xs, ys;
    for (size_t i = 0; i + 1 < tr.records.size(); ++i) {
        if (!tr.records[i].step_norm) continue;
        const double s = *tr.records[i].step_norm;
        const double gap = tr.records[i + 1].f - f_star;
        if (gap < -slack(tr.records[i + 1].f, st))
            throw NonPositiveGap("objective at iteration " + std::to_string(tr.records[i + 1].k) +
                                 " lies below the reference value; the reference is not a "
                                 "lower bound");
        if (gap > 0 && s > 0 && std::isfinite(std::log(gap)) && std::isfinite(std::log(s))) {
            xs.push_back(std::log(s));
            ys.push_back(std::log(gap));
        }
    }
    if (xs.size() < 20)
        throw InsufficientData("power-law calibration needs at least 20 usable pairs, have " +
                               std::to_string(xs.size()));
    const LineFit line = fit_line(xs, ys);
    KLFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r_squared = line.r_squared;
    fit.points = static_cast<int>(xs.size());
    double theta = line.slope > 0 ? 1.0 / line.slope : 1.0;
    fit.theta_clamped = !(theta > 1e-6 && theta < 1.0 - 1e-6);
    fit.theta = std::clamp(theta, 1e-6, 1.0 - 1e-6);
    fit.envelope_c = std::exp(fit.theta * line.intercept);
    fit.M = fit.envelope_c / (L * (1.0 - fit.theta));
    return fit;
}

std::vector<CheckResult> check_descent_framework(const Trace& tr, const KLModel* kl,
                                                 double f_star, double L) {
    const double st = tr.config.subsolver.tol;
    std::vector<CheckResult> out;

    {
        CheckResult h1;
        h1.name = "h1_values";
        WorstTracker w;
        for (const auto& rec : tr.records) w.add(rec.k, rec.f - f_star, slack(rec.f, st));
        if (!tr.records.empty()) {
            const double settle = 1e-6 * (1.0 + std::abs(f_star));
            w.add(tr.records.back().k, settle - (tr.records.back().f - f_star), 0.0);
        }
        w.finish(h1);
        out.push_back(std::move(h1));
    }

    {
        CheckResult h2;
        h2.name = "h2_descent";
        if (tr.rho <= 0) {
            h2.note = "needs a positive strong-convexity modulus";
        } else {
            const double d = tr.rho / 2;
            WorstTracker w;
            for (const auto& rec : tr.records) {
                if (rec.k < 1 || !rec.step_norm) continue;
                const double s = *rec.step_norm;
                w.add(rec.k, *rec.descent_delta - d * s * s, slack(rec.f, st));
            }
            w.finish(h2, "fewer than two completed steps");
        }
        out.push_back(std::move(h2));
    }

    {
        CheckResult h3;
        h3.name = "h3_kl_slope";
        if (!kl) {
            h3.note = "no calibrated power-law envelope";
        } else {
            const double c1 = 0.0;
            const double c2 = kl->M * L / (1.0 - kl->theta);
            WorstTracker w;
            for (size_t i = 1; i < tr.records.size(); ++i) {
                const double s_prev = tr.records[i - 1].step_norm.value_or(0.0);
                const double s_cur = tr.records[i].step_norm.value_or(0.0);
                const double gap = tr.records[i].f - f_star;
                if (gap <= 0 || s_prev <= 0) continue;
                const double product = kl->phi_prime(gap) * (c1 * s_cur + c2 * s_prev);
                w.add(tr.records[i].k, product - 1.0, 0.05);
            }
            w.finish(h3, "no iterations inside the envelope region");
        }
        out.push_back(std::move(h3));
    }
    return out;
}

CheckResult check_residual_relation(const Trace& tr, const KLModel& kl, double f_star, double L) {
    CheckResult r;
    r.name = "residual_relation";
    if (tr.rho <= 0) {
        r.note = "needs a positive strong-convexity modulus";
        return r;
    }
    const double st = tr.config.subsolver.tol;
    const double d = tr.rho / 2;
    const double c = std::max(0.0, kl.M * L / (1.0 - kl.theta));
    WorstTracker w;

    // Per-step recursion.
    for (size_t i = 1; i + 1 < tr.records.size(); ++i) {
        if (!tr.records[i].step_norm || !tr.records[i - 1].step_norm) continue;
        const double s_cur = *tr.records[i].step_norm;
        const double s_prev = *tr.records[i - 1].step_norm;
        const double gap_cur = tr.records[i].f - f_star;
        const double gap_next = tr.records[i + 1].f - f_star;
        if (gap_cur < 0) continue;  // h1 territory
        const double lhs = 0.75 * s_cur;
        const double rhs = 0.25 * s_prev + (c / d) * (kl.phi(gap_cur) - kl.phi(gap_next));
        w.add(tr.records[i].k, rhs - lhs, slack(s_cur + s_prev, st));
    }

    // Telescoped tail bound for every onset N >= 1.
    std::vector<const StepRecord*> steps;
    for (const auto& rec : tr.records)
        if (rec.step_norm) steps.push_back(&rec);
    if (steps.size() >= 2) {
        std::vector<double> suffix(steps.size() + 1, 0.0);
        double max_step = 0;
        for (size_t i = steps.size(); i-- > 0;) {
            suffix[i] = suffix[i + 1] + *steps[i]->step_norm;
            max_step = std::max(max_step, *steps[i]->step_norm);
        }
        for (size_t n = 1; n < steps.size(); ++n) {
            const double gap_n = steps[n]->f - f_star;
            if (gap_n < 0) continue;
            const double rhs = 0.5 * *steps[n - 1]->step_norm + 2.0 * (c / d) * kl.phi(gap_n);
            const double terms = static_cast<double>(steps.size() - n);
            w.add(steps[n]->k, rhs - suffix[n], terms * slack(max_step, st));
        }
    }
    w.finish(r, "needs at least two completed steps");
    return r;
}

CheckResult check_cauchy_tail(const Trace& tr) {
    CheckResult r;
    r.name = "tail_cauchy";
    if (tr.records.size() < 4) {
        r.note = "too few records";
        return r;
    }
    std::vector<double> steps = tr.step_norms();
    if (steps.size() < 3) {
        r.note = "too few completed steps";
        return r;
    }

    auto bbox_diag = [](const std::vector<StepRecord>::const_iterator begin,
                        const std::vector<StepRecord>::const_iterator end) {
        Vector lo = begin->x, hi = begin->x;
        for (auto it = begin; it != end; ++it) {
            lo = lo.cwiseMin(it->x);
            hi = hi.cwiseMax(it->x);
        }
        return (hi - lo).norm();
    };

    const size_t n = tr.records.size();
    const size_t tail = std::max<size_t>(2, (n + 9) / 10);
    const double tail_spread = bbox_diag(tr.records.end() - static_cast<long>(tail),
                                         tr.records.end());
    const double total_spread = bbox_diag(tr.records.begin(), tr.records.end());

    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median_step = sorted[sorted.size() / 2];

    const double m_a = 100.0 * median_step - tail_spread;
    const double m_b = 0.5 * total_spread - tail_spread;
    r.worst_margin = std::min(m_a, m_b);
    r.worst_iter = tr.records.back().k;
    r.tolerance = 0;
    r.status = (m_a >= 0 && m_b >= 0) ? CheckStatus::Pass : CheckStatus::Fail;
    r.note = "tail spread " + fmt_short(tail_spread) + " over the last " + std::to_string(tail) +
             " points (median step " + fmt_short(median_step) + ", total spread " +
             fmt_short(total_spread) + ")";
    return r;
}

bool DiagnosticReport::all_passed() const {
    for (const auto& c : checks)
        if (c.failed()) return false;
    return true;
}

const CheckResult* DiagnosticReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

DiagnosticReport run_diagnostics(const Trace& tr, const DCProblem* p,
                                 std::optional<double> f_star_override) {
    DiagnosticReport rep;
    std::optional<double> f_star = f_star_override ? f_star_override : tr.known_fstar;
    const double L = (p && p->h.grad_lipschitz) ? *p->h.grad_lipschitz : 1.0;

    rep.checks.push_back(check_monotone_descent(tr));
    rep.checks.push_back(check_sufficient_descent(tr, f_star));

    if (f_star) {
        try {
            rep.checks.push_back(check_min_step_bound(tr, *f_star));
        } catch (const InvalidReferenceValue& e) {
            CheckResult r;
            r.name = "min_step_bound";
            r.status = CheckStatus::Fail;
            r.worst_margin = -kInf;
            r.note = e.what();
            rep.checks.push_back(std::move(r));
        }
    } else {
        CheckResult r;
        r.name = "min_step_bound";
        r.note = "no reference objective value";
        rep.checks.push_back(std::move(r));
    }

    if (p) {
        rep.checks.push_back(check_criticality(*p, tr));
    } else {
        CheckResult r;
        r.name = "criticality";
        r.note = "problem oracles unavailable";
        rep.checks.push_back(std::move(r));
    }

    std::optional<KLModel> model;
    if (f_star) {
        try {
            rep.kl = estimate_kl_exponent(tr, *f_star, L);
            model = rep.kl->model();
            rep.notes.push_back("power-law envelope: theta " + fmt_short(rep.kl->theta) +
                                ", M " + fmt_short(rep.kl->M) + ", R^2 " +
                                fmt_short(rep.kl->r_squared) + " from " +
                                std::to_string(rep.kl->points) + " pairs" +
                                (rep.kl->theta_clamped ? " (exponent clamped)" : ""));
        } catch (const InsufficientData& e) {
            rep.notes.push_back(std::string("no envelope calibration: ") + e.what());
        } catch (const NonPositiveGap& e) {
            rep.notes.push_back(std::string("no envelope calibration: ") + e.what());
        }

        auto fw = check_descent_framework(tr, model ? &*model : nullptr, *f_star, L);
        for (auto& c : fw) rep.checks.push_back(std::move(c));

        if (model) {
            rep.checks.push_back(check_residual_relation(tr, *model, *f_star, L));
        } else {
            CheckResult r;
            r.name = "residual_relation";
            r.note = "no calibrated power-law envelope";
            rep.checks.push_back(std::move(r));
        }
    } else {
        rep.notes.push_back("no reference objective value: value-gap checks skipped");
        for (const char* name : {"h1_values", "h2_descent", "h3_kl_slope", "residual_relation"}) {
            CheckResult r;
            r.name = name;
            r.note = "no reference objective value";
            rep.checks.push_back(std::move(r));
        }
    }

    rep.checks.push_back(check_cauchy_tail(tr));
    return rep;
}

}  // namespace dcakit
