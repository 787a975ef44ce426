#include "dcakit/dca_engine.hpp"

#include <cmath>
#include <utility>

namespace dcakit {

std::string status_string(RunStatus s) {
    switch (s) {
        case RunStatus::MaxIters: return "max_iters";
        case RunStatus::ToleranceHalt: return "tolerance_halt (optimality not guaranteed)";
        case RunStatus::BreakdownEmptySubdifferential: return "breakdown_empty_subdifferential";
        case RunStatus::BreakdownNoMinimizer: return "breakdown_no_minimizer";
        case RunStatus::Diverged: return "diverged";
        case RunStatus::FixedPoint: return "fixed_point";
    }
    return "?";
}

bool is_breakdown(RunStatus s) {
    return s == RunStatus::BreakdownEmptySubdifferential ||
           s == RunStatus::BreakdownNoMinimizer;
}

std::vector<double> Trace::step_norms() const {
    std::vector<double> out;
    for (const auto& r : records)
        if (r.step_norm) out.push_back(*r.step_norm);
    return out;
}

std::vector<double> Trace::f_values() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.f);
    return out;
}

long Trace::iterations() const {
    long n = 0;
    for (const auto& r : records)
        if (r.step_norm) ++n;
    return n;
}

StepOutcome dca_step(const DCProblem& p, const Vector& x, const RunConfig& cfg, long k) {
    StepOutcome out;
    SubdiffSet dh = p.h.subdiff(x);
    if (dh.is_empty()) return out;
    Vector y = select_from_set(dh, cfg.rule, k);
    out.y = y;
    if (!y.allFinite()) return out;
    out.sub = solve_subproblem(p, y, cfg.subsolver, &x, k);
    return out;
}

Trace run_dca(const DCProblem& p, const Vector& x0, const RunConfig& cfg) {
    Trace tr;
    tr.problem_name = p.name;
    tr.dimension = p.dimension;
    tr.rho = p.rho();
    tr.known_theta = p.known_theta;
    if (p.known_optimum) tr.known_fstar = p.known_optimum->second;
    tr.config = cfg;

    Vector x = x0;
    double fx = eval_f(p, x);
    if (!std::isfinite(fx))
        tr.warnings.push_back("f(x0) is not finite; the run starts outside the feasible set");
    if (!p.h.domain_meta.subdiff_domain.contains(x))
        tr.warnings.push_back(
            "x0 is outside the declared subdifferential domain of h; attempting anyway");

    auto terminal = [&](long k, RunStatus st, const Vector* y_known = nullptr) {
        StepRecord r;
        r.k = k;
        r.x = x;
        r.f = fx;
        if (y_known) {
            r.y = *y_known;
        } else {
            SubdiffSet dh = p.h.subdiff(x);
            if (!dh.is_empty()) {
                Vector y = select_from_set(dh, cfg.rule, k);
                if (y.allFinite()) r.y = std::move(y);
            }
        }
        tr.records.push_back(std::move(r));
        tr.status = st;
    };

    for (long k = 0;; ++k) {
        if (x.norm() > cfg.divergence_guard || fx < -cfg.divergence_guard) {
            terminal(k, RunStatus::Diverged);
            break;
        }
        if (k >= cfg.max_iters) {
            terminal(k, RunStatus::MaxIters);
            break;
        }

        StepOutcome step = dca_step(p, x, cfg, k);
        if (!step.y) {
            tr.breakdown_iter = k;
            terminal(k, RunStatus::BreakdownEmptySubdifferential);
            break;
        }
        if (!step.sub) {
            tr.warnings.push_back("subgradient selection overflowed at iteration " +
                                  std::to_string(k));
            terminal(k, RunStatus::Diverged);
            break;
        }
        if (step.sub->status == SubproblemStatus::NoMinimizer) {
            tr.breakdown_iter = k;
            if (!step.sub->note.empty())
                tr.warnings.push_back("iteration " + std::to_string(k) + ": " + step.sub->note);
            terminal(k, RunStatus::BreakdownNoMinimizer, &*step.y);
            break;
        }
        if (step.sub->status == SubproblemStatus::MaxItersExceeded) {
            tr.warnings.push_back("iteration " + std::to_string(k) +
                                  ": subproblem stopped above tolerance (certificate " +
                                  std::to_string(step.sub->certificate) + ")");
        }

        Vector x_next = step.sub->x_next;
        double f_next = eval_f(p, x_next);
        double snorm = (x_next - x).norm();

        StepRecord r;
        r.k = k;
        r.x = x;
        r.y = std::move(step.y);
        r.f = fx;
        r.step_norm = snorm;
        r.descent_delta = extended_sub(fx, f_next);
        r.certificate = step.sub->certificate;
        tr.records.push_back(std::move(r));

        x = std::move(x_next);
        fx = f_next;

        if (snorm <= cfg.fixed_point_tol * (1.0 + x.norm())) {
            terminal(k + 1, RunStatus::FixedPoint);
            break;
        }
        if (cfg.halt_step_tol && snorm <= *cfg.halt_step_tol * (1.0 + x.norm())) {
            terminal(k + 1, RunStatus::ToleranceHalt);
            break;
        }
    }
    return tr;
}

}  // namespace dcakit
