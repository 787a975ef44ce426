#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcakit/dc_model.hpp"
#include "dcakit/subsolvers.hpp"

namespace dcakit {

/// Options controlling one run of the convex-majorization iteration.
struct RunConfig {
    long max_iters = 100;
    /// Optional early halt when the relative step drops below this value.
    /// Halting this way says nothing about optimality, and the run status
    /// spells that out.
    std::optional<double> halt_step_tol;
    /// Declare divergence when |x| exceeds this or f drops below its negative.
    double divergence_guard = 1e8;
    /// Relative step size below which the iterate counts as a fixed point.
    double fixed_point_tol = 1e-14;
    SelectionRule rule = SelectionRule::defaults();
    SubsolverConfig subsolver;
};

enum class RunStatus {
    MaxIters,                          ///< iteration budget exhausted
    ToleranceHalt,                     ///< step fell below halt_step_tol
    BreakdownEmptySubdifferential,     ///< no subgradient of h at the iterate
    BreakdownNoMinimizer,              ///< the convex subproblem has no minimizer
    Diverged,                          ///< iterates or values escaped the guard
    FixedPoint,                        ///< step numerically zero
};

std::string status_string(RunStatus s);
bool is_breakdown(RunStatus s);

/// One row of a run trace. Rows for completed steps carry the step fields;
/// the final row records only the terminal point (and a subgradient there
/// when one can be selected).
struct StepRecord {
    long k = 0;
    Vector x;
    std::optional<Vector> y;
    double f = 0;
    std::optional<double> step_norm;      ///< |x_{k+1} - x_k|
    std::optional<double> descent_delta;  ///< f(x_k) - f(x_{k+1})
    std::optional<double> certificate;    ///< subproblem optimality certificate
};

/// Complete record of a run: every iterate with its objective value, step
/// size, descent amount, and subproblem certificate, plus enough metadata to
/// re-check the run's inequalities later (convexity modulus, tolerances, the
/// selection rule used, warnings emitted along the way).
struct Trace {
    std::string problem_name;
    int dimension = 1;
    double rho = 0;  ///< combined strong-convexity modulus of g and h
    std::optional<double> known_theta;
    std::optional<double> known_fstar;
    RunConfig config;
    RunStatus status = RunStatus::MaxIters;
    long breakdown_iter = -1;  ///< iteration of the breakdown, or -1
    std::vector<StepRecord> records;
    std::vector<std::string> warnings;

    /// Step norms of the completed steps, in order.
    std::vector<double> step_norms() const;
    /// Objective values of every recorded point, in order.
    std::vector<double> f_values() const;
    /// Number of completed steps.
    long iterations() const;
};

/// One iteration: select a subgradient of h at x, then minimize the convex
/// majorant. y is absent when h has no subgradient at x; sub is absent when
/// the selected subgradient is not finite (an overflow, treated as
/// divergence by the driver).
struct StepOutcome {
    std::optional<Vector> y;
    std::optional<SubproblemResult> sub;
};

StepOutcome dca_step(const DCProblem& p, const Vector& x, const RunConfig& cfg, long k);

/// Run the iteration from x0 until a stopping condition fires. Breakdowns
/// and divergence are reported as trace statuses, never exceptions.
Trace run_dca(const DCProblem& p, const Vector& x0, const RunConfig& cfg = {});

}  // namespace dcakit
