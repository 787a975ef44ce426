#pragma once
// Convex-subproblem solvers for the DCA iteration: given y, minimize
// phi(x) = g(x) - <y, x> over the feasible set. Three routes:
//   1. a closed-form solver registered on the problem (exact),
//   2. a 1-D bracketing/bisection solver on the stationarity inclusion
//      0 in dg(x) - y + N_C(x), with flat-argmin detection and tie-breaking,
//   3. projected gradient descent for smooth strongly convex g in n-D.

#include "dcakit/dc_model.hpp"

namespace dcakit {

/// How to pick a point from a flat (interval) argmin set.
enum class TieBreak {
    LowestPoint,           ///< lowest finite point of the interval
    HighestPoint,          ///< highest finite point of the interval
    StayIfCurrentOptimal,  ///< keep the current iterate when it is optimal
    Alternate              ///< reflect the current iterate inside the interval
};

std::string to_string(TieBreak tb);

struct SubsolverConfig {
    double tol = 1e-12;            ///< 1-D stationarity/optimality-gap tolerance
    double tol_multidim = 1e-9;    ///< n-D gradient-mapping tolerance
    int max_inner_iters = 200;     ///< >= 1; per bracketing/bisection/descent phase
    double bracket_expansion = 2.0;
    TieBreak tie_break = TieBreak::LowestPoint;
    bool use_closed_form = true;   ///< allow the registered closed form
};

enum class SubproblemStatus { Solved, NoMinimizer, MaxItersExceeded };

std::string to_string(SubproblemStatus s);

struct SubproblemResult {
    Vector x_next;
    SubproblemStatus status = SubproblemStatus::Solved;
    /// Stationarity residual: distance of 0 to the subdifferential of the
    /// surrogate at x_next when attained there, otherwise a supporting-line
    /// optimality-gap bound. Solved implies certificate <= tol.
    double certificate = 0.0;
    std::string note;
    /// Argmin interval when the solution set was flat (1-D); NaN otherwise.
    double argmin_lo = std::numeric_limits<double>::quiet_NaN();
    double argmin_hi = std::numeric_limits<double>::quiet_NaN();
};

/// Solve argmin { g(x) - <y,x> : x in C }. `current` (the iterate x^k, may be
/// null) seeds the search and feeds the Stay/Alternate tie-breaks; `k` is the
/// step index. Preconditions: y finite and of the problem's dimension.
SubproblemResult solve_subproblem(const DCProblem& p, const Vector& y, const SubsolverConfig& cfg,
                                  const Vector* current = nullptr, long k = 0);

/// One exact DCA update for the square-root model problem with the smooth-kernel
/// decomposition g = x^2/2 - sqrt(x), h = -2 sqrt(x): substituting t = sqrt(x)
/// into the stationarity condition gives the monotone cubic
/// t^3 + t/sqrt(x_k) = 1/2, solved by the radical formula with discriminant
/// 1/16 + (1/(3 sqrt(x_k)))^3 > 0; the next iterate is t^2.
/// Throws std::domain_error for x_k <= 0.
double cardano_update(double x_k);

/// Resolve a point from the argmin interval [lo, hi] (endpoints may be +-inf).
double resolve_tie(double lo, double hi, TieBreak tb, const double* current);

}  // namespace dcakit
