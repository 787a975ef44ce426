#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcakit/dca_engine.hpp"
#include "dcakit/line_fit.hpp"

namespace dcakit {

/// Desingularizing model phi(t) = M * t^(1-theta) on [0, eta), the standard
/// power-law envelope relating value gaps to step sizes near a critical
/// point. theta in (0, 1).
struct KLModel {
    double theta = 0.5;
    double M = 1.0;
    double eta = kInf;

    double phi(double t) const;
    double phi_prime(double t) const;
};

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

/// Outcome of one inequality check over a trace. `worst_margin` is the
/// smallest observed slack (inequality satisfied by this much; negative
/// means violated by that much), `tolerance` the allowance granted at the
/// worst iteration. Pass means worst_margin >= -tolerance everywhere.
struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    double worst_margin = kInf;
    long worst_iter = -1;
    double tolerance = 0;
    std::string note;

    bool failed() const { return status == CheckStatus::Fail; }
};

/// Least-squares calibration of the power-law envelope from a trace:
/// regress log(gap at the next iterate) on log(step size). The slope is
/// 1/theta; the intercept gives the tightest constant c with
/// gap^theta <= c * step, from which the phi-model constant M follows
/// (given a bound L relating steps to subgradient norms).
struct KLFit {
    double theta = 0.5;
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    double envelope_c = 0;  ///< exp(theta * intercept)
    double M = 0;           ///< envelope_c / (L * (1 - theta))
    int points = 0;
    bool theta_clamped = false;

    KLModel model(double eta = kInf) const { return {theta, M, eta}; }
};

struct NonPositiveGap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidReferenceValue : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// f(x_{k+1}) <= f(x_k) for every completed step.
CheckResult check_monotone_descent(const Trace& tr);

/// f(x_k) - f(x_{k+1}) >= (rho/2) * step^2 for k >= 1, plus the telescoped
/// square-summability bound sum step^2 <= 2 (f(x_1) - f_star) / rho when a
/// reference value is available. Skipped when rho <= 0.
CheckResult check_sufficient_descent(const Trace& tr, std::optional<double> f_star);

/// For every N: the smallest step among the first N+1 is at most
/// sqrt(2 (f(x_0) - f_star) / (rho (N+1))), and so is the root-mean-square
/// of those steps. Throws InvalidReferenceValue when f_star exceeds an
/// observed objective value beyond tolerance.
CheckResult check_min_step_bound(const Trace& tr, double f_star);

/// dist(y, subdiff g(x) + normal cone of C at x) + dist(y, subdiff h(x)).
/// Zero exactly at points satisfying the two-set criticality condition.
double criticality_residual(const DCProblem& p, const Vector& x, const Vector& y);

/// Residual at the terminal record. Skipped for runs that did not end at a
/// convergence candidate, and for runs whose subgradients grew unbounded
/// (where the pointwise condition is not meaningful).
CheckResult check_criticality(const DCProblem& p, const Trace& tr);

/// Calibrate the power-law envelope. Throws InsufficientData (fewer than 20
/// usable pairs) or NonPositiveGap (an objective value below f_star beyond
/// tolerance, meaning f_star is not a valid reference).
KLFit estimate_kl_exponent(const Trace& tr, double f_star, double L = 1.0);

/// The three hypotheses of the abstract descent framework, checked on data:
/// h1_values: gaps nonnegative and settling to zero;
/// h2_descent: sufficient descent with modulus rho/2;
/// h3_kl_slope: phi'(gap_k) * (C1 step_k + C2 step_{k-1}) >= 1 - tol,
/// with C1 = 0 and C2 = M L / (1 - theta). h3 is skipped when kl is null.
std::vector<CheckResult> check_descent_framework(const Trace& tr, const KLModel* kl,
                                                 double f_star, double L);

/// The per-step recursion (3/4) step_k <= (1/4) step_{k-1}
/// + (max(C1,C2)/D) (phi(gap_k) - phi(gap_{k+1})) with D = rho/2, plus its
/// telescoped tail bound sum_{k>=N} step_k <= (1/2) step_{N-1}
/// + 2 (max(C1,C2)/D) phi(gap_N) for every N.
CheckResult check_residual_relation(const Trace& tr, const KLModel& kl, double f_star, double L);

/// Flags traces whose tail keeps moving: the spread of the last few iterates
/// must stay below both 100x the median step and half the total spread.
CheckResult check_cauchy_tail(const Trace& tr);

struct DiagnosticReport {
    std::vector<CheckResult> checks;
    std::optional<KLFit> kl;
    std::vector<std::string> notes;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

/// Run every applicable check. The problem pointer enables the criticality
/// check and supplies the step-to-subgradient bound L; f_star_override takes
/// precedence over the trace's recorded reference value.
DiagnosticReport run_diagnostics(const Trace& tr, const DCProblem* p = nullptr,
                                 std::optional<double> f_star_override = {});

}  // namespace dcakit
