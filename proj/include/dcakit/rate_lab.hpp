#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcakit/line_fit.hpp"

namespace dcakit {

enum class RateClass { Finite, Linear, Sublinear, Inconclusive };
std::string to_string(RateClass c);

/// A recursive decrease hypothesis on a nonnegative nonincreasing sequence r:
///   NextPower:     r_{k+1}^alpha <= beta * (r_k - r_{k+1})
///   CurrentPower:  r_k^alpha     <= beta * (r_k - r_{k+1})
///   Mixed:         r_k <= c * (r_{k-1} - r_k) + a * (r_k - r_{k+1})^b
/// For alpha = 0 the power hypotheses are asserted only while the powered
/// term is positive (the sequence must hit zero in finitely many steps).
struct RateHypothesis {
    enum class Kind { NextPower, CurrentPower, Mixed };
    Kind kind = Kind::NextPower;
    double alpha = 1.0;
    double beta = 1.0;
    double a = 1.0, b = 1.0, c = 1.0;

    static RateHypothesis next_power(double alpha, double beta);
    static RateHypothesis current_power(double alpha, double beta);
    static RateHypothesis mixed(double a, double b, double c);
};

struct RateVerdict {
    RateClass cls = RateClass::Inconclusive;
    std::optional<double> linear_factor;  ///< q with r_k = O(q^k)
    std::optional<double> power;          ///< p < 0 with r_k = O(k^p)
    std::optional<double> finite_bound;   ///< last index that can be nonzero
    long onset = 0;                       ///< first index the hypothesis held from
    std::string note;
};

struct NotNonincreasing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// What the decrease lemmas guarantee for each hypothesis, by parameters
/// alone. Conservative: the reported linear factors are valid upper bounds,
/// not necessarily the best ones.
RateVerdict classify_next_power(double alpha, double beta);
RateVerdict classify_current_power(double alpha, double beta);
RateVerdict classify_mixed(double a, double b, double c);
RateVerdict classify(const RateHypothesis& h);

/// Does the hypothesis hold at every applicable index >= onset?
/// tol is a relative allowance on each comparison.
bool hypothesis_holds_from(const std::vector<double>& r, const RateHypothesis& h, long onset,
                           double tol);

/// Locate the earliest onset from which the hypothesis holds; when that onset
/// sits within the first 5% of the data (so the hypothesis describes
/// essentially the whole sequence), return the lemma classification, with the
/// finite-stop bound computed from the data for alpha = 0. Throws
/// NotNonincreasing when the data increases beyond tolerance.
RateVerdict verify_hypothesis(const std::vector<double>& r, const RateHypothesis& h,
                              double tol = 1e-9);

/// The sequence that satisfies the hypothesis with equality at every step —
/// the slowest admissible decay. Generation stops at max_len entries or when
/// the sequence reaches zero (the zero is included).
std::vector<double> generate_extremal_sequence(const RateHypothesis& h, double r0, int max_len);

/// Fit from data alone: settled-to-zero, geometric (log r vs k), or power
/// (log r vs log k), whichever explains the tail best.
struct EmpiricalRate {
    RateClass cls = RateClass::Inconclusive;
    double value = 0;  ///< q for Linear, p for Sublinear
    double r_squared = 0;
    long settled_at = -1;  ///< Finite: first index at numerical zero
    std::string note;
};

/// The leading burn_in_fraction of the data is dropped before fitting (the
/// decay laws are asymptotic). Unless the sequence has settled to zero, at
/// least 20 positive post-burn-in values are required; otherwise throws
/// InsufficientData.
EmpiricalRate fit_empirical_rate(const std::vector<double>& r, double burn_in_fraction = 0.2);

/// Rate classes implied by a power-law envelope exponent theta in [0, 1):
/// 0 -> finite stop; (0, 1/2] -> linear; (1/2, 1) -> sublinear with value
/// gaps ~ k^(1/(1-2 theta)) and iterate gaps ~ k^((1-theta)/(1-2 theta)).
struct ThetaPrediction {
    RateClass value_class = RateClass::Inconclusive;
    std::optional<double> value_power;
    RateClass iterate_class = RateClass::Inconclusive;
    std::optional<double> iterate_power;
};
ThetaPrediction predict_rates_from_theta(double theta);

}  // namespace dcakit
