#include "dcakit/rate_lab.hpp"

#include <algorithm>
#include <cmath>

#include "dcakit/line_fit.hpp"

namespace dcakit {

namespace {

void validate_power_params(double alpha, double beta) {
    if (!(alpha >= 0) || !(beta > 0))
        throw std::invalid_argument("power hypothesis needs alpha >= 0 and beta > 0");
}

void validate_mixed_params(double a, double b, double c) {
    if (!(a >= 0) || !(b > 0) || !(c >= 0))
        throw std::invalid_argument("mixed hypothesis needs a >= 0, b > 0, c >= 0");
}

/// Steady-state ratio of the mixed hypothesis at b = 1: the positive root of
/// a q^2 + (1 - a + c) q - c = 0, i.e. the q with q = (1-q)(c + a q).
double mixed_steady_ratio(double a, double c) {
    if (a == 0) return c / (1.0 + c);
    const double p = 1.0 - a + c;
    return (-p + std::sqrt(p * p + 4.0 * a * c)) / (2.0 * a);
}

}  // namespace

std::string to_string(RateClass c) {
    switch (c) {
        case RateClass::Finite: return "finite";
        case RateClass::Linear: return "linear";
        case RateClass::Sublinear: return "sublinear";
        case RateClass::Inconclusive: return "inconclusive";
    }
    return "?";
}

RateHypothesis RateHypothesis::next_power(double alpha, double beta) {
    validate_power_params(alpha, beta);
    RateHypothesis h;
    h.kind = Kind::NextPower;
    h.alpha = alpha;
    h.beta = beta;
    return h;
}

RateHypothesis RateHypothesis::current_power(double alpha, double beta) {
    validate_power_params(alpha, beta);
    RateHypothesis h;
    h.kind = Kind::CurrentPower;
    h.alpha = alpha;
    h.beta = beta;
    return h;
}

RateHypothesis RateHypothesis::mixed(double a, double b, double c) {
    validate_mixed_params(a, b, c);
    RateHypothesis h;
    h.kind = Kind::Mixed;
    h.a = a;
    h.b = b;
    h.c = c;
    return h;
}

RateVerdict classify_next_power(double alpha, double beta) {
    validate_power_params(alpha, beta);
    RateVerdict v;
    if (alpha == 0) {
        v.cls = RateClass::Finite;
        v.note = "each step decreases the value by at least 1/beta while it stays positive";
    } else if (alpha <= 1) {
        v.cls = RateClass::Linear;
        v.linear_factor = beta / (1.0 + beta);
        v.note = "valid once values drop to 1 or below";
    } else {
        v.cls = RateClass::Sublinear;
        v.power = 1.0 / (1.0 - alpha);
    }
    return v;
}

RateVerdict classify_current_power(double alpha, double beta) {
    validate_power_params(alpha, beta);
    RateVerdict v;
    if (alpha == 0) {
        v.cls = RateClass::Finite;
        v.note = "each step decreases the value by at least 1/beta while it stays positive";
    } else if (alpha <= 1) {
        if (beta > 1) {
            v.cls = RateClass::Linear;
            v.linear_factor = 1.0 - 1.0 / beta;
            v.note = "valid once values drop to 1 or below";
        } else {
            v.cls = RateClass::Inconclusive;
            v.note = "beta <= 1 forces the next value to zero or below once values are <= 1; "
                     "the linear argument does not apply";
        }
    } else {
        v.cls = RateClass::Sublinear;
        v.power = 1.0 / (1.0 - alpha);
    }
    return v;
}

RateVerdict classify_mixed(double a, double b, double c) {
    validate_mixed_params(a, b, c);
    RateVerdict v;
    if (a + c == 0) {
        v.cls = RateClass::Finite;
        v.note = "the hypothesis forces the value to zero immediately";
        return v;
    }
    if (b >= 1) {
        v.cls = RateClass::Linear;
        v.linear_factor = (a + c) / (1.0 + a + c);
        v.note = "conservative factor, valid once successive differences are 1 or below; "
                 "the extremal ratio at b = 1 is " + std::to_string(mixed_steady_ratio(a, c));
    } else {
        v.cls = RateClass::Sublinear;
        v.power = b / (b - 1.0);
    }
    return v;
}

RateVerdict classify(const RateHypothesis& h) {
    switch (h.kind) {
        case RateHypothesis::Kind::NextPower: return classify_next_power(h.alpha, h.beta);
        case RateHypothesis::Kind::CurrentPower: return classify_current_power(h.alpha, h.beta);
        case RateHypothesis::Kind::Mixed: return classify_mixed(h.a, h.b, h.c);
    }
    return {};
}

bool hypothesis_holds_from(const std::vector<double>& r, const RateHypothesis& h, long onset,
                           double tol) {
    const long n = static_cast<long>(r.size());
    switch (h.kind) {
        case RateHypothesis::Kind::NextPower:
            for (long k = std::max(0L, onset); k + 1 < n; ++k) {
                if (h.alpha == 0 && r[k + 1] == 0) continue;
                const double lhs = std::pow(r[k + 1], h.alpha);
                const double rhs = h.beta * (r[k] - r[k + 1]);
                if (lhs > rhs + tol * (1.0 + lhs + h.beta * r[k])) return false;
            }
            return true;
        case RateHypothesis::Kind::CurrentPower:
            for (long k = std::max(0L, onset); k + 1 < n; ++k) {
                if (h.alpha == 0 && r[k] == 0) continue;
                const double lhs = std::pow(r[k], h.alpha);
                const double rhs = h.beta * (r[k] - r[k + 1]);
                if (lhs > rhs + tol * (1.0 + lhs + h.beta * r[k])) return false;
            }
            return true;
        case RateHypothesis::Kind::Mixed:
            for (long k = std::max(1L, onset); k + 1 < n; ++k) {
                const double lhs = r[k];
                const double rhs = h.c * (r[k - 1] - r[k]) +
                                   h.a * std::pow(r[k] - r[k + 1], h.b);
                if (lhs > rhs + tol * (1.0 + lhs + std::abs(rhs))) return false;
            }
            return true;
    }
    return false;
}

RateVerdict verify_hypothesis(const std::vector<double>& r, const RateHypothesis& h, double tol) {
    RateVerdict v;
    if (r.size() < 3) {
        v.note = "too few values to test the hypothesis";
        return v;
    }
    for (size_t k = 0; k < r.size(); ++k) {
        if (!(r[k] >= -tol))
            throw std::invalid_argument("sequence values must be nonnegative");
        if (k + 1 < r.size() && r[k + 1] > r[k] + tol * (1.0 + std::abs(r[k])))
            throw NotNonincreasing("sequence increases at index " + std::to_string(k + 1));
    }

    // Earliest onset = one past the last violating index.
    const long n = static_cast<long>(r.size());
    long onset = h.kind == RateHypothesis::Kind::Mixed ? 1 : 0;
    for (long k = n - 2; k >= onset; --k) {
        // Test the single index k via a short window (Mixed needs the
        // predecessor too).
        long lo = h.kind == RateHypothesis::Kind::Mixed ? 1 : 0;
        std::vector<double> probe;
        if (h.kind == RateHypothesis::Kind::Mixed && k >= 1)
            probe.assign(r.begin() + (k - 1), r.begin() + std::min<long>(k + 2, n));
        else
            probe.assign(r.begin() + k, r.begin() + std::min<long>(k + 2, n));
        if (!hypothesis_holds_from(probe, h, lo, tol)) {
            onset = k + 1;
            break;
        }
    }

    const long allowed = std::max<long>(2, n / 20);
    if (onset > allowed) {
        v.note = "hypothesis only holds from index " + std::to_string(onset) + " of " +
                 std::to_string(n) + "; too late to classify";
        return v;
    }
    v = classify(h);
    v.onset = onset;
    if (v.cls == RateClass::Finite && h.kind != RateHypothesis::Kind::Mixed)
        v.finite_bound = h.beta * r[static_cast<size_t>(onset)] + static_cast<double>(onset) - 1.0;
    return v;
}

std::vector<double> generate_extremal_sequence(const RateHypothesis& h, double r0, int max_len) {
    if (!(r0 > 0)) throw std::invalid_argument("extremal sequences need r0 > 0");
    if (max_len < 1) return {};
    std::vector<double> r{r0};
    r.reserve(static_cast<size_t>(max_len));

    auto push_or_stop = [&](double v) {
        if (v <= 0) {
            r.push_back(0.0);
            return false;
        }
        r.push_back(v);
        return true;
    };

    switch (h.kind) {
        case RateHypothesis::Kind::NextPower:
            while (static_cast<int>(r.size()) < max_len) {
                const double cur = r.back();
                if (h.alpha == 0) {
                    if (!push_or_stop(cur - 1.0 / h.beta)) break;
                    continue;
                }
                // Solve t^alpha + beta t = beta * cur for t in (0, cur).
                double lo = 0, hi = cur;
                for (int i = 0; i < 200; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (std::pow(mid, h.alpha) + h.beta * mid < h.beta * cur)
                        lo = mid;
                    else
                        hi = mid;
                }
                if (!push_or_stop(0.5 * (lo + hi))) break;
            }
            break;
        case RateHypothesis::Kind::CurrentPower:
            while (static_cast<int>(r.size()) < max_len) {
                const double cur = r.back();
                const double drop = h.alpha == 0 ? 1.0 / h.beta : std::pow(cur, h.alpha) / h.beta;
                if (!push_or_stop(cur - drop)) break;
            }
            break;
        case RateHypothesis::Kind::Mixed: {
            if (h.a + h.c == 0) {
                r.push_back(0.0);
                break;
            }
            if (static_cast<int>(r.size()) < max_len)
                r.push_back(mixed_steady_ratio(h.a, h.c) * r0);
            while (static_cast<int>(r.size()) < max_len) {
                const double cur = r.back();
                const double prev = r[r.size() - 2];
                if (cur <= 0) break;
                if (h.a == 0) {
                    // r_k = c (r_{k-1} - r_k) has no forward unknown; continue
                    // the geometric profile that satisfies it.
                    if (!push_or_stop(cur * (h.c / (1.0 + h.c)))) break;
                    continue;
                }
                const double rhs = cur - h.c * (prev - cur);
                if (rhs <= 0) break;  // equality impossible with a positive difference
                const double d = std::pow(rhs / h.a, 1.0 / h.b);
                if (!push_or_stop(cur - d)) break;
            }
            break;
        }
    }
    return r;
}

EmpiricalRate fit_empirical_rate(const std::vector<double>& r, double burn_in_fraction) {
    if (!(burn_in_fraction >= 0 && burn_in_fraction < 1))
        throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    if (r.empty()) throw InsufficientData("empirical rate fit got an empty sequence");

    EmpiricalRate out;
    const double zero_level = 1e-15 * (1.0 + r[0]);
    if (r.back() <= zero_level) {
        long first = static_cast<long>(r.size()) - 1;
        while (first > 0 && r[static_cast<size_t>(first) - 1] <= zero_level) --first;
        out.cls = RateClass::Finite;
        out.settled_at = first;
        out.note = "numerically zero from index " + std::to_string(first);
        return out;
    }

    std::vector<double> ks, logs;
    const size_t start =
        std::max<size_t>(1, static_cast<size_t>(burn_in_fraction * static_cast<double>(r.size())));
    for (size_t k = start; k < r.size(); ++k)
        if (r[k] > 0) {
            ks.push_back(static_cast<double>(k));
            logs.push_back(std::log(r[k]));
        }
    if (ks.size() < 20)
        throw InsufficientData("empirical rate fit needs at least 20 positive values after "
                               "burn-in, have " +
                               std::to_string(ks.size()));
    const LineFit lin = fit_line(ks, logs);
    std::vector<double> log_ks(ks.size());
    for (size_t i = 0; i < ks.size(); ++i) log_ks[i] = std::log(ks[i]);
    const LineFit pow_fit = fit_line(log_ks, logs);

    if (lin.r_squared >= pow_fit.r_squared) {
        out.cls = RateClass::Linear;
        out.value = std::exp(lin.slope);
        out.r_squared = lin.r_squared;
    } else {
        out.cls = RateClass::Sublinear;
        out.value = pow_fit.slope;
        out.r_squared = pow_fit.r_squared;
    }
    if (out.r_squared < 0.9) {
        out.cls = RateClass::Inconclusive;
        out.note = "neither geometric nor power decay explains the tail well";
    }
    return out;
}

ThetaPrediction predict_rates_from_theta(double theta) {
    if (!(theta >= 0 && theta < 1))
        throw std::domain_error("theta must lie in [0, 1)");
    ThetaPrediction p;
    if (theta == 0) {
        p.value_class = RateClass::Finite;
        p.iterate_class = RateClass::Finite;
    } else if (theta <= 0.5) {
        p.value_class = RateClass::Linear;
        p.iterate_class = RateClass::Linear;
    } else {
        p.value_class = RateClass::Sublinear;
        p.value_power = 1.0 / (1.0 - 2.0 * theta);
        p.iterate_class = RateClass::Sublinear;
        p.iterate_power = (1.0 - theta) / (1.0 - 2.0 * theta);
    }
    return p;
}

}  // namespace dcakit
