// dcakit: run catalog problems, diagnose traces, classify decrease rates.
//
// Exit codes: 0 success (including runs that end in a reproduced breakdown —
// those are the documented behavior of their problems), 1 diagnose found a
// failing check, 2 bad input (unknown problem, malformed trace or parameters).
//
// The environment variable DCAKIT_SEED is reserved for future stochastic
// components; nothing in this version reads it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcakit/diagnostics.hpp"
#include "dcakit/problem_zoo.hpp"
#include "dcakit/rate_lab.hpp"
#include "dcakit/trace_io.hpp"
#include "json.hpp"

namespace {

using namespace dcakit;
using nlohmann::ordered_json;

ordered_json encode_number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

struct RunArgs {
    std::string problem;
    std::optional<double> x0;
    std::optional<long> iters;
    std::optional<double> halt_tol;
    std::optional<std::string> rule;
    std::optional<double> rule_value;
    std::optional<std::string> tie;
    std::string out;
    std::string config;
};

/// Merge a flat key=value config file into the run arguments. Keys are the
/// long option names without the leading dashes ('_' is accepted for '-');
/// blank lines and '#' comments are skipped. An option already given on the
/// command line keeps its value — flags always win over the file.
int apply_run_config(const std::string& path, const CLI::App& run, RunArgs& a) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    static const std::set<std::string> known = {"problem", "x0",         "iters", "halt-tol",
                                                "rule",    "rule-value", "tie",   "out"};
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };

    std::istringstream lines(text);
    std::string line;
    long lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const std::string entry = trim(line);
        if (entry.empty() || entry.front() == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: %s:%ld: expected key=value\n", path.c_str(), lineno);
            return 2;
        }
        std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        if (!known.contains(key)) {
            std::fprintf(stderr, "error: %s:%ld: unknown key '%s'\n", path.c_str(), lineno,
                         key.c_str());
            return 2;
        }
        if (run.count("--" + key) > 0) continue;

        auto as_double = [&](const std::string& v) {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
            return d;
        };
        auto as_long = [&](const std::string& v) {
            std::size_t used = 0;
            const long n = std::stol(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
            return n;
        };
        try {
            if (key == "problem") a.problem = value;
            else if (key == "x0") a.x0 = as_double(value);
            else if (key == "iters") a.iters = as_long(value);
            else if (key == "halt-tol") a.halt_tol = as_double(value);
            else if (key == "rule") a.rule = value;
            else if (key == "rule-value") a.rule_value = as_double(value);
            else if (key == "tie") a.tie = value;
            else a.out = value;
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: %s:%ld: cannot parse '%s' as a value for '%s'\n",
                         path.c_str(), lineno, value.c_str(), key.c_str());
            return 2;
        }
    }
    return 0;
}

int cmd_run(const RunArgs& a) {
    ZooEntry entry;
    try {
        entry = zoo_build(a.problem);
    } catch (const UnknownName& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    RunConfig cfg = entry.recommended_config;
    if (a.iters) cfg.max_iters = *a.iters;
    if (a.halt_tol) cfg.halt_step_tol = *a.halt_tol;
    try {
        if (a.rule) {
            Vector v;
            const Vector* vp = nullptr;
            if (*a.rule == "fixed_value") {
                if (!a.rule_value) {
                    std::fprintf(stderr, "error: --rule fixed_value needs --rule-value\n");
                    return 2;
                }
                v = vec1(*a.rule_value);
                vp = &v;
            }
            cfg.rule = selection_rule_from_strings(*a.rule, vp);
        }
        if (a.tie) cfg.subsolver.tie_break = tie_break_from_string(*a.tie);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    const Vector x0 = a.x0 ? vec1(*a.x0) : entry.recommended_x0;
    const Trace tr = run_dca(entry.problem, x0, cfg);

    const std::string base = a.out.empty() ? a.problem + "_trace" : a.out;
    try {
        write_text_file(base + ".csv", trace_to_csv(tr));
        write_text_file(base + ".json", trace_to_json(tr));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    const StepRecord& last = tr.records.back();
    const double where = tr.dimension == 1 ? last.x[0] : last.x.norm();
    std::printf("%s: %s after %ld completed steps\n", a.problem.c_str(),
                status_string(tr.status).c_str(), tr.iterations());
    std::printf("final %s = %.10g, f = %.10g\n", tr.dimension == 1 ? "x" : "|x|", where, last.f);
    for (const std::string& w : tr.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("wrote %s.csv and %s.json\n", base.c_str(), base.c_str());
    return 0;
}

struct DiagnoseArgs {
    std::string trace_path;
    std::optional<double> rho;
    std::optional<double> fstar;
    std::optional<double> theta;
    std::string json_out;
};

int cmd_diagnose(const DiagnoseArgs& a) {
    Trace tr;
    try {
        const std::string text = read_text_file(a.trace_path);
        if (a.trace_path.size() >= 5 && a.trace_path.ends_with(".json")) {
            tr = trace_from_json(text);
        } else {
            tr = trace_from_csv(text);
            // A run writes a CSV/JSON pair; when the JSON sibling is present,
            // prefer it — it carries the metadata CSV cannot (status, config,
            // modulus, subgradients).
            std::string sibling = a.trace_path;
            if (sibling.ends_with(".csv")) sibling.resize(sibling.size() - 4);
            sibling += ".json";
            if (std::filesystem::exists(sibling)) tr = trace_from_json(read_text_file(sibling));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    if (a.rho) tr.rho = *a.rho;
    if (a.theta) tr.known_theta = *a.theta;

    std::optional<ZooEntry> entry;
    if (!tr.problem_name.empty()) {
        try {
            entry = zoo_build(tr.problem_name);
        } catch (const UnknownName&) {
            // A trace of a problem built outside the catalog: diagnose on the
            // numbers alone.
        }
    }

    DiagnosticReport rep;
    try {
        rep = run_diagnostics(tr, entry ? &entry->problem : nullptr, a.fstar);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    std::printf("trace: %s, %zu records, %ld completed steps, status %s, rho %g\n",
                tr.problem_name.empty() ? "(unnamed)" : tr.problem_name.c_str(),
                tr.records.size(), tr.iterations(), status_string(tr.status).c_str(), tr.rho);
    if (rep.kl)
        std::printf("envelope: theta %.4f, R^2 %.4f, %d points%s\n", rep.kl->theta,
                    rep.kl->r_squared, rep.kl->points, rep.kl->theta_clamped ? " (clamped)" : "");
    for (const std::string& n : rep.notes) std::printf("note: %s\n", n.c_str());
    std::printf("%-20s %-8s %13s %10s  %s\n", "check", "status", "worst margin", "tolerance",
                "note");
    for (const CheckResult& c : rep.checks)
        std::printf("%-20s %-8s %13.4g %10.2g  %s\n", c.name.c_str(),
                    to_string(c.status).c_str(), c.worst_margin, c.tolerance, c.note.c_str());
    std::printf(rep.all_passed() ? "all checks passed\n" : "CHECK FAILURES present\n");

    if (!a.json_out.empty()) {
        ordered_json j;
        j["trace"] = {{"problem", tr.problem_name},
                      {"records", tr.records.size()},
                      {"status", status_string(tr.status)},
                      {"rho", encode_number(tr.rho)}};
        if (rep.kl)
            j["envelope"] = {{"theta", rep.kl->theta},
                             {"slope", rep.kl->slope},
                             {"intercept", rep.kl->intercept},
                             {"r_squared", rep.kl->r_squared},
                             {"envelope_c", rep.kl->envelope_c},
                             {"M", rep.kl->M},
                             {"points", rep.kl->points},
                             {"theta_clamped", rep.kl->theta_clamped}};
        j["checks"] = ordered_json::array();
        for (const CheckResult& c : rep.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"status", to_string(c.status)},
                                   {"worst_margin", encode_number(c.worst_margin)},
                                   {"worst_iter", c.worst_iter},
                                   {"tolerance", encode_number(c.tolerance)},
                                   {"note", c.note}});
        j["notes"] = rep.notes;
        j["all_passed"] = rep.all_passed();
        try {
            write_text_file(a.json_out, j.dump(2) + "\n");
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
        std::printf("wrote %s\n", a.json_out.c_str());
    }
    return rep.all_passed() ? 0 : 1;
}

struct RatesArgs {
    std::optional<double> theta;
    std::optional<std::string> form;
    std::optional<double> alpha, beta;
    std::optional<double> a, b, c;
    std::optional<int> generate;
    double r0 = 1.0;
};

void print_verdict(const RateVerdict& v) {
    switch (v.cls) {
        case RateClass::Finite:
            std::printf("classification: finite stop");
            if (v.finite_bound) std::printf(" (no nonzero entries past index %g)", *v.finite_bound);
            break;
        case RateClass::Linear:
            std::printf("classification: linear, factor %.10g", *v.linear_factor);
            break;
        case RateClass::Sublinear:
            std::printf("classification: sublinear, r_k = O(k^%g)", *v.power);
            break;
        case RateClass::Inconclusive:
            std::printf("classification: inconclusive");
            break;
    }
    if (v.onset > 0) std::printf(", from index %ld", v.onset);
    if (!v.note.empty()) std::printf(" -- %s", v.note.c_str());
    std::printf("\n");
}

int cmd_rates(const RatesArgs& a) {
    try {
        if (a.theta) {
            const ThetaPrediction p = predict_rates_from_theta(*a.theta);
            auto describe = [](RateClass cls, const std::optional<double>& power) {
                if (cls == RateClass::Finite) return std::string("finite stop");
                if (cls == RateClass::Linear) return std::string("linear (geometric decay)");
                return "sublinear, O(k^" + std::to_string(*power) + ")";
            };
            std::printf("value gaps: %s\n", describe(p.value_class, p.value_power).c_str());
            std::printf("iterates:   %s\n", describe(p.iterate_class, p.iterate_power).c_str());
            return 0;
        }
        if (!a.form) {
            std::fprintf(stderr, "error: give either --theta or --form with its parameters\n");
            return 2;
        }
        RateHypothesis h;
        if (*a.form == "mixed") {
            if (!a.a || !a.b || !a.c) {
                std::fprintf(stderr, "error: --form mixed needs --a, --b and --c\n");
                return 2;
            }
            h = RateHypothesis::mixed(*a.a, *a.b, *a.c);
        } else {
            if (!a.alpha || !a.beta) {
                std::fprintf(stderr, "error: --form %s needs --alpha and --beta\n",
                             a.form->c_str());
                return 2;
            }
            h = *a.form == "next" ? RateHypothesis::next_power(*a.alpha, *a.beta)
                                  : RateHypothesis::current_power(*a.alpha, *a.beta);
        }
        print_verdict(classify(h));
        if (a.generate) {
            const std::vector<double> r = generate_extremal_sequence(h, a.r0, *a.generate);
            std::printf("extremal sequence:");
            for (double v : r) std::printf(" %.12g", v);
            std::printf("\n");
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

int cmd_zoo() {
    for (const std::string& name : zoo_names()) {
        const ZooEntry e = zoo_build(name);
        std::printf("%-22s %s\n", name.c_str(), e.summary.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcakit: difference-of-convex runs, trace diagnostics, rate classification"};
    app.require_subcommand(1);
    app.footer("DCAKIT_SEED is reserved for future stochastic components (currently ignored).");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run a catalog problem and write its trace");
    run->add_option("--problem", run_args.problem, "catalog problem name (see `dcakit zoo`)");
    run->add_option("--x0", run_args.x0, "starting point (default: the catalog recommendation)");
    run->add_option("--iters", run_args.iters, "iteration budget");
    run->add_option("--halt-tol", run_args.halt_tol, "relative step size for an early halt");
    run->add_option("--rule", run_args.rule, "subgradient selection rule")
        ->check(CLI::IsMember({"default", "adversarial_alternate", "fixed_value",
                               "negative_side"}));
    run->add_option("--rule-value", run_args.rule_value, "pinned value for --rule fixed_value");
    run->add_option("--tie", run_args.tie, "tie break on flat subproblem solution sets")
        ->check(CLI::IsMember({"lowest", "highest", "stay", "alternate"}));
    run->add_option("--out", run_args.out,
                    "output basename; writes <out>.csv and <out>.json "
                    "(default: <problem>_trace)");
    run->add_option("--config", run_args.config,
                    "flat key=value file with these option names; "
                    "command-line flags take precedence");

    DiagnoseArgs diag_args;
    CLI::App* diagnose =
        app.add_subcommand("diagnose", "re-check every inequality a trace should satisfy");
    diagnose->add_option("trace", diag_args.trace_path, "trace file (.csv or .json)")->required();
    diagnose->add_option("--rho", diag_args.rho, "override the strong-convexity modulus");
    diagnose->add_option("--fstar", diag_args.fstar, "override the reference objective value");
    diagnose->add_option("--theta", diag_args.theta, "declare a known envelope exponent");
    diagnose->add_option("--json", diag_args.json_out, "write the full report as JSON here");

    RatesArgs rates_args;
    CLI::App* rates =
        app.add_subcommand("rates", "classify a decrease hypothesis or an envelope exponent");
    rates->add_option("--theta", rates_args.theta,
                      "envelope exponent in [0,1): print the implied decay rates");
    rates->add_option("--form", rates_args.form, "decrease hypothesis form")
        ->check(CLI::IsMember({"next", "current", "mixed"}));
    rates->add_option("--alpha", rates_args.alpha, "power on the decrease hypothesis");
    rates->add_option("--beta", rates_args.beta, "coefficient on the difference term");
    rates->add_option("--a", rates_args.a, "mixed form: coefficient a");
    rates->add_option("--b", rates_args.b, "mixed form: exponent b");
    rates->add_option("--c", rates_args.c, "mixed form: coefficient c");
    rates->add_option("--generate", rates_args.generate,
                      "also print the extremal sequence, this many entries");
    rates->add_option("--r0", rates_args.r0, "starting value for --generate (default 1)");

    CLI::App* zoo = app.add_subcommand("zoo", "list the problem catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (app.got_subcommand(run)) {
        if (!run_args.config.empty()) {
            const int rc = apply_run_config(run_args.config, *run, run_args);
            if (rc != 0) return rc;
        }
        if (run_args.problem.empty()) {
            std::fprintf(stderr, "error: a problem name is required (--problem or a config entry)\n");
            return 2;
        }
        return cmd_run(run_args);
    }
    if (app.got_subcommand(diagnose)) return cmd_diagnose(diag_args);
    if (app.got_subcommand(rates)) return cmd_rates(rates_args);
    if (app.got_subcommand(zoo)) return cmd_zoo();
    return 2;
}
