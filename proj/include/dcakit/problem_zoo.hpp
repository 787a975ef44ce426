#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dcakit/dca_engine.hpp"

namespace dcakit {

/// What a catalog problem is expected to do under its recommended start and
/// configuration, phrased so a test can verify a trace against it.
struct ExpectedBehavior {
    enum class Kind { ConvergesTo, BreaksDown, Oscillates, Diverges };
    Kind kind = Kind::ConvergesTo;
    Vector target;     ///< ConvergesTo: limit point
    double tol = 1e-9; ///< ConvergesTo: allowed distance to the target
    RunStatus breakdown_status = RunStatus::BreakdownEmptySubdifferential;
    long at_iter = -1; ///< BreaksDown: expected breakdown iteration (-1 = any)

    static ExpectedBehavior converges_to(double target, double tol);
    static ExpectedBehavior breaks_down(RunStatus status, long at_iter);
    static ExpectedBehavior oscillates();
    static ExpectedBehavior diverges();
};

struct ZooEntry {
    std::string name;
    std::string summary;
    DCProblem problem;
    Vector recommended_x0;
    RunConfig recommended_config;
    ExpectedBehavior expected;
};

struct UnknownName : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Catalog names in a fixed, documented order.
std::vector<std::string> zoo_names();

/// Build a catalog entry by name. Throws UnknownName.
ZooEntry zoo_build(const std::string& name);

/// Does the trace match the expectation? On mismatch, `why` (when given)
/// receives a one-line explanation.
bool behavior_satisfied(const ExpectedBehavior& expected, const Trace& tr,
                        std::string* why = nullptr);

}  // namespace dcakit
