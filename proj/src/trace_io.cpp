#include "dcakit/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dcakit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json num_to_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from_json(const ordered_json& j) {
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::nan("");
        return std::stod(s);
    }
    return j.get<double>();
}

ordered_json vector_to_json(const Vector& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(num_to_json(v[i]));
    return arr;
}

Vector vector_from_json(const ordered_json& arr) {
    Vector v(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index i = 0;
    for (const auto& e : arr) v[i++] = num_from_json(e);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::string trace_to_csv(const Trace& tr) {
    std::string out = "k";
    for (int i = 0; i < tr.dimension; ++i) out += ",x" + std::to_string(i);
    out += ",f,step_norm,descent_delta,certificate\n";
    for (const auto& r : tr.records) {
        out += std::to_string(r.k);
        for (Eigen::Index i = 0; i < r.x.size(); ++i) out += "," + fmt(r.x[i]);
        out += "," + fmt(r.f);
        out += ",";
        if (r.step_norm) out += fmt(*r.step_norm);
        out += ",";
        if (r.descent_delta) out += fmt(*r.descent_delta);
        out += ",";
        if (r.certificate) out += fmt(*r.certificate);
        out += "\n";
    }
    return out;
}

Trace trace_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV trace");
    auto header = split(line, ',');
    int dim = 0;
    for (const auto& col : header)
        if (col.size() > 1 && col[0] == 'x') ++dim;
    if (header.empty() || header[0] != "k" || dim == 0 ||
        header.size() != static_cast<size_t>(dim) + 5)
        throw std::runtime_error("unrecognized CSV trace header: " + line);

    Trace tr;
    tr.dimension = dim;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw std::runtime_error("CSV row has wrong number of cells: " + line);
        StepRecord r;
        r.k = std::stol(cells[0]);
        r.x = Vector(dim);
        for (int i = 0; i < dim; ++i) r.x[i] = std::strtod(cells[1 + i].c_str(), nullptr);
        r.f = std::strtod(cells[1 + dim].c_str(), nullptr);
        r.step_norm = parse_opt(cells[2 + dim]);
        r.descent_delta = parse_opt(cells[3 + dim]);
        r.certificate = parse_opt(cells[4 + dim]);
        tr.records.push_back(std::move(r));
    }
    return tr;
}

std::string trace_to_json(const Trace& tr) {
    ordered_json j;
    j["problem"] = tr.problem_name;
    j["dimension"] = tr.dimension;
    j["rho"] = num_to_json(tr.rho);
    j["known_theta"] = tr.known_theta ? ordered_json(num_to_json(*tr.known_theta))
                                      : ordered_json(nullptr);
    j["known_fstar"] = tr.known_fstar ? ordered_json(num_to_json(*tr.known_fstar))
                                      : ordered_json(nullptr);
    j["status"] = status_string(tr.status);
    j["breakdown_iter"] = tr.breakdown_iter;

    ordered_json cfg;
    cfg["max_iters"] = tr.config.max_iters;
    cfg["halt_step_tol"] = tr.config.halt_step_tol
                               ? ordered_json(num_to_json(*tr.config.halt_step_tol))
                               : ordered_json(nullptr);
    cfg["divergence_guard"] = num_to_json(tr.config.divergence_guard);
    cfg["fixed_point_tol"] = num_to_json(tr.config.fixed_point_tol);
    cfg["selection_rule"] = to_string(tr.config.rule.kind);
    if (tr.config.rule.kind == SelectionRule::Kind::FixedValue)
        cfg["selection_value"] = vector_to_json(tr.config.rule.value);
    ordered_json sub;
    sub["tol"] = num_to_json(tr.config.subsolver.tol);
    sub["tol_multidim"] = num_to_json(tr.config.subsolver.tol_multidim);
    sub["max_inner_iters"] = tr.config.subsolver.max_inner_iters;
    sub["bracket_expansion"] = num_to_json(tr.config.subsolver.bracket_expansion);
    sub["tie_break"] = to_string(tr.config.subsolver.tie_break);
    sub["use_closed_form"] = tr.config.subsolver.use_closed_form;
    cfg["subsolver"] = std::move(sub);
    j["config"] = std::move(cfg);

    j["warnings"] = tr.warnings;

    ordered_json recs = ordered_json::array();
    for (const auto& r : tr.records) {
        ordered_json row;
        row["k"] = r.k;
        row["x"] = vector_to_json(r.x);
        if (r.y) row["y"] = vector_to_json(*r.y);
        row["f"] = num_to_json(r.f);
        if (r.step_norm) row["step_norm"] = num_to_json(*r.step_norm);
        if (r.descent_delta) row["descent_delta"] = num_to_json(*r.descent_delta);
        if (r.certificate) row["certificate"] = num_to_json(*r.certificate);
        recs.push_back(std::move(row));
    }
    j["records"] = std::move(recs);
    return j.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    Trace tr;
    tr.problem_name = j.at("problem").get<std::string>();
    tr.dimension = j.at("dimension").get<int>();
    tr.rho = num_from_json(j.at("rho"));
    if (!j.at("known_theta").is_null()) tr.known_theta = num_from_json(j["known_theta"]);
    if (!j.at("known_fstar").is_null()) tr.known_fstar = num_from_json(j["known_fstar"]);
    tr.status = status_from_string(j.at("status").get<std::string>());
    tr.breakdown_iter = j.at("breakdown_iter").get<long>();

    const auto& cfg = j.at("config");
    tr.config.max_iters = cfg.at("max_iters").get<long>();
    if (!cfg.at("halt_step_tol").is_null())
        tr.config.halt_step_tol = num_from_json(cfg["halt_step_tol"]);
    tr.config.divergence_guard = num_from_json(cfg.at("divergence_guard"));
    tr.config.fixed_point_tol = num_from_json(cfg.at("fixed_point_tol"));
    Vector rule_value;
    const Vector* rule_value_ptr = nullptr;
    if (cfg.contains("selection_value")) {
        rule_value = vector_from_json(cfg["selection_value"]);
        rule_value_ptr = &rule_value;
    }
    tr.config.rule = selection_rule_from_strings(cfg.at("selection_rule").get<std::string>(),
                                                 rule_value_ptr);
    const auto& sub = cfg.at("subsolver");
    tr.config.subsolver.tol = num_from_json(sub.at("tol"));
    tr.config.subsolver.tol_multidim = num_from_json(sub.at("tol_multidim"));
    tr.config.subsolver.max_inner_iters = sub.at("max_inner_iters").get<int>();
    tr.config.subsolver.bracket_expansion = num_from_json(sub.at("bracket_expansion"));
    tr.config.subsolver.tie_break = tie_break_from_string(sub.at("tie_break").get<std::string>());
    tr.config.subsolver.use_closed_form = sub.at("use_closed_form").get<bool>();

    tr.warnings = j.at("warnings").get<std::vector<std::string>>();

    for (const auto& row : j.at("records")) {
        StepRecord r;
        r.k = row.at("k").get<long>();
        r.x = vector_from_json(row.at("x"));
        if (row.contains("y")) r.y = vector_from_json(row["y"]);
        r.f = num_from_json(row.at("f"));
        if (row.contains("step_norm")) r.step_norm = num_from_json(row["step_norm"]);
        if (row.contains("descent_delta")) r.descent_delta = num_from_json(row["descent_delta"]);
        if (row.contains("certificate")) r.certificate = num_from_json(row["certificate"]);
        tr.records.push_back(std::move(r));
    }
    return tr;
}

RunStatus status_from_string(const std::string& s) {
    for (RunStatus st : {RunStatus::MaxIters, RunStatus::ToleranceHalt,
                         RunStatus::BreakdownEmptySubdifferential,
                         RunStatus::BreakdownNoMinimizer, RunStatus::Diverged,
                         RunStatus::FixedPoint})
        if (s == status_string(st)) return st;
    throw std::invalid_argument("unknown run status: " + s);
}

TieBreak tie_break_from_string(const std::string& s) {
    for (TieBreak tb : {TieBreak::LowestPoint, TieBreak::HighestPoint,
                        TieBreak::StayIfCurrentOptimal, TieBreak::Alternate})
        if (s == to_string(tb)) return tb;
    throw std::invalid_argument("unknown tie break: " + s);
}

SelectionRule selection_rule_from_strings(const std::string& kind, const Vector* value) {
    for (SelectionRule::Kind k :
         {SelectionRule::Kind::Default, SelectionRule::Kind::AdversarialAlternate,
          SelectionRule::Kind::FixedValue, SelectionRule::Kind::NegativeSide}) {
        if (kind != to_string(k)) continue;
        SelectionRule r;
        r.kind = k;
        if (k == SelectionRule::Kind::FixedValue) {
            if (!value) throw std::invalid_argument("fixed_value rule needs a value");
            r.value = *value;
        }
        return r;
    }
    throw std::invalid_argument("unknown selection rule: " + kind);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dcakit
