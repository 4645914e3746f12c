#include "fairalloc/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace fairalloc {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ValidationError(field, message);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known =
            std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end();
        if (!known) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
}

const json& member(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "required key is missing");
    return *it;
}

std::string path_of(const std::string& where, const char* key) {
    return where.empty() ? key : where + "." + key;
}

double as_number(const json& value, const std::string& field) {
    if (!value.is_number()) fail(field, std::string("must be a number (got ") + value.type_name() + ")");
    return value.get<double>();
}

double number_field(const json& obj, const std::string& where, const char* key) {
    return as_number(member(obj, where, key), path_of(where, key));
}

double number_field_or(const json& obj, const std::string& where, const char* key,
                       double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return as_number(*it, path_of(where, key));
}

int int_field_or(const json& obj, const std::string& where, const char* key, int fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer())
        fail(path_of(where, key), std::string("must be an integer (got ") + it->type_name() + ")");
    return it->get<int>();
}

std::uint64_t seed_field_or(const json& obj, const std::string& where, const char* key,
                            std::uint64_t fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(it->get<std::int64_t>());
    fail(path_of(where, key), "must be a non-negative integer");
}

bool bool_field_or(const json& obj, const std::string& where, const char* key,
                   bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean())
        fail(path_of(where, key), std::string("must be a boolean (got ") + it->type_name() + ")");
    return it->get<bool>();
}

std::string string_field(const json& obj, const std::string& where, const char* key) {
    const json& value = member(obj, where, key);
    if (!value.is_string())
        fail(path_of(where, key), std::string("must be a string (got ") + value.type_name() + ")");
    return value.get<std::string>();
}

GroupParams parse_group(const json& obj, const std::string& where) {
    if (!obj.is_object()) fail(where, std::string("must be an object (got ") + obj.type_name() + ")");
    reject_unknown_keys(obj, where,
                        {"name", "population", "eir", "severity", "rt_star", "d_baseline",
                         "a_baseline", "weight"});
    GroupParams g;
    g.name = string_field(obj, where, "name");
    g.population = number_field(obj, where, "population");
    g.eir = number_field(obj, where, "eir");
    g.severity = number_field(obj, where, "severity");
    g.rt_star = number_field(obj, where, "rt_star");
    g.d_baseline = number_field_or(obj, where, "d_baseline", 1.0);
    g.a_baseline = number_field_or(obj, where, "a_baseline", 1.0);
    g.weight = number_field_or(obj, where, "weight", 1.0);
    return g;
}

FunctionalForms parse_forms(const json& obj, std::size_t n_groups) {
    FunctionalForms forms;
    forms.theta.assign(n_groups, 1.0);
    if (obj.is_null()) return forms;
    if (!obj.is_object()) fail("forms", std::string("must be an object (got ") + obj.type_name() + ")");
    reject_unknown_keys(obj, "forms", {"theta", "beta", "kappa", "rho", "h_variant"});

    if (auto it = obj.find("theta"); it != obj.end()) {
        if (it->is_number()) {
            forms.theta.assign(n_groups, it->get<double>());
        } else if (it->is_array()) {
            if (it->size() != n_groups)
                fail("forms.theta", "array length must equal the number of groups");
            forms.theta.clear();
            for (std::size_t i = 0; i < it->size(); ++i)
                forms.theta.push_back(
                    as_number((*it)[i], "forms.theta[" + std::to_string(i) + "]"));
        } else {
            fail("forms.theta",
                 std::string("must be a number or an array of numbers (got ") +
                     it->type_name() + ")");
        }
    }
    forms.beta = number_field_or(obj, "forms", "beta", forms.beta);
    forms.kappa = number_field_or(obj, "forms", "kappa", forms.kappa);
    forms.rho = number_field_or(obj, "forms", "rho", forms.rho);
    if (auto it = obj.find("h_variant"); it != obj.end()) {
        if (!it->is_string())
            fail("forms.h_variant", std::string("must be a string (got ") + it->type_name() + ")");
        const std::string v = it->get<std::string>();
        if (v == "multiplicative")
            forms.h_variant = HealthVariant::multiplicative;
        else if (v == "additive")
            forms.h_variant = HealthVariant::additive;
        else
            fail("forms.h_variant", "must be \"multiplicative\" or \"additive\" (got \"" + v + "\")");
    }
    return forms;
}

CostParams parse_costs(const json& obj) {
    CostParams costs;
    if (obj.is_null()) return costs;
    if (!obj.is_object()) fail("costs", std::string("must be an object (got ") + obj.type_name() + ")");
    reject_unknown_keys(obj, "costs", {"c_ra", "c_rt", "c_h", "h_ref", "kappa_d", "kappa_a"});
    costs.c_ra = number_field_or(obj, "costs", "c_ra", 0.0);
    costs.c_rt = number_field_or(obj, "costs", "c_rt", 0.0);
    costs.c_h = number_field_or(obj, "costs", "c_h", 0.0);
    costs.h_ref = number_field_or(obj, "costs", "h_ref", 0.0);
    costs.kappa_d = number_field_or(obj, "costs", "kappa_d", 0.0);
    costs.kappa_a = number_field_or(obj, "costs", "kappa_a", 0.0);
    return costs;
}

SolverSettings parse_solver(const json& obj) {
    SolverSettings s;
    if (obj.is_null()) return s;
    if (!obj.is_object()) fail("solver", std::string("must be an object (got ") + obj.type_name() + ")");
    reject_unknown_keys(obj, "solver",
                        {"max_iters", "grad_tol", "n_starts", "seed", "armijo_c",
                         "backtrack_factor", "penalty_mu0", "penalty_growth",
                         "penalty_mu_max", "parallel"});
    s.max_iters = int_field_or(obj, "solver", "max_iters", s.max_iters);
    s.grad_tol = number_field_or(obj, "solver", "grad_tol", s.grad_tol);
    s.n_starts = int_field_or(obj, "solver", "n_starts", s.n_starts);
    s.seed = seed_field_or(obj, "solver", "seed", s.seed);
    s.armijo_c = number_field_or(obj, "solver", "armijo_c", s.armijo_c);
    s.backtrack_factor = number_field_or(obj, "solver", "backtrack_factor", s.backtrack_factor);
    s.penalty_mu0 = number_field_or(obj, "solver", "penalty_mu0", s.penalty_mu0);
    s.penalty_growth = number_field_or(obj, "solver", "penalty_growth", s.penalty_growth);
    s.penalty_mu_max = number_field_or(obj, "solver", "penalty_mu_max", s.penalty_mu_max);
    s.parallel = bool_field_or(obj, "solver", "parallel", s.parallel);
    return s;
}

// --- emission helpers ---------------------------------------------------

std::string escape_json_string(const std::string& raw) {
    std::string out;
    out.reserve(raw.size() + 2);
    for (const char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string quoted(const std::string& raw) { return "\"" + escape_json_string(raw) + "\""; }

// JSON has no literal for infinities; reports carry them as null.
std::string json_number(double value) {
    if (!std::isfinite(value)) return "null";
    return format_number(value);
}

std::string number_array(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += json_number(values[i]);
    }
    out += "]";
    return out;
}

// CSV fields are quoted only when they contain a delimiter, quote or newline.
std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string out = "\"";
    for (const char c : raw) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void append_per_group_rows(std::string& out, const std::vector<GroupOutcome>& rows,
                           const Scenario& scenario) {
    out += "group,ra,rt,bias_b,health,utility\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += csv_field(scenario.groups[i].name);
        out += ",";
        out += format_number(rows[i].ra);
        out += ",";
        out += format_number(rows[i].rt);
        out += ",";
        out += format_number(rows[i].bias_b);
        out += ",";
        out += format_number(rows[i].health);
        out += ",";
        out += format_number(rows[i].utility);
        out += "\n";
    }
}

void append_evaluation_json(std::string& out, const EvaluationReport& report,
                            const Scenario& scenario, const std::string& indent) {
    const std::string inner = indent + "  ";
    out += "{\n";
    out += inner + "\"per_group\": [\n";
    for (std::size_t i = 0; i < report.per_group.size(); ++i) {
        const GroupOutcome& row = report.per_group[i];
        out += inner + "  {\"group\": " + quoted(scenario.groups[i].name) +
               ", \"ra\": " + json_number(row.ra) + ", \"rt\": " + json_number(row.rt) +
               ", \"bias_b\": " + json_number(row.bias_b) +
               ", \"health\": " + json_number(row.health) +
               ", \"utility\": " + json_number(row.utility) + "}";
        out += (i + 1 < report.per_group.size()) ? ",\n" : "\n";
    }
    out += inner + "],\n";
    out += inner + "\"welfare\": " + json_number(report.welfare) + ",\n";
    out += inner + "\"cost_resource\": " + json_number(report.cost_resource) + ",\n";
    out += inner + "\"cost_response\": " + json_number(report.cost_response) + ",\n";
    out += inner + "\"cost_health\": " + json_number(report.cost_health) + ",\n";
    out += inner + "\"cost_bias_reduction\": " + json_number(report.cost_bias_reduction) + ",\n";
    out += inner + "\"objective\": " + json_number(report.objective) + ",\n";
    out += inner + "\"budget_used\": " + json_number(report.budget_used) + "\n";
    out += indent + "}";
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    const json doc = json::parse(text);
    if (!doc.is_object())
        fail("document", std::string("must be an object (got ") + doc.type_name() + ")");
    reject_unknown_keys(doc, "",
                        {"schema_version", "groups", "forms", "costs", "budget", "lambda",
                         "solver"});

    auto version_it = doc.find("schema_version");
    if (version_it == doc.end())
        throw VersionError("schema_version: required key is missing");
    if (!version_it->is_string() || version_it->get<std::string>() != "1")
        throw VersionError("schema_version: unsupported version (expected \"1\")");

    const json& groups = member(doc, "", "groups");
    if (!groups.is_array())
        fail("groups", std::string("must be an array (got ") + groups.type_name() + ")");

    Scenario scenario;
    scenario.groups.reserve(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i)
        scenario.groups.push_back(parse_group(groups[i], "groups[" + std::to_string(i) + "]"));

    scenario.forms = parse_forms(doc.value("forms", json()), scenario.groups.size());
    scenario.costs = parse_costs(doc.value("costs", json()));

    const json& budget = member(doc, "", "budget");
    if (!budget.is_object())
        fail("budget", std::string("must be an object (got ") + budget.type_name() + ")");
    reject_unknown_keys(budget, "budget", {"ra_total", "ra_star_total"});
    scenario.ra_total = number_field(budget, "budget", "ra_total");
    scenario.ra_star_total = number_field_or(budget, "budget", "ra_star_total", scenario.ra_total);

    scenario.lambda = number_field_or(doc, "", "lambda", 1.0);
    scenario.solver = parse_solver(doc.value("solver", json()));

    validate_scenario(scenario);
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_scenario: cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& scenario) {
    std::string out;
    out += "{\n";
    out += "  \"schema_version\": \"1\",\n";
    out += "  \"groups\": [\n";
    for (std::size_t i = 0; i < scenario.groups.size(); ++i) {
        const GroupParams& g = scenario.groups[i];
        out += "    {\"name\": " + quoted(g.name) +
               ", \"population\": " + format_number(g.population) +
               ", \"eir\": " + format_number(g.eir) +
               ", \"severity\": " + format_number(g.severity) +
               ", \"rt_star\": " + format_number(g.rt_star) +
               ", \"d_baseline\": " + format_number(g.d_baseline) +
               ", \"a_baseline\": " + format_number(g.a_baseline) +
               ", \"weight\": " + format_number(g.weight) + "}";
        out += (i + 1 < scenario.groups.size()) ? ",\n" : "\n";
    }
    out += "  ],\n";
    out += "  \"forms\": {\"theta\": " + number_array(scenario.forms.theta) +
           ", \"beta\": " + format_number(scenario.forms.beta) +
           ", \"kappa\": " + format_number(scenario.forms.kappa) +
           ", \"rho\": " + format_number(scenario.forms.rho) + ", \"h_variant\": " +
           (scenario.forms.h_variant == HealthVariant::multiplicative ? "\"multiplicative\""
                                                                      : "\"additive\"") +
           "},\n";
    out += "  \"costs\": {\"c_ra\": " + format_number(scenario.costs.c_ra) +
           ", \"c_rt\": " + format_number(scenario.costs.c_rt) +
           ", \"c_h\": " + format_number(scenario.costs.c_h) +
           ", \"h_ref\": " + format_number(scenario.costs.h_ref) +
           ", \"kappa_d\": " + format_number(scenario.costs.kappa_d) +
           ", \"kappa_a\": " + format_number(scenario.costs.kappa_a) + "},\n";
    out += "  \"budget\": {\"ra_total\": " + format_number(scenario.ra_total) +
           ", \"ra_star_total\": " + format_number(scenario.ra_star_total) + "},\n";
    out += "  \"lambda\": " + format_number(scenario.lambda) + ",\n";
    const SolverSettings& s = scenario.solver;
    out += "  \"solver\": {\"max_iters\": " + std::to_string(s.max_iters) +
           ", \"grad_tol\": " + format_number(s.grad_tol) +
           ", \"n_starts\": " + std::to_string(s.n_starts) +
           ", \"seed\": " + std::to_string(s.seed) +
           ", \"armijo_c\": " + format_number(s.armijo_c) +
           ", \"backtrack_factor\": " + format_number(s.backtrack_factor) +
           ", \"penalty_mu0\": " + format_number(s.penalty_mu0) +
           ", \"penalty_growth\": " + format_number(s.penalty_growth) +
           ", \"penalty_mu_max\": " + format_number(s.penalty_mu_max) +
           ", \"parallel\": " + (s.parallel ? "true" : "false") + "}\n";
    out += "}\n";
    return out;
}

std::string to_json(const EvaluationReport& report, const Scenario& scenario) {
    std::string out;
    append_evaluation_json(out, report, scenario, "");
    out += "\n";
    return out;
}

std::string to_json(const SolutionReport& report, const Scenario& scenario) {
    std::string out;
    out += "{\n";
    out += "  \"best_profile\": {\"d\": " + number_array(report.best_profile.d) +
           ", \"a\": " + number_array(report.best_profile.a) + "},\n";
    out += "  \"best_objective\": " + json_number(report.best_objective) + ",\n";
    out += "  \"converged\": " + std::string(report.converged ? "true" : "false") + ",\n";
    out += "  \"projected_grad_norm\": " + json_number(report.projected_grad_norm) + ",\n";
    out += "  \"budget_violation\": " + json_number(report.budget_violation) + ",\n";
    out += "  \"iterations_per_start\": [";
    for (std::size_t i = 0; i < report.iterations_per_start.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(report.iterations_per_start[i]);
    }
    out += "],\n";
    out += "  \"starts_summary\": " + number_array(report.starts_summary) + ",\n";
    out += "  \"converged_per_start\": [";
    for (std::size_t i = 0; i < report.converged_per_start.size(); ++i) {
        if (i > 0) out += ", ";
        out += report.converged_per_start[i] ? "true" : "false";
    }
    out += "],\n";
    out += "  \"residual_disparity\": " +
           (report.residual_disparity ? json_number(*report.residual_disparity)
                                      : std::string("null")) +
           ",\n";
    out += "  \"oracle_objective\": " +
           (report.oracle_objective ? json_number(*report.oracle_objective)
                                    : std::string("null")) +
           ",\n";
    out += "  \"oracle_gap\": " +
           (report.oracle_gap ? json_number(*report.oracle_gap) : std::string("null")) + ",\n";
    out += "  \"evaluation\": ";
    append_evaluation_json(out, report.evaluation, scenario, "  ");
    out += "\n}\n";
    return out;
}

std::string to_json(const WelfareLossReport& report, const Scenario& scenario) {
    std::string out;
    out += "{\n";
    out += "  \"w_unbiased\": " + json_number(report.w_unbiased) + ",\n";
    out += "  \"w_biased\": " + json_number(report.w_biased) + ",\n";
    out += "  \"delta_w\": " + json_number(report.delta_w) + ",\n";
    out += "  \"delta_cost_total\": " + json_number(report.delta_cost_total) + ",\n";
    out += "  \"per_group\": [\n";
    for (std::size_t i = 0; i < report.per_group.size(); ++i) {
        const GroupDelta& delta = report.per_group[i];
        out += "    {\"group\": " + quoted(scenario.groups[i].name) +
               ", \"delta_ra\": " + json_number(delta.delta_ra) +
               ", \"delta_rt\": " + json_number(delta.delta_rt) +
               ", \"delta_h\": " + json_number(delta.delta_h) +
               ", \"delta_u\": " + json_number(delta.delta_u) + "}";
        out += (i + 1 < report.per_group.size()) ? ",\n" : "\n";
    }
    out += "  ]\n";
    out += "}\n";
    return out;
}

std::string to_json(const std::vector<FrontierPoint>& points) {
    std::string out;
    out += "{\n";
    out += "  \"points\": [\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const FrontierPoint& p = points[i];
        out += "    {\"disparity_cap\": " + json_number(p.disparity_cap) +
               ", \"objective\": " + json_number(p.objective) +
               ", \"realized_disparity\": " + json_number(p.realized_disparity) +
               ", \"converged\": " + (p.converged ? "true" : "false") + "}";
        out += (i + 1 < points.size()) ? ",\n" : "\n";
    }
    out += "  ]\n";
    out += "}\n";
    return out;
}

std::string to_json(const OracleResult& result, const Scenario&) {
    std::string out;
    out += "{\n";
    out += "  \"profile\": {\"d\": " + number_array(result.profile.d) +
           ", \"a\": " + number_array(result.profile.a) + "},\n";
    out += "  \"objective\": " + json_number(result.objective) + "\n";
    out += "}\n";
    return out;
}

std::string to_csv(const EvaluationReport& report, const Scenario& scenario) {
    std::string out;
    append_per_group_rows(out, report.per_group, scenario);
    return out;
}

std::string to_csv(const SolutionReport& report, const Scenario& scenario) {
    std::string out;
    append_per_group_rows(out, report.evaluation.per_group, scenario);
    return out;
}

std::string to_csv(const WelfareLossReport& report, const Scenario& scenario) {
    std::string out = "group,delta_ra,delta_rt,delta_h,delta_u\n";
    for (std::size_t i = 0; i < report.per_group.size(); ++i) {
        const GroupDelta& delta = report.per_group[i];
        out += csv_field(scenario.groups[i].name);
        out += ",";
        out += format_number(delta.delta_ra);
        out += ",";
        out += format_number(delta.delta_rt);
        out += ",";
        out += format_number(delta.delta_h);
        out += ",";
        out += format_number(delta.delta_u);
        out += "\n";
    }
    return out;
}

std::string to_csv(const std::vector<FrontierPoint>& points) {
    std::string out = "disparity_cap,objective,realized_disparity\n";
    for (const FrontierPoint& p : points) {
        out += format_number(p.disparity_cap);
        out += ",";
        out += format_number(p.objective);
        out += ",";
        out += format_number(p.realized_disparity);
        out += "\n";
    }
    return out;
}

std::string to_csv(const OracleResult& result, const Scenario& scenario) {
    std::string out = "group,d,a,objective\n";
    for (std::size_t i = 0; i < result.profile.d.size(); ++i) {
        out += csv_field(scenario.groups[i].name);
        out += ",";
        out += format_number(result.profile.d[i]);
        out += ",";
        out += format_number(result.profile.a[i]);
        out += ",";
        out += format_number(result.objective);
        out += "\n";
    }
    return out;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace fairalloc
