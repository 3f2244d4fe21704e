#include "ahb/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ahb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed, const std::set<std::string>& required) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
    for (const auto& key : required)
        if (!obj.contains(key)) fail(where, "missing required key '" + key + "'");
}

double as_number(const json& v, const std::string& where) {
    // beta_cap may be the string "inf"
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        fail(where, "expected a number, got '" + s + "'");
    }
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

ProblemSpec parse_problem(const json& j) {
    require_keys(j, "problem",
                 {"name", "n_nodes", "rows", "cols", "n_angles", "n_rays", "geometry", "grid",
                  "eta"},
                 {"name"});
    ProblemSpec p;
    p.name = j.at("name").get<std::string>();
    if (p.name == "fredholm") {
        if (j.contains("n_nodes")) p.n_nodes = j.at("n_nodes").get<int>();
    } else if (p.name == "tomo") {
        if (j.contains("rows")) p.rows = j.at("rows").get<int>();
        if (j.contains("cols")) p.cols = j.at("cols").get<int>();
        if (j.contains("n_angles")) p.n_angles = j.at("n_angles").get<int>();
        if (j.contains("n_rays")) p.n_rays = j.at("n_rays").get<int>();
        if (j.contains("geometry")) {
            const std::string g = j.at("geometry").get<std::string>();
            if (g == "parallel")
                p.geometry = TomoGeometry::Parallel;
            else if (g == "fan")
                p.geometry = TomoGeometry::Fan;
            else
                fail("problem.geometry", "must be 'parallel' or 'fan'");
        }
    } else if (p.name == "elliptic") {
        if (j.contains("grid")) p.grid = j.at("grid").get<int>();
        if (j.contains("eta")) p.eta = as_number(j.at("eta"), "problem.eta");
    } else {
        fail("problem.name", "unknown problem '" + p.name + "'");
    }
    return p;
}

RegularizerSpec parse_regularizer(const json& j) {
    require_keys(j, "regularizer", {"name", "kappa", "pdhg_iters"}, {"name"});
    RegularizerSpec r;
    r.name = j.at("name").get<std::string>();
    if (r.name != "quadratic" && r.name != "tv_quadratic")
        fail("regularizer.name", "unknown regularizer '" + r.name + "'");
    if (j.contains("kappa")) r.kappa = as_number(j.at("kappa"), "regularizer.kappa");
    if (j.contains("pdhg_iters")) r.pdhg_iters = j.at("pdhg_iters").get<int>();
    return r;
}

MethodSpec parse_method(const json& j, std::size_t idx) {
    const std::string where = "methods[" + std::to_string(idx) + "]";
    require_keys(j, where,
                 {"name", "label", "tau", "beta_cap", "mu0", "mu1", "eta", "step_rule", "max_iter",
                  "nu", "alpha_shift", "gamma_scale"},
                 {"name"});
    MethodSpec m;
    m.name = j.at("name").get<std::string>();
    if (m.name != "ahb" && m.name != "landweber" && m.name != "nu" && m.name != "nesterov")
        fail(where + ".name", "unknown method '" + m.name + "'");
    if (j.contains("label")) m.label = j.at("label").get<std::string>();
    if (j.contains("tau")) m.solver.tau = as_number(j.at("tau"), where + ".tau");
    if (j.contains("beta_cap")) m.solver.beta_cap = as_number(j.at("beta_cap"), where + ".beta_cap");
    if (j.contains("mu0")) m.solver.mu0 = as_number(j.at("mu0"), where + ".mu0");
    if (j.contains("mu1")) m.solver.mu1 = as_number(j.at("mu1"), where + ".mu1");
    if (j.contains("eta")) m.solver.eta = as_number(j.at("eta"), where + ".eta");
    if (j.contains("max_iter")) m.solver.max_iter = j.at("max_iter").get<int>();
    if (j.contains("step_rule")) {
        const std::string s = j.at("step_rule").get<std::string>();
        if (s == "constant")
            m.solver.step_rule = StepRule::Constant;
        else if (s == "adaptive")
            m.solver.step_rule = StepRule::Adaptive;
        else
            fail(where + ".step_rule", "must be 'constant' or 'adaptive'");
    }
    if (j.contains("nu")) m.nu = as_number(j.at("nu"), where + ".nu");
    if (j.contains("alpha_shift")) m.alpha_shift = as_number(j.at("alpha_shift"), where);
    if (j.contains("gamma_scale")) m.gamma_scale = as_number(j.at("gamma_scale"), where);
    return m;
}

NoiseSpec parse_noise(const json& j) {
    require_keys(j, "noise", {"type", "levels", "seed", "repeats"}, {"type", "levels"});
    NoiseSpec n;
    const std::string t = j.at("type").get<std::string>();
    if (t == "absolute")
        n.kind = NoiseSpec::Kind::Absolute;
    else if (t == "relative")
        n.kind = NoiseSpec::Kind::Relative;
    else
        fail("noise.type", "must be 'absolute' or 'relative'");
    for (const auto& v : j.at("levels")) n.levels.push_back(as_number(v, "noise.levels"));
    if (j.contains("seed")) n.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("repeats")) n.repeats = j.at("repeats").get<int>();
    return n;
}

OutputSpec parse_output(const json& j) {
    require_keys(j, "output",
                 {"dir", "iteration_logs", "timing", "curves", "curves_delta",
                  "curves_exact_iters", "write_images", "write_system_matrix"},
                 {});
    OutputSpec o;
    if (j.contains("dir")) o.dir = j.at("dir").get<std::string>();
    if (j.contains("iteration_logs")) o.iteration_logs = j.at("iteration_logs").get<bool>();
    if (j.contains("timing")) o.timing = j.at("timing").get<bool>();
    if (j.contains("curves")) o.curves = j.at("curves").get<bool>();
    if (j.contains("curves_delta"))
        o.curves_delta = as_number(j.at("curves_delta"), "output.curves_delta");
    if (j.contains("curves_exact_iters")) o.curves_exact_iters = j.at("curves_exact_iters").get<int>();
    if (j.contains("write_images")) o.write_images = j.at("write_images").get<bool>();
    if (j.contains("write_system_matrix"))
        o.write_system_matrix = j.at("write_system_matrix").get<bool>();
    return o;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (methods.empty()) throw std::invalid_argument("config: no methods listed");
    if (noise.levels.empty()) throw std::invalid_argument("config: no noise levels listed");
    for (double d : noise.levels)
        if (d < 0.0) throw std::invalid_argument("config: noise levels must be >= 0");
    if (noise.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    if (problem.name == "fredholm" && problem.n_nodes < 2)
        throw std::invalid_argument("config: fredholm needs n_nodes >= 2");
    if (problem.name == "tomo" && (problem.rows < 8 || problem.cols < 8))
        throw std::invalid_argument("config: tomo image must be at least 8x8");
    if (problem.name == "elliptic" && problem.grid < 8)
        throw std::invalid_argument("config: elliptic grid must be at least 8");
    if (regularizer.kappa <= 0.0) throw std::invalid_argument("config: kappa must be positive");
    if (regularizer.pdhg_iters < 1)
        throw std::invalid_argument("config: pdhg_iters must be >= 1");
    for (const auto& m : methods)
        if (m.name == "ahb" || m.name == "landweber") m.solver.validate();
}

std::string ExperimentConfig::unsupported_reason(const MethodSpec& m) const {
    if (m.name == "nu" || m.name == "nesterov") {
        if (!problem.is_linear()) return m.display() + " requires a linear problem";
        if (regularizer.name != "quadratic")
            return m.display() + " requires the quadratic regularizer";
    }
    if (regularizer.name == "tv_quadratic" && problem.name == "fredholm")
        return "tv_quadratic needs a 2-D pixel grid; " + problem.name + " is one-dimensional";
    return {};
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    require_keys(j, "<root>", {"problem", "regularizer", "methods", "noise", "output", "jobs"},
                 {"problem", "regularizer", "methods", "noise"});
    ExperimentConfig cfg;
    cfg.problem = parse_problem(j.at("problem"));
    cfg.regularizer = parse_regularizer(j.at("regularizer"));
    const auto& ms = j.at("methods");
    if (!ms.is_array()) fail("methods", "expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i) cfg.methods.push_back(parse_method(ms[i], i));
    cfg.noise = parse_noise(j.at("noise"));
    if (j.contains("output")) cfg.output = parse_output(j.at("output"));
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace ahb
