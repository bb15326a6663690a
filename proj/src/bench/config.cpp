#include "llocg/bench/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "llocg/errors.hpp"

namespace llocg::bench {

namespace {

using nlohmann::json;

const std::vector<std::string> kFamilies = {"simplex", "hypercube", "flow_dag", "centered_simplex"};
const std::vector<std::string> kObjectives = {"lower_bound", "quadratic", "squared_distance"};
const std::vector<std::string> kStreams = {"linear", "strongly_convex", "noisy_linear", "sampled_quadratic"};
const std::vector<std::string> kSolvers = {"frank_wolfe", "llo_cg", "oco_general", "oco_sc", "stochastic", "bandit"};
const std::vector<std::string> kCertifications = {"linear_rate", "regret_bound", "oracle_budget", "feasibility"};

bool contains(const std::vector<std::string>& names, const std::string& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string joined(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

// Typed access to one JSON object; every key must be consumed or declared.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where() + " must be an object");
    }

    void allow(std::initializer_list<const char*> keys) {
        for (const char* k : keys) allowed_.insert(k);
        for (const auto& item : obj_.items()) {
            if (!allowed_.count(item.key())) throw ConfigError("unknown key '" + key_path(item.key()) + "'");
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    const json& at(const std::string& key) const {
        if (!has(key)) throw ConfigError("missing required key '" + key_path(key) + "'");
        return obj_.at(key);
    }

    std::string str(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError("'" + key_path(key) + "' must be a string");
        return v.get<std::string>();
    }

    double num(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError("'" + key_path(key) + "' must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError("'" + key_path(key) + "' must be finite");
        return d;
    }

    std::optional<double> opt_num(const std::string& key) const {
        return has(key) ? std::optional<double>(num(key)) : std::nullopt;
    }

    long integer(const std::string& key) const {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ConfigError("'" + key_path(key) + "' must be an integer");
        return v.get<long>();
    }

    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) throw ConfigError("'" + key_path(key) + "' must be true or false");
        return v.get<bool>();
    }

    Vec vec(const std::string& key) const { return to_vec(at(key), key_path(key)); }

    static Vec to_vec(const json& v, const std::string& path) {
        if (!v.is_array() || v.empty()) throw ConfigError("'" + path + "' must be a non-empty array of numbers");
        Vec out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError("'" + path + "' must be a non-empty array of numbers");
            out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
        }
        if (!out.allFinite()) throw ConfigError("'" + path + "' must be finite");
        return out;
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> allowed_;
};

PolytopeSpec parse_polytope(const json& j, const std::filesystem::path& base_dir) {
    Section s(j, "polytope");
    s.allow({"family", "n", "scale", "edges", "edges_file"});
    PolytopeSpec p;
    p.family = s.str("family");
    if (!contains(kFamilies, p.family)) {
        throw ConfigError("unknown polytope family '" + p.family + "' at 'polytope.family' (expected " +
                          joined(kFamilies) + ")");
    }
    if (p.family == "flow_dag") {
        if (s.has("edges") == s.has("edges_file")) {
            throw ConfigError("'polytope' of family flow_dag needs exactly one of 'edges' or 'edges_file'");
        }
        if (s.has("edges")) {
            const json& e = s.at("edges");
            if (!e.is_array()) throw ConfigError("'polytope.edges' must be an array of [src, dst] pairs");
            for (const auto& pair : e) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                    !pair[1].is_number_integer()) {
                    throw ConfigError("'polytope.edges' must be an array of [src, dst] pairs");
                }
                p.edges.emplace_back(pair[0].get<int>(), pair[1].get<int>());
            }
        } else {
            std::filesystem::path file = s.str("edges_file");
            if (file.is_relative()) file = base_dir / file;
            p.edges_file = file.string();
        }
        if (s.has("n")) throw ConfigError("'polytope.n' is not used by family flow_dag");
    } else {
        p.n = static_cast<int>(s.integer("n"));
        if (s.has("edges") || s.has("edges_file")) {
            throw ConfigError("'polytope.edges' only applies to family flow_dag");
        }
    }
    if (s.has("scale")) {
        if (p.family != "centered_simplex") throw ConfigError("'polytope.scale' only applies to centered_simplex");
        p.scale = s.num("scale");
    }
    return p;
}

ObjectiveSpec parse_objective(const json& j) {
    Section s(j, "objective");
    s.allow({"family", "Q", "b", "a", "h"});
    ObjectiveSpec o;
    o.family = s.str("family");
    if (!contains(kObjectives, o.family)) {
        throw ConfigError("unknown objective family '" + o.family + "' at 'objective.family' (expected " +
                          joined(kObjectives) + ")");
    }
    if (o.family == "quadratic") {
        const json& rows = s.at("Q");
        if (!rows.is_array() || rows.empty()) throw ConfigError("'objective.Q' must be a square matrix");
        const auto n = static_cast<Eigen::Index>(rows.size());
        o.q.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Vec row = Section::to_vec(rows[static_cast<std::size_t>(i)], "objective.Q");
            if (row.size() != n) throw ConfigError("'objective.Q' must be a square matrix");
            o.q.row(i) = row.transpose();
        }
        o.b = s.has("b") ? s.vec("b") : Vec::Zero(n);
    }
    if (o.family == "squared_distance") {
        o.a = s.vec("a");
        if (s.has("h")) o.h = s.num("h");
    }
    return o;
}

StreamSpec parse_stream(const json& j) {
    Section s(j, "stream");
    s.allow({"family", "scale", "h", "mean", "noise", "points"});
    StreamSpec st;
    st.family = s.str("family");
    if (!contains(kStreams, st.family)) {
        throw ConfigError("unknown stream family '" + st.family + "' at 'stream.family' (expected " +
                          joined(kStreams) + ")");
    }
    if (s.has("scale")) st.scale = s.num("scale");
    if (s.has("h")) st.h = s.num("h");
    if (st.family == "noisy_linear") {
        st.mean = s.vec("mean");
        st.noise = s.num("noise");
    }
    if (st.family == "sampled_quadratic") {
        const json& pts = s.at("points");
        if (!pts.is_array() || pts.empty()) throw ConfigError("'stream.points' must be a non-empty array");
        for (const auto& p : pts) st.points.push_back(Section::to_vec(p, "stream.points"));
    }
    return st;
}

SolverOptions parse_options(const json& j) {
    Section s(j, "options");
    s.allow({"C", "f_star", "alpha", "line_search", "redecompose", "redecompose_threshold", "grad_bound",
             "aggressiveness", "t0", "epsilon", "eta", "delta_scale", "delta", "value_bound", "lipschitz"});
    SolverOptions o;
    o.C = s.opt_num("C");
    if (s.has("f_star")) {
        if (s.at("f_star").is_string()) {
            if (s.str("f_star") != "auto") throw ConfigError("'options.f_star' must be a number or \"auto\"");
            o.f_star_auto = true;
        } else {
            o.f_star = s.num("f_star");
        }
    }
    o.alpha = s.opt_num("alpha");
    o.line_search = s.flag("line_search", false);
    o.redecompose = s.flag("redecompose", false);
    if (s.has("redecompose_threshold")) {
        const long k = s.integer("redecompose_threshold");
        if (k < 4) throw ConfigError("'options.redecompose_threshold' must be at least 4");
        o.redecompose_threshold = static_cast<std::size_t>(k);
    }
    o.grad_bound = s.opt_num("grad_bound");
    if (s.has("aggressiveness")) o.aggressiveness = s.num("aggressiveness");
    o.t0 = s.opt_num("t0");
    o.epsilon = s.opt_num("epsilon");
    o.eta = s.opt_num("eta");
    if (s.has("delta_scale")) o.delta_scale = s.num("delta_scale");
    o.delta = s.opt_num("delta");
    o.value_bound = s.opt_num("value_bound");
    o.lipschitz = s.opt_num("lipschitz");
    return o;
}

bool is_online(Solver s) { return s != Solver::frank_wolfe && s != Solver::llo_cg; }

}  // namespace

std::string to_string(Solver solver) {
    return kSolvers[static_cast<std::size_t>(solver)];
}

Solver parse_solver(const std::string& name) {
    for (std::size_t i = 0; i < kSolvers.size(); ++i) {
        if (kSolvers[i] == name) return static_cast<Solver>(i);
    }
    throw ConfigError("unknown solver '" + name + "' at 'solver' (expected " + joined(kSolvers) + ")");
}

const std::vector<std::string>& certification_names() { return kCertifications; }

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
    Section s(doc, "");
    s.allow({"name", "polytope", "objective", "stream", "solver", "horizon", "seeds", "output_dir",
             "radius_schedule", "baseline", "options", "certify"});
    ExperimentConfig cfg;
    cfg.name = s.str("name");
    if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("'name' must be a non-empty file-name-safe string");
    }
    cfg.solver = parse_solver(s.str("solver"));
    cfg.polytope = parse_polytope(s.at("polytope"), base_dir);
    if (s.has("objective")) cfg.objective = parse_objective(s.at("objective"));
    if (s.has("stream")) cfg.stream = parse_stream(s.at("stream"));

    const long horizon = s.integer("horizon");
    if (horizon < 1) throw ConfigError("'horizon' must be at least 1");
    cfg.horizon = static_cast<int>(horizon);

    const json& seeds = s.at("seeds");
    if (!seeds.is_array()) throw ConfigError("'seeds' must be an array of non-negative integers");
    if (seeds.empty()) throw ConfigError("'seeds' must not be empty");
    std::set<std::uint64_t> seen;
    for (const auto& v : seeds) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError("'seeds' must be an array of non-negative integers");
        }
        const auto seed = v.get<std::uint64_t>();
        if (!seen.insert(seed).second) throw ConfigError("'seeds' contains duplicate seed " + std::to_string(seed));
        cfg.seeds.push_back(seed);
    }

    if (s.has("output_dir")) cfg.output_dir = s.str("output_dir");
    if (s.has("radius_schedule")) {
        try {
            cfg.radius_schedule = parse_radius_schedule(s.str("radius_schedule"));
        } catch (const ArgumentError& e) {
            throw ConfigError(std::string(e.what()) + " at 'radius_schedule'");
        }
    }
    if (s.has("options")) cfg.options = parse_options(s.at("options"));
    if (s.has("certify")) {
        const json& c = s.at("certify");
        if (!c.is_array()) throw ConfigError("'certify' must be an array of names");
        for (const auto& v : c) {
            if (!v.is_string() || !contains(kCertifications, v.get<std::string>())) {
                throw ConfigError("unknown certification " + v.dump() + " at 'certify' (expected " +
                                  joined(kCertifications) + ")");
            }
            cfg.certify.push_back(v.get<std::string>());
        }
    }
    if (s.has("baseline")) {
        cfg.baseline = s.str("baseline");
        if (*cfg.baseline != "projected_subgradient") {
            throw ConfigError("unknown baseline '" + *cfg.baseline + "' at 'baseline' (expected projected_subgradient)");
        }
        if (cfg.polytope.family != "simplex") throw ConfigError("'baseline' requires polytope family simplex");
        if (cfg.solver != Solver::oco_general && cfg.solver != Solver::oco_sc) {
            throw ConfigError("'baseline' requires solver oco_general or oco_sc");
        }
    }

    // Cross-field requirements.
    if (is_online(cfg.solver)) {
        if (!cfg.stream) throw ConfigError("missing required key 'stream' for solver " + to_string(cfg.solver));
        if (cfg.objective) throw ConfigError("'objective' is not used by solver " + to_string(cfg.solver));
    } else {
        if (!cfg.objective) throw ConfigError("missing required key 'objective' for solver " + to_string(cfg.solver));
        if (cfg.stream) throw ConfigError("'stream' is not used by solver " + to_string(cfg.solver));
    }
    if (cfg.solver == Solver::stochastic && cfg.stream->family != "noisy_linear" &&
        cfg.stream->family != "sampled_quadratic") {
        throw ConfigError("solver stochastic needs stream family noisy_linear or sampled_quadratic");
    }
    if (cfg.solver == Solver::bandit && cfg.polytope.family != "centered_simplex") {
        throw ConfigError("solver bandit needs a polytope containing the origin (family centered_simplex)");
    }
    for (const auto& c : cfg.certify) {
        if (c == "linear_rate" && cfg.solver != Solver::llo_cg) {
            throw ConfigError("certification linear_rate requires solver llo_cg");
        }
        if (c == "regret_bound" && cfg.solver != Solver::oco_general) {
            throw ConfigError("certification regret_bound requires solver oco_general");
        }
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
    }
    return parse_experiment_config(doc, path.parent_path());
}

Polytope build_polytope(const PolytopeSpec& spec) {
    try {
        if (spec.family == "simplex") return make_simplex(spec.n);
        if (spec.family == "hypercube") return make_hypercube(spec.n);
        if (spec.family == "centered_simplex") return make_centered_simplex(spec.n, spec.scale);
        if (spec.family == "flow_dag") {
            if (!spec.edges_file.empty()) return make_flow_polytope(DagGraph::read_file(spec.edges_file));
            int max_node = 0;
            for (const auto& [a, b] : spec.edges) max_node = std::max({max_node, a, b});
            return make_flow_polytope(DagGraph(max_node + 1, spec.edges, 0, max_node));
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("invalid 'polytope': ") + e.what());
    }
    throw ConfigError("unknown polytope family '" + spec.family + "'");
}

Objective build_objective(const ObjectiveSpec& spec, int n) {
    try {
        if (spec.family == "lower_bound") return make_lower_bound_objective(n);
        if (spec.family == "quadratic") {
            if (spec.q.rows() != n) throw ConfigError("'objective.Q' dimension does not match the polytope");
            return make_quadratic(spec.q, spec.b);
        }
        if (spec.family == "squared_distance") {
            if (spec.a.size() != n) throw ConfigError("'objective.a' dimension does not match the polytope");
            return make_squared_distance(spec.a, spec.h);
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("invalid 'objective': ") + e.what());
    }
    throw ConfigError("unknown objective family '" + spec.family + "'");
}

std::unique_ptr<LossStream> build_stream(const StreamSpec& spec, std::uint64_t seed, int n, int horizon) {
    try {
        if (spec.family == "linear") return make_linear_loss_stream(seed, n, horizon, spec.scale);
        if (spec.family == "strongly_convex") return make_strongly_convex_stream(seed, n, horizon, spec.h);
        if (spec.family == "noisy_linear") {
            if (spec.mean.size() != n) throw ConfigError("'stream.mean' dimension does not match the polytope");
            return make_noisy_linear_stream(seed, spec.mean, spec.noise, horizon);
        }
        if (spec.family == "sampled_quadratic") {
            for (const auto& p : spec.points) {
                if (p.size() != n) throw ConfigError("'stream.points' dimension does not match the polytope");
            }
            return make_sampled_quadratic_stream(seed, spec.points, horizon, spec.h);
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("invalid 'stream': ") + e.what());
    }
    throw ConfigError("unknown stream family '" + spec.family + "'");
}

double domain_radius(const Polytope& polytope) {
    switch (polytope.family()) {
        case Family::simplex: return 1.0;
        case Family::hypercube: return std::sqrt(static_cast<double>(polytope.dim()));
        case Family::centered_simplex: return polytope.origin_balls()->outer;
        default: return polytope.initial_vertex().coords.norm() + polytope.diameter();
    }
}

std::string list_catalog() {
    std::ostringstream out;
    out << "families: " << joined(kFamilies) << '\n'
        << "objectives: " << joined(kObjectives) << '\n'
        << "streams: " << joined(kStreams) << '\n'
        << "solvers: " << joined(kSolvers) << '\n'
        << "baselines: projected_subgradient\n"
        << "certifications: " << joined(kCertifications) << '\n'
        << "radius schedules: lemma, algbox\n";
    return out.str();
}

}  // namespace llocg::bench
