#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "llocg/objectives.hpp"
#include "llocg/offline_cg.hpp"
#include "llocg/online_cg.hpp"
#include "llocg/polytope.hpp"

namespace llocg::bench {

enum class Solver { frank_wolfe, llo_cg, oco_general, oco_sc, stochastic, bandit };

std::string to_string(Solver solver);
Solver parse_solver(const std::string& name);

struct PolytopeSpec {
    std::string family;  // simplex | hypercube | flow_dag | centered_simplex
    int n = 0;
    double scale = 1.0;
    std::vector<std::pair<int, int>> edges;  // flow_dag, inline
    std::string edges_file;                  // flow_dag, resolved against the config's directory
};

struct ObjectiveSpec {
    std::string family;  // lower_bound | quadratic | squared_distance
    Mat q;
    Vec b;
    Vec a;
    double h = 1.0;
};

struct StreamSpec {
    std::string family;  // linear | strongly_convex | noisy_linear | sampled_quadratic
    double scale = 1.0;
    double h = 1.0;
    Vec mean;
    double noise = 0.0;
    std::vector<Vec> points;
};

struct SolverOptions {
    std::optional<double> C;
    std::optional<double> f_star;
    bool f_star_auto = false;
    std::optional<double> alpha;
    bool line_search = false;
    bool redecompose = false;
    std::optional<std::size_t> redecompose_threshold;
    std::optional<double> grad_bound;
    double aggressiveness = 1.0;
    std::optional<double> t0;
    std::optional<double> epsilon;
    std::optional<double> eta;
    double delta_scale = 1.0;
    std::optional<double> delta;
    std::optional<double> value_bound;
    std::optional<double> lipschitz;
};

/// Names of the checks a run can certify; each maps to one acceptance property.
///   linear_rate    gap(t) <= C exp(-sigma t / (4 beta n mu^2)) for every t (llo_cg)
///   regret_bound   final regret <= explicit general-mode bound (oco_general)
///   oracle_budget  oracle calls == iterations, or <= 2 per iteration with re-decomposition
///   feasibility    every played point lies in the polytope (tol 1e-8)
const std::vector<std::string>& certification_names();

struct ExperimentConfig {
    std::string name;
    PolytopeSpec polytope;
    std::optional<ObjectiveSpec> objective;
    std::optional<StreamSpec> stream;
    Solver solver = Solver::llo_cg;
    int horizon = 1;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> output_dir;
    RadiusSchedule radius_schedule = RadiusSchedule::lemma;
    std::optional<std::string> baseline;
    SolverOptions options;
    std::vector<std::string> certify;
};

/// Throws ConfigError naming the offending key for unknown keys, unknown
/// names, wrong types, an empty seeds list, or missing required fields.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

Polytope build_polytope(const PolytopeSpec& spec);
Objective build_objective(const ObjectiveSpec& spec, int n);
std::unique_ptr<LossStream> build_stream(const StreamSpec& spec, std::uint64_t seed, int n, int horizon);

/// max ||v|| over the vertices of P (bounds ||x|| on P).
double domain_radius(const Polytope& polytope);

/// Families, objectives, streams, solvers and certifications, one per line.
std::string list_catalog();

}  // namespace llocg::bench
