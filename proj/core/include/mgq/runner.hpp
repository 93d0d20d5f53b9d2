#pragma once

#include <map>
#include <optional>

#include "mgq/config.hpp"
#include "mgq/truncate.hpp"

namespace mgq {

enum class RunMode {
    nonzero_sum_discounted,
    nonzero_sum_finite_horizon,
    zero_sum,
    team,
};

const char* run_mode_name(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct RunConfig {
    // [run]
    std::string model;
    RunMode mode = RunMode::nonzero_sum_discounted;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 1;
    bool validate = true;
    // [model]
    std::map<std::string, Real> model_params;
    // [quantize]
    std::vector<Real> delta_ladder; // strictly decreasing
    Real action_delta = 0.0;        // 0 => same as the rung's state delta
    QuadratureSpec quad;
    // [verify]
    int refine = 4;
    Real verify_tol = 1e-9;
    int omega_samples = 64;
    // [solve]
    Real beta = 0.9;
    int horizon = 3;
    Real tol = 1e-8;
    int max_iter = 5000;
    Real damping = 0.5;
    int budget = 32;
    bool regret_fallback = true;
    // [truncate] (optional ladder over n instead of delta)
    bool truncated = false;
    std::vector<int> levels;
    Real radius0 = 0.0;
    Real growth = 1.0;
    int annulus_resolution = 16;
    Real probe_lower = -1.0;
    Real probe_upper = 1.0;
    int probe_points = 41;
    // [limits]
    long max_tensor_entries = kDefaultTensorCap;
    long max_states = kDefaultStateCap;

    bool operator==(const RunConfig&) const = default;
};

RunConfig run_config_from_file(const ConfigFile& file);
RunConfig load_run_config(const std::string& path);

/// Canonical TOML emission; parsing it back yields an equal RunConfig.
std::string emit_run_config(const RunConfig& cfg);

struct RunArtifacts {
    std::string result_json;
    std::string convergence_csv;
    bool all_rungs_completed = false;
};

/// Executes the quantize -> solve -> certify pipeline for every rung of the
/// config's ladder. Throws on config/resource errors.
RunArtifacts run_pipeline(const RunConfig& cfg);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
};

/// Full CLI entry: parse, run, write result.json and convergence.csv.
/// Returns 0 on success, 2 on config errors, 3 on resource-cap errors.
int run(const std::string& config_path, const RunOverrides& overrides = RunOverrides{});

std::string list_models();

} // namespace mgq
