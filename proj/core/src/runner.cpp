#include "mgq/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mgq/model_zoo.hpp"
#include "mgq/rng.hpp"
#include "mgq/serialize.hpp"

namespace mgq {

namespace {

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
    return std::chrono::duration<Real>(Clock::now() - t0).count();
}

} // namespace

const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::nonzero_sum_discounted: return "nonzero-sum-discounted";
        case RunMode::nonzero_sum_finite_horizon: return "nonzero-sum-finite-horizon";
        case RunMode::zero_sum: return "zero-sum";
        case RunMode::team: return "team";
    }
    return "?";
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "nonzero-sum-discounted") return RunMode::nonzero_sum_discounted;
    if (s == "nonzero-sum-finite-horizon") return RunMode::nonzero_sum_finite_horizon;
    if (s == "zero-sum") return RunMode::zero_sum;
    if (s == "team") return RunMode::team;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

RunConfig run_config_from_file(const ConfigFile& f) {
    RunConfig cfg;

    cfg.model = f.text("run", "model", "");
    if (cfg.model.empty()) throw ConfigError(f.path, 0, "missing required key [run] model");
    {
        bool known = false;
        for (const ZooEntry& e : zoo_entries()) known = known || e.id == cfg.model;
        if (!known) {
            const ConfigValue* v = f.find("run", "model");
            throw ConfigError(f.path, v ? v->line : 0, "unknown model '" + cfg.model + "'");
        }
    }
    {
        const std::string mode = f.text("run", "mode", "nonzero-sum-discounted");
        try {
            cfg.mode = run_mode_from_string(mode);
        } catch (const std::invalid_argument& e) {
            const ConfigValue* v = f.find("run", "mode");
            throw ConfigError(f.path, v ? v->line : 0, e.what());
        }
    }
    cfg.seed = static_cast<std::uint64_t>(f.number("run", "seed", 1.0));
    cfg.out_dir = f.text("run", "out_dir", "out");
    cfg.threads = static_cast<int>(f.number("run", "threads", 1.0));
    cfg.validate = f.flag("run", "validate", true);

    if (auto it = f.sections.find("model"); it != f.sections.end()) {
        for (const auto& [key, value] : it->second) {
            if (value.kind != ConfigValue::Kind::number)
                throw ConfigError(f.path, value.line, "[model] " + key + " must be a number");
            cfg.model_params[key] = value.number;
        }
    }

    cfg.delta_ladder = f.numbers("quantize", "delta_ladder");
    if (cfg.delta_ladder.empty()) {
        if (f.has("quantize", "delta")) cfg.delta_ladder = {f.require_number("quantize", "delta")};
    }
    if (cfg.delta_ladder.empty())
        throw ConfigError(f.path, 0, "missing [quantize] delta or delta_ladder");
    for (std::size_t i = 0; i < cfg.delta_ladder.size(); ++i) {
        if (!(cfg.delta_ladder[i] > 0.0))
            throw ConfigError(f.path, 0, "delta ladder entries must be > 0");
        if (i > 0 && !(cfg.delta_ladder[i] < cfg.delta_ladder[i - 1]))
            throw ConfigError(f.path, 0, "delta ladder must be strictly decreasing");
    }
    cfg.action_delta = f.number("quantize", "action_delta", 0.0);
    cfg.quad.resolution = static_cast<int>(f.number("quantize", "quad_resolution", 8.0));
    {
        const std::string scheme = f.text("quantize", "quad_scheme", "midpoint-grid");
        if (scheme == "midpoint-grid")
            cfg.quad.scheme = QuadScheme::midpoint_grid;
        else if (scheme == "gauss-legendre-tensor")
            cfg.quad.scheme = QuadScheme::gauss_legendre_tensor;
        else {
            const ConfigValue* v = f.find("quantize", "quad_scheme");
            throw ConfigError(f.path, v ? v->line : 0, "unknown quad_scheme '" + scheme + "'");
        }
    }

    cfg.refine = static_cast<int>(f.number("verify", "refine", 4.0));
    if (cfg.refine < 2) throw ConfigError(f.path, 0, "[verify] refine must be >= 2");
    cfg.verify_tol = f.number("verify", "tol", 1e-9);
    cfg.omega_samples = static_cast<int>(f.number("verify", "omega_samples", 64.0));

    cfg.beta = f.number("solve", "beta", 0.9);
    cfg.horizon = static_cast<int>(f.number("solve", "horizon", 3.0));
    cfg.tol = f.number("solve", "tol", 1e-8);
    cfg.max_iter = static_cast<int>(f.number("solve", "max_iter", 5000.0));
    cfg.damping = f.number("solve", "damping", 0.5);
    cfg.budget = static_cast<int>(f.number("solve", "budget", 32.0));
    cfg.regret_fallback = f.flag("solve", "regret_fallback", true);
    if (cfg.mode == RunMode::nonzero_sum_finite_horizon) {
        if (cfg.horizon < 1) throw ConfigError(f.path, 0, "[solve] horizon must be >= 1");
    } else if (!(cfg.beta >= 0.0 && cfg.beta < 1.0)) {
        throw ConfigError(f.path, 0, "[solve] beta must be in [0,1)");
    }

    if (auto it = f.sections.find("truncate"); it != f.sections.end()) {
        cfg.truncated = true;
        for (Real lv : f.numbers("truncate", "levels"))
            cfg.levels.push_back(static_cast<int>(lv));
        if (cfg.levels.empty()) throw ConfigError(f.path, 0, "[truncate] levels is required");
        for (int lv : cfg.levels)
            if (lv < 1) throw ConfigError(f.path, 0, "[truncate] levels must be >= 1");
        cfg.radius0 = f.number("truncate", "radius0", 0.0);
        cfg.growth = f.number("truncate", "growth", 1.0);
        if (!(cfg.growth > 0.0)) throw ConfigError(f.path, 0, "[truncate] growth must be > 0");
        cfg.annulus_resolution = static_cast<int>(f.number("truncate", "annulus_resolution", 16.0));
        cfg.probe_lower = f.number("truncate", "probe_lower", -1.0);
        cfg.probe_upper = f.number("truncate", "probe_upper", 1.0);
        cfg.probe_points = static_cast<int>(f.number("truncate", "probe_points", 41.0));
        if (!(cfg.probe_lower < cfg.probe_upper))
            throw ConfigError(f.path, 0, "[truncate] probe box is empty");
    }

    cfg.max_tensor_entries = static_cast<long>(f.number("limits", "max_tensor_entries",
                                                         static_cast<Real>(kDefaultTensorCap)));
    cfg.max_states =
        static_cast<long>(f.number("limits", "max_states", static_cast<Real>(kDefaultStateCap)));
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_file(parse_config_file(path));
}

std::string emit_run_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[run]\n";
    os << "model = \"" << cfg.model << "\"\n";
    os << "mode = \"" << run_mode_name(cfg.mode) << "\"\n";
    os << "seed = " << cfg.seed << "\n";
    os << "out_dir = \"" << cfg.out_dir << "\"\n";
    os << "threads = " << cfg.threads << "\n";
    os << "validate = " << (cfg.validate ? "true" : "false") << "\n";
    if (!cfg.model_params.empty()) {
        os << "[model]\n";
        for (const auto& [key, value] : cfg.model_params)
            os << key << " = " << format_real(value) << "\n";
    }
    os << "[quantize]\n";
    os << "delta_ladder = [";
    for (std::size_t i = 0; i < cfg.delta_ladder.size(); ++i)
        os << (i ? ", " : "") << format_real(cfg.delta_ladder[i]);
    os << "]\n";
    os << "action_delta = " << format_real(cfg.action_delta) << "\n";
    os << "quad_resolution = " << cfg.quad.resolution << "\n";
    os << "quad_scheme = \""
       << (cfg.quad.scheme == QuadScheme::midpoint_grid ? "midpoint-grid" : "gauss-legendre-tensor")
       << "\"\n";
    os << "[verify]\n";
    os << "refine = " << cfg.refine << "\n";
    os << "tol = " << format_real(cfg.verify_tol) << "\n";
    os << "omega_samples = " << cfg.omega_samples << "\n";
    os << "[solve]\n";
    os << "beta = " << format_real(cfg.beta) << "\n";
    os << "horizon = " << cfg.horizon << "\n";
    os << "tol = " << format_real(cfg.tol) << "\n";
    os << "max_iter = " << cfg.max_iter << "\n";
    os << "damping = " << format_real(cfg.damping) << "\n";
    os << "budget = " << cfg.budget << "\n";
    os << "regret_fallback = " << (cfg.regret_fallback ? "true" : "false") << "\n";
    if (cfg.truncated) {
        os << "[truncate]\n";
        os << "levels = [";
        for (std::size_t i = 0; i < cfg.levels.size(); ++i)
            os << (i ? ", " : "") << cfg.levels[i];
        os << "]\n";
        os << "radius0 = " << format_real(cfg.radius0) << "\n";
        os << "growth = " << format_real(cfg.growth) << "\n";
        os << "annulus_resolution = " << cfg.annulus_resolution << "\n";
        os << "probe_lower = " << format_real(cfg.probe_lower) << "\n";
        os << "probe_upper = " << format_real(cfg.probe_upper) << "\n";
        os << "probe_points = " << cfg.probe_points << "\n";
    }
    os << "[limits]\n";
    os << "max_tensor_entries = " << cfg.max_tensor_entries << "\n";
    os << "max_states = " << cfg.max_states << "\n";
    return os.str();
}

namespace {

SolveReport solve_by_mode(const RunConfig& cfg, const FiniteGame& fg, std::uint64_t seed) {
    switch (cfg.mode) {
        case RunMode::nonzero_sum_discounted: {
            SolveReport report =
                nash_value_iteration(fg, cfg.beta, cfg.tol, cfg.max_iter, cfg.damping, seed);
            if (!report.converged && cfg.regret_fallback) {
                SolveReport fallback = stationary_regret_search(
                    fg, cfg.beta, cfg.tol, cfg.budget, mix_seed(seed, 0x66616c6cULL),
                    &report.stationary);
                fallback.method = report.method + "->" + fallback.method;
                fallback.residual = report.residual;
                fallback.residual_history = report.residual_history;
                return fallback;
            }
            return report;
        }
        case RunMode::nonzero_sum_finite_horizon:
            return backward_induction_nash(fg, cfg.horizon, cfg.tol, seed);
        case RunMode::zero_sum:
            return shapley_iteration(fg, cfg.beta, cfg.tol);
        case RunMode::team:
            return team_value_iteration(fg, cfg.beta, cfg.tol);
    }
    throw std::logic_error("unreachable");
}

std::string csv_header(int num_players) {
    std::string h = "delta,refine,k_states";
    for (int i = 1; i <= num_players; ++i) h += ",eps_" + std::to_string(i);
    h += ",residual,omega_hat,seconds";
    return h;
}

std::string csv_row(Real delta, int refine, int k, const std::vector<Real>& eps, Real residual,
                    Real omega, Real seconds) {
    std::string row = format_real(delta);
    row += "," + std::to_string(refine);
    row += "," + std::to_string(k);
    for (Real e : eps) row += "," + format_real(e);
    row += "," + format_real(residual);
    row += "," + format_real(omega);
    row += "," + format_real(seconds);
    return row;
}

Json compact_rung(const RunConfig& cfg, const ContinuousGame& game, Real delta,
                  std::uint64_t rung_seed, Real& out_seconds, std::vector<Real>& out_eps,
                  Real& out_residual, Real& out_omega, int& out_k) {
    const auto t0 = Clock::now();
    const StateNet snet =
        build_state_net(game.state_space, delta, cfg.quad, cfg.max_states);
    const Real adelta = cfg.action_delta > 0.0 ? cfg.action_delta : delta;
    const ActionNet anet = build_action_net(game.action_spaces, adelta);

    BuildOptions bopts;
    bopts.max_tensor_entries = cfg.max_tensor_entries;
    bopts.threads = cfg.threads;
    const FiniteGame fg = build_finite_game(game, snet, anet, bopts);

    SolveReport report = solve_by_mode(cfg, fg, rung_seed);

    const ExtendedPolicyProfile ext = report.finite_horizon
                                          ? extend_policy(report.markov, snet)
                                          : extend_policy(report.stationary, snet);
    CertifyOptions copts;
    copts.omega_samples = cfg.omega_samples;
    copts.seed = mix_seed(rung_seed, 0x6f6d656761ULL);
    copts.max_tensor_entries = cfg.max_tensor_entries;
    copts.threads = cfg.threads;
    const EpsCertificate cert =
        certify_epsilon(game, snet, anet, ext, cfg.refine, cfg.verify_tol, copts);

    out_seconds = seconds_since(t0);
    out_eps = cert.eps;
    out_residual = cert.operator_residual;
    out_omega = cert.omega_hat;
    out_k = snet.size();

    Json rung = Json::object();
    rung.set("delta", delta);
    rung.set("k_states", snet.size());
    rung.set("joint_actions", fg.joint_count());
    rung.set("max_row_defect", fg.provenance.max_row_defect);
    rung.set("solve", to_json(report));
    rung.set("certificate", to_json(cert));
    rung.set("seconds", out_seconds);
    return rung;
}

Json truncation_rung(const RunConfig& cfg, const ContinuousGame& game, int n,
                     std::uint64_t rung_seed, std::vector<std::vector<Real>>& probe_prev,
                     const std::vector<Point>& probe_points, Real& out_seconds,
                     std::vector<Real>& out_eps, Real& out_residual, Real& out_omega, int& out_k) {
    const auto t0 = Clock::now();
    LadderConfig lcfg;
    lcfg.radius0 = cfg.radius0;
    lcfg.growth = cfg.growth;
    lcfg.annulus_quad.resolution = cfg.annulus_resolution;

    const Truncation trunc = build_truncation(game, n, lcfg);
    const TruncatedGame tg = build_truncated_game(game, trunc);
    const Real delta = cfg.delta_ladder.front();
    const StateNet snet = build_state_net(trunc.K, delta, cfg.quad, cfg.max_states);
    const Real adelta = cfg.action_delta > 0.0 ? cfg.action_delta : delta;
    const ActionNet anet = build_action_net(game.action_spaces, adelta);

    BuildOptions bopts;
    bopts.max_tensor_entries = cfg.max_tensor_entries;
    bopts.threads = cfg.threads;
    const FiniteGame fg = build_truncated_finite_game(tg, snet, anet, bopts);

    SolveReport report = solve_by_mode(cfg, fg, rung_seed);
    const TruncatedLift lift = lift_from_truncation(report, tg, snet);

    // Lifted player costs on the probe box, compared against the previous rung.
    const int N = game.num_players;
    std::vector<std::vector<Real>> probe_vals(N, std::vector<Real>(probe_points.size(), 0.0));
    for (int i = 0; i < N; ++i)
        for (std::size_t p = 0; p < probe_points.size(); ++p)
            probe_vals[i][p] = lift.value_at(i, probe_points[p]);
    Real probe_diff = -1.0;
    if (!probe_prev.empty()) {
        probe_diff = 0.0;
        for (int i = 0; i < N; ++i)
            for (std::size_t p = 0; p < probe_points.size(); ++p)
                probe_diff = std::max(probe_diff, std::abs(probe_vals[i][p] - probe_prev[i][p]));
    }

    CertifyOptions copts;
    copts.omega_samples = cfg.omega_samples;
    copts.seed = mix_seed(rung_seed, 0x6f6d656761ULL);
    copts.max_tensor_entries = cfg.max_tensor_entries;
    copts.threads = cfg.threads;
    const EpsCertificate cert =
        certify_epsilon_truncated(tg, snet, anet, report.stationary, cfg.refine, cfg.verify_tol,
                                  copts);

    out_seconds = seconds_since(t0);
    out_eps = cert.eps;
    out_residual = cert.operator_residual;
    out_omega = cert.omega_hat;
    out_k = fg.num_states;

    Json rung = Json::object();
    rung.set("n", n);
    rung.set("K_lower", Json::reals(trunc.K.lower));
    rung.set("K_upper", Json::reals(trunc.K.upper));
    rung.set("delta", delta);
    rung.set("k_states", fg.num_states);
    rung.set("leakage", max_pseudo_state_mass(fg));
    rung.set("probe_max_diff_prev", probe_diff >= 0.0 ? Json(probe_diff) : Json());
    Json probes = Json::array();
    for (const auto& row : probe_vals) probes.push(Json::reals(row));
    rung.set("probe_values", std::move(probes));
    rung.set("solve", to_json(report));
    rung.set("certificate", to_json(cert));
    rung.set("seconds", out_seconds);

    probe_prev = std::move(probe_vals);
    return rung;
}

} // namespace

RunArtifacts run_pipeline(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    ContinuousGame game = make_zoo_game(cfg.model, cfg.model_params);
    game.horizon = cfg.mode == RunMode::nonzero_sum_finite_horizon
                       ? HorizonSpec::finite(cfg.horizon)
                       : HorizonSpec::discounted(cfg.beta);

    Json result = Json::object();
    result.set("artifact_version", kVersion);
    result.set("model", cfg.model);
    result.set("mode", run_mode_name(cfg.mode));
    result.set("config_toml", emit_run_config(cfg));

    if (cfg.validate && game.state_space.bounded()) {
        const Quadrature vquad =
            make_quadrature(game.state_space, {QuadScheme::gauss_legendre_tensor, 64});
        result.set("validation", to_json(validate_game(game, vquad, 16, mix_seed(cfg.seed, 7))));
    }

    std::ostringstream csv;
    csv << csv_header(game.num_players) << "\n";

    Json rungs = Json::array();
    if (!cfg.truncated) {
        for (std::size_t r = 0; r < cfg.delta_ladder.size(); ++r) {
            Real seconds = 0.0, residual = 0.0, omega = 0.0;
            std::vector<Real> eps;
            int k = 0;
            Json rung = compact_rung(cfg, game, cfg.delta_ladder[r], mix_seed(cfg.seed, r),
                                     seconds, eps, residual, omega, k);
            rungs.push(std::move(rung));
            csv << csv_row(cfg.delta_ladder[r], cfg.refine, k, eps, residual, omega, seconds)
                << "\n";
        }
        result.set("rungs", std::move(rungs));
    } else {
        if (game.state_space.bounded())
            throw std::invalid_argument(
                "truncation ladder requires a model with an unbounded state space");
        std::vector<Point> probe_points;
        {
            const int dim = game.state_space.dimension();
            const int P = std::max(2, cfg.probe_points);
            for (int p = 0; p < P; ++p) {
                const Real t = cfg.probe_lower +
                               (cfg.probe_upper - cfg.probe_lower) * p / static_cast<Real>(P - 1);
                probe_points.push_back(Point(dim, t));
            }
        }
        std::vector<std::vector<Real>> probe_prev;
        for (std::size_t r = 0; r < cfg.levels.size(); ++r) {
            Real seconds = 0.0, residual = 0.0, omega = 0.0;
            std::vector<Real> eps;
            int k = 0;
            Json rung = truncation_rung(cfg, game, cfg.levels[r], mix_seed(cfg.seed, r),
                                        probe_prev, probe_points, seconds, eps, residual, omega,
                                        k);
            rungs.push(std::move(rung));
            csv << csv_row(cfg.delta_ladder.front(), cfg.refine, k, eps, residual, omega, seconds)
                << "\n";
        }
        result.set("truncation", std::move(rungs));
    }

    result.set("wall_seconds", seconds_since(t0));

    RunArtifacts artifacts;
    artifacts.result_json = result.dump(2) + "\n";
    artifacts.convergence_csv = csv.str();
    artifacts.all_rungs_completed = true;
    return artifacts;
}

int run(const std::string& config_path, const RunOverrides& overrides) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
    if (overrides.threads) cfg.threads = *overrides.threads;

    RunArtifacts artifacts;
    try {
        artifacts = run_pipeline(cfg);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        // model/mode mismatch (e.g. a nonzero-sum model in zero-sum mode)
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "result.json", std::ios::binary);
        out << artifacts.result_json;
    }
    {
        std::ofstream out(fs::path(cfg.out_dir) / "convergence.csv", std::ios::binary);
        out << artifacts.convergence_csv;
    }
    return artifacts.all_rungs_completed ? 0 : 1;
}

std::string list_models() { return zoo_listing(); }

} // namespace mgq
