#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mgq/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mgq: finite state-action approximation and eps-Nash certification for "
                 "continuous Markov games"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "run a config: quantize, solve, certify");
    run_cmd->add_option("config", config_path, "path to the run config file")->required();
    CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "override [run] seed");
    CLI::Option* out_opt = run_cmd->add_option("--out-dir", out_dir, "override [run] out_dir");
    CLI::Option* thr_opt = run_cmd->add_option("--threads", threads, "override [run] threads");

    CLI::App* list_cmd = app.add_subcommand("list-models", "list the model zoo");

    CLI11_PARSE(app, argc, argv);

    if (list_cmd->parsed()) {
        std::cout << mgq::list_models();
        return 0;
    }

    mgq::RunOverrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (out_opt->count() > 0) overrides.out_dir = out_dir;
    if (thr_opt->count() > 0) overrides.threads = threads;
    return mgq::run(config_path, overrides);
}
