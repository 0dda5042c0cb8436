// dlrc command-line front end; talks to the library only through the C API.

#include "dlrc/dlrc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace {

void print_log(dlrc_log_level level, const char* message, void*)
{
    if (level == DLRC_LOG_INFO) {
        std::fprintf(stdout, "%s\n", message);
        std::fflush(stdout);
    } else {
        std::fprintf(stderr, "%s%s\n", level == DLRC_LOG_WARNING ? "warning: " : "", message);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Delay-line reservoir computing benchmarks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string{dlrc_version()});

    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string out_dir;
    app.add_option("--seed", seed, "Base seed (overrides task.seed)");
    app.add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");

    std::string config;
    auto* run = app.add_subcommand("run", "Train and evaluate one configuration");
    run->add_option("config", config, "Run-config file")->required();

    bool resume = false;
    std::string landscape;
    bool snr = false;
    std::size_t stop_after = 0;
    auto* sweep = app.add_subcommand("sweep", "Grid search over the sweep section");
    sweep->add_option("config", config, "Run-config file")->required();
    sweep->add_flag("--resume", resume, "Continue from sweep.checkpoint in the output directory");
    sweep->add_option("--landscape", landscape, "Write landscape.csv over two axes, e.g. f1,k");
    sweep->add_flag("--snr-curve", snr, "Write snr_curve.csv over sweep.snr_db");
    sweep->add_option("--stop-after", stop_after, "Stop after this many points (interruption testing)");

    auto* capacity = app.add_subcommand("capacity", "Linear, quadratic and cross memory capacities");
    capacity->add_option("config", config, "Run-config file")->required();

    std::string family;
    int n_nodes = 0;
    int f1 = 0;
    int f2 = 0;
    std::optional<std::uint64_t> mask_seed;
    auto* gen_mask = app.add_subcommand("gen-mask", "Write mask.csv");
    gen_mask->add_option("config", config, "Run-config file (optional)");
    gen_mask->add_option("--family", family, "random_uniform, random_binary, single_sine or two_sine");
    gen_mask->add_option("--nodes", n_nodes, "Number of virtual nodes")->check(CLI::PositiveNumber);
    gen_mask->add_option("--f1", f1, "First frequency index")->check(CLI::PositiveNumber);
    gen_mask->add_option("--f2", f2, "Second frequency index")->check(CLI::PositiveNumber);
    gen_mask->add_option("--mask-seed", mask_seed, "Seed for random masks");

    auto* dataset = app.add_subcommand("dataset", "Write the task dataset as dataset.csv");
    dataset->add_option("config", config, "Run-config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    dlrc_command_options o;
    dlrc_command_options_default(&o);
    o.config_path = config.empty() ? nullptr : config.c_str();
    if (seed) {
        o.has_seed = 1;
        o.seed = *seed;
    }
    o.jobs = jobs;
    o.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    o.resume = resume ? 1 : 0;
    o.landscape = landscape.empty() ? nullptr : landscape.c_str();
    o.snr_curve = snr ? 1 : 0;
    o.stop_after = stop_after;
    o.mask_family = family.empty() ? nullptr : family.c_str();
    o.n_nodes = n_nodes;
    o.f1 = f1;
    o.f2 = f2;
    if (mask_seed) {
        o.has_mask_seed = 1;
        o.mask_seed = *mask_seed;
    }
    o.log = print_log;

    if (run->parsed()) return dlrc_cmd_run(&o);
    if (sweep->parsed()) return dlrc_cmd_sweep(&o);
    if (capacity->parsed()) return dlrc_cmd_capacity(&o);
    if (gen_mask->parsed()) return dlrc_cmd_gen_mask(&o);
    return dlrc_cmd_dataset(&o);
}
