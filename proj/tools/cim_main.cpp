// Command-line driver: config-driven batch runner for the CIM-style Ising
// heuristics. See `cim --help` and README.md.

#include "cim/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

void add_common(CLI::App* sub, cim::RunConfig& cfg) {
    sub->add_option("--trajectories,-t", cfg.trajectories, "trajectories per instance");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all)");
    sub->add_flag("--serial", cfg.serial, "use the serial reference runner");
    sub->add_option("--steps", cfg.steps_override, "rescale preset step budget");
    sub->add_option("--out,-o", cfg.out_path, "output base path (writes <path>.jsonl / <path>.csv)");
    sub->add_option("--format", cfg.format, "json|csv|both")->default_str("json");
    sub->add_option("--target", cfg.target, "auto|brute|best-found|<energy>")->default_str("auto");
    sub->add_flag("!--no-energy-tracking", cfg.track_energy,
                  "only read out the final configuration (optical readout mode)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CIM-style Ising heuristics: solvers, benchmarks and energy model"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file");

    cim::RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "run one or more instances against presets");
    solve->add_option("--instance,-i", cfg.instances, "instance spec (sk:<n>:<seed>, ferro:<n>, torus:<r>:<c>:<seed>, or file path)")->required();
    solve->add_option("--preset,-p", cfg.presets, "solver preset (see `cim presets`)")->required();
    add_common(solve, cfg);

    auto* bench = app.add_subcommand("bench", "benchmark suite over instances x presets");
    bench->add_option("--instance,-i", cfg.instances, "instance specs")->required();
    bench->add_option("--preset,-p", cfg.presets, "solver presets")->required();
    add_common(bench, cfg);

    auto* scale = app.add_subcommand("scale", "median TTS vs problem size on generated SK instances");
    scale->add_option("--sizes", cfg.sizes, "problem sizes")->required()->delimiter(',');
    scale->add_option("--instances-per-size", cfg.instances_per_size, "instances per size");
    scale->add_option("--preset,-p", cfg.presets, "solver preset")->required();
    add_common(scale, cfg);

    auto* noise = app.add_subcommand("noise-sweep", "success probability and pump energy vs g^2");
    noise->add_option("--instance,-i", cfg.instances, "instance specs (default: 10 generated sk:100)");
    noise->add_option("--preset,-p", cfg.presets, "cac/cfc/sfc preset")->required();
    noise->add_option("--gsq", cfg.g_grid, "g^2 grid values")->required()->delimiter(',');
    noise->add_option("--rb", cfg.r_b, "extraction beamsplitter reflectivity R_B");
    add_common(noise, cfg);

    auto* chaos = app.add_subcommand("chaos", "trajectory correlation under a perturbed initial condition");
    chaos->add_option("--instance,-i", cfg.instances, "instance spec (default: generated sk:100)");
    chaos->add_option("--preset,-p", cfg.presets, "solver preset")->required();
    chaos->add_option("--checkpoints", cfg.checkpoints, "steps at which to correlate")->required()->delimiter(',');
    chaos->add_option("--pairs", cfg.pairs, "number of seed pairs");
    chaos->add_option("--perturb-std", cfg.perturb_std, "std of the initial perturbation");
    chaos->add_option("--init-std", cfg.chaos_init_std, "std of the shared initial condition");
    add_common(chaos, cfg);

    auto* energy = app.add_subcommand("energy", "optical energy-cost report for a given MVM count");
    energy->add_option("--n", cfg.energy_n, "problem size")->required();
    energy->add_option("--mvm", cfg.mvm, "matrix-vector multiplies to solution")->required();
    energy->add_option("--gsq", cfg.energy.g_sq, "saturation parameter g^2");
    energy->add_option("--roundtrip-dt", cfg.energy.roundtrip_dt, "round-trip time / signal lifetime");
    energy->add_option("--photon-energy", cfg.energy.photon_energy, "photon energy in joules");
    energy->add_option("--gpu-power", cfg.energy.gpu_power, "GPU power draw in watts");
    energy->add_option("--gpu-seconds-per-mvm", cfg.energy.gpu_seconds_per_mvm,
                       "measured GPU seconds per MVM");
    energy->add_option("--out,-o", cfg.out_path, "output base path");
    energy->add_option("--format", cfg.format, "json|csv|both");

    auto* presets = app.add_subcommand("presets", "list every shipped preset with its parameters");
    (void)presets;

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().at(0)->get_name();
    return cim::run_command(cfg, std::cout);
}
