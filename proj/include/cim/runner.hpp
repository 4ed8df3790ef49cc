#pragma once

#include "cim/energy_model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cim {

// "sk:<n>:<seed>", "ferro:<n>", "torus:<rows>:<cols>:<seed>", or a G-set file path.
CouplingMatrix load_instance(const std::string& spec);
// Stable stream id per instance; independent of list position so adding
// instances never shifts existing trajectory seeds.
uint64_t instance_stream_id(const std::string& spec);

struct RunConfig {
    std::string command;                // solve|bench|scale|noise-sweep|chaos|energy|presets
    std::vector<std::string> instances; // instance specs
    std::vector<std::string> presets;   // preset names

    int steps_override = 0; // > 0 rescales each preset's step budget
    int trajectories = 200;
    uint64_t seed = 1;
    int threads = 0;
    bool serial = false;
    bool track_energy = true;
    std::string target = "auto"; // auto | brute | best-found | <energy value>

    std::string out_path; // base path for result files ("" = stdout summary only)
    std::string format = "json"; // json | csv | both

    // scale
    std::vector<int> sizes;
    int instances_per_size = 20;

    // noise sweep
    std::vector<double> g_grid;
    double r_b = 0.1;

    // chaos
    std::vector<int> checkpoints;
    int pairs = 20;
    double perturb_std = 0.01;
    double chaos_init_std = 0.25;

    // energy
    double mvm = 0.0;
    int energy_n = 0;
    EnergyParams energy;

    void validate() const; // throws std::invalid_argument naming the field
};

// Executes the configured study and writes result files. Returns the process
// exit code (0 on success). Output payloads are deterministic for a fixed
// config and seed, independent of the worker count.
int run_command(const RunConfig& cfg, std::ostream& log);

} // namespace cim
