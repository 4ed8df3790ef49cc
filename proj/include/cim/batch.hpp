#pragma once

#include "cim/sde.hpp"
#include "cim/solver.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace cim {

struct BatchOptions {
    int n_trajectories = 200;
    uint64_t master_seed = 1;
    uint64_t instance_id = 0; // folded into every trajectory seed
    int threads = 0;          // 0 = runtime default
    bool serial = false;      // reference path: plain loop, no OpenMP
    bool track_energy = true;
};

// Per-instance batch of independent trajectories. Divergent trajectories are
// kept (best energy +inf) so they count as misses downstream.
struct BatchResult {
    std::string instance_label;
    int n = 0;
    int steps_per_traj = 0;
    int n_traj = 0;
    double target_energy = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> best_energy;
    std::vector<double> final_energy;
    std::vector<int> first_hit;
    std::vector<uint8_t> diverged;
    std::vector<int> diverged_step;

    int divergence_count() const;
    double min_best() const;

    // restrict to the first k trajectories (identical to a fresh k-trajectory
    // run because seeds depend only on the trajectory index)
    BatchResult head(int k) const;
};

BatchResult run_batch(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                      const BatchOptions& opt);
BatchResult run_batch_sde(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                          const NoiseParams& noise, const BatchOptions& opt);

} // namespace cim
