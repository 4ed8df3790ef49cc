#include "cim/batch.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class RunTraj>
BatchResult run_generic(const CouplingMatrix& J, const ScheduleParams& sched, const BatchOptions& opt,
                        RunTraj&& run_one) {
    if (opt.n_trajectories < 1) throw std::invalid_argument("batch: n_trajectories must be >= 1");

    BatchResult r;
    r.n = J.n();
    r.steps_per_traj = sched.n_steps;
    r.n_traj = opt.n_trajectories;
    r.best_energy.assign(opt.n_trajectories, kInf);
    r.final_energy.assign(opt.n_trajectories, kInf);
    r.first_hit.assign(opt.n_trajectories, 0);
    r.diverged.assign(opt.n_trajectories, 0);
    r.diverged_step.assign(opt.n_trajectories, -1);

    auto body = [&](int t) {
        const uint64_t seed = derive_seed(opt.master_seed, opt.instance_id, static_cast<uint64_t>(t));
        try {
            Trajectory traj = run_one(seed);
            r.best_energy[t] = traj.best_energy;
            r.final_energy[t] = traj.final_energy;
            r.first_hit[t] = traj.first_hit_step;
        } catch (const divergence_error& d) {
            r.diverged[t] = 1;
            r.diverged_step[t] = d.step;
        }
    };

    if (opt.serial) {
        for (int t = 0; t < opt.n_trajectories; ++t) body(t);
        return r;
    }

#ifdef _OPENMP
    if (opt.threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(opt.threads)
        for (int t = 0; t < opt.n_trajectories; ++t) body(t);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < opt.n_trajectories; ++t) body(t);
    }
#else
    for (int t = 0; t < opt.n_trajectories; ++t) body(t);
#endif
    return r;
}

} // namespace

int BatchResult::divergence_count() const {
    int c = 0;
    for (uint8_t d : diverged) c += d;
    return c;
}

double BatchResult::min_best() const {
    double m = kInf;
    for (double e : best_energy) m = std::min(m, e);
    return m;
}

BatchResult BatchResult::head(int k) const {
    if (k >= n_traj) return *this;
    BatchResult r = *this;
    r.n_traj = k;
    r.best_energy.resize(k);
    r.final_energy.resize(k);
    r.first_hit.resize(k);
    r.diverged.resize(k);
    r.diverged_step.resize(k);
    return r;
}

BatchResult run_batch(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                      const BatchOptions& opt) {
    sched.validate(v);
    TrajectoryOptions topt;
    topt.track_energy = opt.track_energy;
    return run_generic(J, sched, opt, [&](uint64_t seed) {
        return run_trajectory(v, J, sched, seed, topt);
    });
}

BatchResult run_batch_sde(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                          const NoiseParams& noise, const BatchOptions& opt) {
    sched.validate(v);
    noise.validate();
    TrajectoryOptions topt;
    topt.track_energy = opt.track_energy;
    return run_generic(J, sched, opt, [&](uint64_t seed) {
        NoiseParams per_traj = noise;
        per_traj.rng_seed = seed;
        return run_sde_trajectory(v, J, sched, per_traj, topt);
    });
}

} // namespace cim
