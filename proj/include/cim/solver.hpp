#pragma once

#include "cim/instance.hpp"
#include "cim/rng.hpp"
#include "cim/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cim {

struct divergence_error : std::runtime_error {
    divergence_error(Variant v, int step_index)
        : std::runtime_error(std::string("non-finite amplitude in ") + variant_name(v) + " at step " +
                             std::to_string(step_index)),
          step(step_index) {}
    int step;
};

// Per-trajectory state. x are the signal amplitudes, e the error/auxiliary
// amplitudes, z the mutual-coupling signal of the last step, y the dsbm
// momentum. All dynamics read the pre-step values (explicit Euler).
struct SolverState {
    std::vector<double> x, e, z, y;
    int step = 0;

    void resize(int n) {
        x.assign(n, 0.0);
        e.assign(n, 0.0);
        z.assign(n, 0.0);
        y.assign(n, 0.0);
        step = 0;
    }
    int n() const { return static_cast<int>(x.size()); }
};

// Drift terms shared by the deterministic steps and their stochastic twins.
// Keeping one definition per term makes the zero-noise limit bit-exact (the
// compiler contracts identical expression trees identically).
namespace drift {

// gain saturation plus linear pump/loss
inline double osc(double x, double p) { return -x * x * x + (p - 1.0) * x; }

// error-modulated coupling signal e * xi * (J x)_i
inline double feedback(double e, double xi, double jx) { return e * xi * jx; }

// error pulse, target-amplitude form: -beta e (m^2 - alpha)
inline double error_target(double e, double beta, double m, double alpha) {
    return -beta * e * (m * m - alpha);
}

// separated-feedback x drift beyond osc(): -tanh(c z) - k (z - e)
inline double sfc_coupling(double z, double e, double c, double k) {
    return -std::tanh(c * z) - k * (z - e);
}

// low-pass error pulse: -beta (e - z)
inline double error_lowpass(double e, double beta, double z) { return -beta * (e - z); }

} // namespace drift

// One Euler step of each dynamic; `step` selects the scheduled parameter
// values. Throws divergence_error if an amplitude leaves the finite range.
void step_cac(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);
void step_cfc(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);
void step_sfc(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);
void step_linear_baseline(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);
void step_tanh_baseline(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);
void step_dsbm(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);

void step_variant(Variant v, SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step);

// Maintains sigma = sign(x), the local field J*sigma and the Ising energy
// across steps. Spin flips are applied incrementally; when too many spins
// flip at once the field is rebuilt with a full MVM. For integer-weighted
// instances the incremental energy is exact.
class EnergyTracker {
public:
    void reset(const CouplingMatrix& J, const double* x);
    // sync sigma with sign(x) and return the energy of the new configuration
    double update(const CouplingMatrix& J, const double* x);

    double energy() const { return energy_; }
    const std::vector<double>& sigma() const { return sigma_; }

private:
    void rebuild(const CouplingMatrix& J);

    std::vector<double> sigma_, field_;
    std::vector<int> flips_;
    double energy_ = 0.0;
};

struct TrajectoryOptions {
    bool track_energy = true;           // evaluate sign(x) energy at every step
    bool record_energy_trace = false;   // keep the per-step energies
    std::vector<int> snapshot_steps;    // ascending step indices; 0 = initial state
};

struct Trajectory {
    double best_energy = 0.0;
    int first_hit_step = 0;    // step at which best_energy was first reached
    double final_energy = 0.0; // energy of sign(x) after the last step
    int steps_run = 0;
    SpinConfig best_config;
    std::vector<double> final_x;
    std::vector<double> energy_trace;               // step 0 .. n_steps when recorded
    std::vector<std::vector<double>> snapshots;     // x at each requested step
};

SolverState make_initial_state(Variant v, int n, const InitParams& init, Rng& rng);

Trajectory run_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched, uint64_t seed,
                          const TrajectoryOptions& opt = {});
Trajectory run_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched, uint64_t seed,
                          const InitParams& init, const TrajectoryOptions& opt = {});
Trajectory run_trajectory_from(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                               SolverState state, const TrajectoryOptions& opt = {});

} // namespace cim
