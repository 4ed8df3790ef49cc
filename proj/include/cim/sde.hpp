#pragma once

#include "cim/solver.hpp"

#include <cstdint>

namespace cim {

// Truncated-Wigner noise model. g_sq is the saturation parameter g^2
// (saturation photon number 1/g^2); r_b the extraction beamsplitter
// reflectivity controlling how noisy the inferred amplitudes are.
struct NoiseParams {
    double g_sq = 1e-6;
    double r_b = 0.1;
    uint64_t rng_seed = 1;

    void validate() const {
        if (!(g_sq > 0.0)) throw std::invalid_argument("noise: g_sq must be > 0");
        if (!(r_b > 0.0) || r_b > 1.0) throw std::invalid_argument("noise: r_b must be in (0, 1]");
    }

    // std of the inference noise added to a measured amplitude
    double infer_std() const { return std::sqrt(g_sq * (1.0 - r_b) / (4.0 * r_b)); }
};

// x~ = x + sqrt(g^2 (1-R_B) / (4 R_B)) w
inline double infer(double value, const NoiseParams& noise, double w) {
    return value + noise.infer_std() * w;
}

// Inferred amplitudes of one round trip; regenerated every step.
struct InferredAmplitudes {
    std::vector<double> x_tilde, e_tilde, z_tilde;

    void resize(int n) {
        x_tilde.assign(n, 0.0);
        e_tilde.assign(n, 0.0);
        z_tilde.assign(n, 0.0);
    }
};

// Euler-Maruyama steps. Drift matches the deterministic variants; diffusion
// uses the pre-step state. Draw order per step: n draws for x~, n for e~,
// then per oscillator one signal draw and one error draw (4n normals total).
void sde_step_cac(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng);
void sde_step_cfc(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng);
void sde_step_sfc(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng);

void sde_step_variant(Variant v, SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                      const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng);

// Same bookkeeping as run_trajectory; noise.rng_seed seeds both the initial
// state and the noise stream.
Trajectory run_sde_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                              const NoiseParams& noise, const TrajectoryOptions& opt = {});
Trajectory run_sde_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                              const NoiseParams& noise, const InitParams& init,
                              const TrajectoryOptions& opt = {});

} // namespace cim
