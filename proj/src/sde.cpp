#include "cim/sde.hpp"

#include <algorithm>
#include <cmath>

namespace cim {

namespace {

inline bool all_finite(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return std::isfinite(acc);
}

// n draws for x~, then n draws for e~ (one homodyne tap per pulse per round
// trip; the same x~ feeds both the coupling and the error pump).
inline void draw_inferred(const SolverState& s, InferredAmplitudes& inf, const NoiseParams& noise,
                          Rng& rng) {
    const int n = s.n();
    const double si = noise.infer_std();
    for (int i = 0; i < n; ++i) inf.x_tilde[i] = s.x[i] + si * rng.normal();
    for (int i = 0; i < n; ++i) inf.e_tilde[i] = s.e[i] + si * rng.normal();
}

} // namespace

void sde_step_cac(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double alpha = schedule_value(sched, Param::alpha, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double xi = J.xi();
    const double g_sq = noise.g_sq;
    const double e_noise = std::sqrt(g_sq * dt * 0.5);
    const double bound = 1.5 * std::sqrt(alpha);

    inf.resize(n);
    draw_inferred(s, inf, noise, rng);
    J.mvm(inf.x_tilde.data(), s.z.data());

    for (int i = 0; i < n; ++i) {
        const double w1 = rng.normal();
        const double w2 = rng.normal();
        const double x = s.x[i];
        const double zi = drift::feedback(inf.e_tilde[i], xi, s.z[i]);
        s.z[i] = zi;
        // drift terms are shared with the deterministic step, so the
        // g^2 -> 0, R_B = 1 limit reproduces it bit for bit
        double xn = (x + (drift::osc(x, p) - zi) * dt) + std::sqrt(g_sq * (0.5 + x * x) * dt) * w1;
        // error pump p'_i - 1 = beta (alpha - x~^2) acting on e
        const double en =
            (s.e[i] + drift::error_target(s.e[i], beta, inf.x_tilde[i], alpha) * dt) + e_noise * w2;
        if (sched.clamp) xn = std::clamp(xn, -bound, bound);
        s.x[i] = xn;
        s.e[i] = en;
    }
    if (!all_finite(s.x) || !all_finite(s.e)) throw divergence_error(Variant::cac, step);
}

void sde_step_cfc(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double alpha = schedule_value(sched, Param::alpha, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double xi = J.xi();
    const double g_sq = noise.g_sq;
    const double e_noise = std::sqrt(g_sq * dt * 0.5);

    inf.resize(n);
    draw_inferred(s, inf, noise, rng);
    J.mvm(inf.x_tilde.data(), s.z.data());

    for (int i = 0; i < n; ++i) {
        const double w1 = rng.normal();
        const double w2 = rng.normal();
        const double x = s.x[i];
        inf.z_tilde[i] = xi * s.z[i];
        const double zi = drift::feedback(inf.e_tilde[i], xi, s.z[i]); // e~-multiplied feedback
        s.z[i] = zi;
        double xn = (x + (drift::osc(x, p) - zi) * dt) + std::sqrt(g_sq * (0.5 + x * x) * dt) * w1;
        // The error pump monitors the injected feedback signal, as in the
        // deterministic flow; the zero-noise limit then matches it exactly.
        double en = (s.e[i] + drift::error_target(s.e[i], beta, zi, alpha) * dt) + e_noise * w2;
        if (sched.clamp) {
            xn = std::clamp(xn, -1.5, 1.5);
            en = std::max(en, 0.01);
        }
        s.x[i] = xn;
        s.e[i] = en;
    }
    if (!all_finite(s.x) || !all_finite(s.e)) throw divergence_error(Variant::cfc, step);
}

void sde_step_sfc(SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                  const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double c = schedule_value(sched, Param::c, step);
    const double k = schedule_value(sched, Param::k, step);
    const double xi = J.xi();
    const double g_sq = noise.g_sq;
    const double e_noise = std::sqrt(g_sq * dt * 0.5);

    inf.resize(n);
    draw_inferred(s, inf, noise, rng);
    J.mvm(inf.x_tilde.data(), s.z.data());

    for (int i = 0; i < n; ++i) {
        const double w1 = rng.normal();
        const double w2 = rng.normal();
        const double x = s.x[i];
        const double zt = xi * s.z[i]; // z~_i
        inf.z_tilde[i] = zt;
        s.z[i] = zt;
        s.x[i] = (x + (drift::osc(x, p) + drift::sfc_coupling(zt, inf.e_tilde[i], c, k)) * dt) +
                 std::sqrt(g_sq * (0.5 + x * x) * dt) * w1;
        s.e[i] = (s.e[i] + drift::error_lowpass(s.e[i], beta, zt) * dt) + e_noise * w2;
    }
    if (!all_finite(s.x) || !all_finite(s.e)) throw divergence_error(Variant::sfc, step);
}

void sde_step_variant(Variant v, SolverState& s, InferredAmplitudes& inf, const CouplingMatrix& J,
                      const ScheduleParams& sched, const NoiseParams& noise, int step, Rng& rng) {
    switch (v) {
        case Variant::cac: sde_step_cac(s, inf, J, sched, noise, step, rng); return;
        case Variant::cfc: sde_step_cfc(s, inf, J, sched, noise, step, rng); return;
        case Variant::sfc: sde_step_sfc(s, inf, J, sched, noise, step, rng); return;
        default:
            throw std::invalid_argument(std::string("no stochastic dynamics for variant ") +
                                        variant_name(v));
    }
}

Trajectory run_sde_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                              const NoiseParams& noise, const TrajectoryOptions& opt) {
    return run_sde_trajectory(v, J, sched, noise, default_init(v), opt);
}

Trajectory run_sde_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                              const NoiseParams& noise, const InitParams& init,
                              const TrajectoryOptions& opt) {
    sched.validate(v);
    Rng rng(noise.rng_seed);
    SolverState state = make_initial_state(v, J.n(), init, rng);

    Trajectory out;
    EnergyTracker tracker;
    InferredAmplitudes inf;
    size_t snap_next = 0;

    auto snapshot_if_due = [&](int step_index) {
        while (snap_next < opt.snapshot_steps.size() && opt.snapshot_steps[snap_next] == step_index) {
            out.snapshots.push_back(state.x);
            ++snap_next;
        }
    };

    tracker.reset(J, state.x.data());
    out.best_energy = tracker.energy();
    out.first_hit_step = 0;
    out.best_config.sigma = tracker.sigma();
    if (opt.record_energy_trace) out.energy_trace.push_back(tracker.energy());
    snapshot_if_due(0);

    for (int step = 0; step < sched.n_steps; ++step) {
        sde_step_variant(v, state, inf, J, sched, noise, step, rng);
        state.step = step + 1;
        if (opt.track_energy) {
            const double e = tracker.update(J, state.x.data());
            if (e < out.best_energy) {
                out.best_energy = e;
                out.first_hit_step = step + 1;
                out.best_config.sigma = tracker.sigma();
            }
            if (opt.record_energy_trace) out.energy_trace.push_back(e);
        }
        snapshot_if_due(step + 1);
    }

    out.steps_run = sched.n_steps;
    if (opt.track_energy) {
        out.final_energy = tracker.update(J, state.x.data());
    } else {
        out.final_energy = ising_energy(J, read_spins(state.x));
        out.best_energy = out.final_energy;
        out.first_hit_step = sched.n_steps;
        out.best_config = read_spins(state.x);
    }
    out.final_x = std::move(state.x);
    return out;
}

} // namespace cim
