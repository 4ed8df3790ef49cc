#include "cim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cim {

namespace {

// Non-finite values propagate through a plain sum (inf - inf turns into NaN),
// so one accumulator checks a whole vector.
inline bool all_finite(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return std::isfinite(acc);
}

inline void check_finite(Variant v, const SolverState& s, int step, bool check_e) {
    if (!all_finite(s.x) || (check_e && !all_finite(s.e))) throw divergence_error(v, step);
}

} // namespace

void step_cac(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double alpha = schedule_value(sched, Param::alpha, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double xi = J.xi();
    const double bound = 1.5 * std::sqrt(alpha);

    J.mvm(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict e = s.e.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        const double zi = drift::feedback(e[i], xi, z[i]);
        z[i] = zi;
        const double xi_ = x[i];
        double xn = xi_ + (drift::osc(xi_, p) - zi) * dt;
        const double en = e[i] + drift::error_target(e[i], beta, xi_, alpha) * dt;
        if (sched.clamp) xn = std::clamp(xn, -bound, bound);
        x[i] = xn;
        e[i] = en;
    }
    check_finite(Variant::cac, s, step, true);
}

void step_cfc(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double alpha = schedule_value(sched, Param::alpha, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double xi = J.xi();

    J.mvm(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict e = s.e.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        const double zi = drift::feedback(e[i], xi, z[i]);
        z[i] = zi;
        const double xi_ = x[i];
        double xn = xi_ + (drift::osc(xi_, p) - zi) * dt;
        double en = e[i] + drift::error_target(e[i], beta, zi, alpha) * dt;
        if (sched.clamp) {
            xn = std::clamp(xn, -1.5, 1.5);
            en = std::max(en, 0.01);
        }
        x[i] = xn;
        e[i] = en;
    }
    check_finite(Variant::cfc, s, step, true);
}

void step_sfc(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double beta = schedule_value(sched, Param::beta, step);
    const double c = schedule_value(sched, Param::c, step);
    const double k = schedule_value(sched, Param::k, step);
    const double xi = J.xi();

    J.mvm(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict e = s.e.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        const double zi = xi * z[i];
        z[i] = zi;
        const double xi_ = x[i];
        x[i] = xi_ + (drift::osc(xi_, p) + drift::sfc_coupling(zi, e[i], c, k)) * dt;
        e[i] = e[i] + drift::error_lowpass(e[i], beta, zi) * dt;
    }
    check_finite(Variant::sfc, s, step, true);
}

void step_linear_baseline(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double xi = J.xi();

    J.mvm(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        const double zi = xi * z[i];
        z[i] = zi;
        const double xi_ = x[i];
        x[i] = xi_ + (drift::osc(xi_, p) - zi) * dt;
    }
    check_finite(Variant::linear_fb, s, step, false);
}

void step_tanh_baseline(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double p = schedule_value(sched, Param::p, step);
    const double c = schedule_value(sched, Param::c, step);
    const double xi = J.xi();

    J.mvm(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        const double zi = xi * z[i];
        z[i] = zi;
        const double xi_ = x[i];
        x[i] = xi_ + (drift::osc(xi_, p) - std::tanh(c * zi)) * dt;
    }
    check_finite(Variant::tanh_fb, s, step, false);
}

void step_dsbm(SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    const int n = s.n();
    const double dt = sched.dt;
    const double c = schedule_value(sched, Param::c, step);
    const double a = sched.n_steps > 0 ? static_cast<double>(step) / sched.n_steps : 1.0;
    const double coupling = c * J.xi() * sched.dsbm_xi_factor;

    // z <- J sgn(x) with sgn(0) = 0; the coupling enters with a minus sign so
    // the walls settle on minima of the same Ising energy as the CIM variants.
    J.mvm_sign(s.x.data(), s.z.data());
    double* __restrict x = s.x.data();
    double* __restrict y = s.y.data();
    double* __restrict z = s.z.data();
    for (int i = 0; i < n; ++i) {
        y[i] += dt * (-(1.0 - a) * x[i] - coupling * z[i]);
        x[i] += dt * y[i];
        if (x[i] > 1.0) {
            x[i] = 1.0;
            y[i] = 0.0;
        } else if (x[i] < -1.0) {
            x[i] = -1.0;
            y[i] = 0.0;
        }
    }
    check_finite(Variant::dsbm, s, step, false);
}

void step_variant(Variant v, SolverState& s, const CouplingMatrix& J, const ScheduleParams& sched, int step) {
    switch (v) {
        case Variant::cac: step_cac(s, J, sched, step); return;
        case Variant::cfc: step_cfc(s, J, sched, step); return;
        case Variant::sfc: step_sfc(s, J, sched, step); return;
        case Variant::linear_fb: step_linear_baseline(s, J, sched, step); return;
        case Variant::tanh_fb: step_tanh_baseline(s, J, sched, step); return;
        case Variant::dsbm: step_dsbm(s, J, sched, step); return;
    }
}

void EnergyTracker::reset(const CouplingMatrix& J, const double* x) {
    const int n = J.n();
    sigma_.resize(n);
    field_.resize(n);
    for (int i = 0; i < n; ++i) sigma_[i] = sign_readout(x[i]);
    rebuild(J);
}

void EnergyTracker::rebuild(const CouplingMatrix& J) {
    J.mvm(sigma_.data(), field_.data());
    double e = 0.0;
    for (size_t i = 0; i < sigma_.size(); ++i) e += sigma_[i] * field_[i];
    energy_ = 0.5 * e;
}

double EnergyTracker::update(const CouplingMatrix& J, const double* x) {
    const int n = static_cast<int>(sigma_.size());
    flips_.clear();
    for (int i = 0; i < n; ++i)
        if (sign_readout(x[i]) != sigma_[i]) flips_.push_back(i);

    if (flips_.empty()) return energy_;

    if (flips_.size() > static_cast<size_t>(n) / 8 + 1) {
        for (int i : flips_) sigma_[i] = -sigma_[i];
        rebuild(J);
        return energy_;
    }
    for (int kflip : flips_) {
        energy_ += -2.0 * sigma_[kflip] * field_[kflip];
        sigma_[kflip] = -sigma_[kflip];
        const double twos = 2.0 * sigma_[kflip];
        J.for_row(kflip, [&](int j, double w) { field_[j] += twos * w; });
    }
    return energy_;
}

SolverState make_initial_state(Variant v, int n, const InitParams& init, Rng& rng) {
    SolverState s;
    s.resize(n);
    if (v == Variant::dsbm) {
        for (int i = 0; i < n; ++i) s.x[i] = rng.uniform(-init.x_std, init.x_std);
        // y stays 0
    } else {
        for (int i = 0; i < n; ++i) s.x[i] = init.x_std * rng.normal();
        for (int i = 0; i < n; ++i) s.e[i] = init.e0;
    }
    return s;
}

Trajectory run_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched, uint64_t seed,
                          const TrajectoryOptions& opt) {
    return run_trajectory(v, J, sched, seed, default_init(v), opt);
}

Trajectory run_trajectory(Variant v, const CouplingMatrix& J, const ScheduleParams& sched, uint64_t seed,
                          const InitParams& init, const TrajectoryOptions& opt) {
    Rng rng(seed);
    return run_trajectory_from(v, J, sched, make_initial_state(v, J.n(), init, rng), opt);
}

Trajectory run_trajectory_from(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                               SolverState state, const TrajectoryOptions& opt) {
    sched.validate(v);
    if (state.n() != J.n()) throw std::invalid_argument("run_trajectory: state/instance dimension mismatch");

    Trajectory out;
    EnergyTracker tracker;
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
        step_variant(v, state, J, sched, step);
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
        // final-readout mode: only the last configuration is examined
        out.final_energy = ising_energy(J, read_spins(state.x));
        out.best_energy = out.final_energy;
        out.first_hit_step = sched.n_steps;
        out.best_config = read_spins(state.x);
    }
    out.final_x = std::move(state.x);
    return out;
}

} // namespace cim
