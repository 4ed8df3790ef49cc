#include "cim/solver.hpp"

#include "doctest.h"

#include <cmath>

using namespace cim;

namespace {

ScheduleParams fixed_sched(int n_steps, double dt, double p, double alpha, double beta, double c = 1.0,
                           double k = 0.0) {
    ScheduleParams s;
    s.n_steps = n_steps;
    s.dt = dt;
    s.t_r = n_steps;
    s.t_p = 0;
    s.p = p;
    s.alpha = alpha;
    s.beta = beta;
    s.c = c;
    s.k = k;
    return s;
}

// single-flip stable configuration reached by greedy descent
std::vector<double> local_minimum(const CouplingMatrix& J, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> s(J.n());
    for (auto& v : s) v = rng.next_u64() & 1 ? 1.0 : -1.0;
    std::vector<double> f(J.n());
    bool changed = true;
    while (changed) {
        changed = false;
        J.mvm(s.data(), f.data());
        for (int i = 0; i < J.n(); ++i) {
            if (s[i] * f[i] > 0.0) {
                s[i] = -s[i];
                changed = true;
                J.mvm(s.data(), f.data());
            }
        }
    }
    return s;
}

std::vector<double> scaled_field(const CouplingMatrix& J, const std::vector<double>& sigma) {
    std::vector<double> h(J.n());
    J.mvm(sigma.data(), h.data());
    for (auto& v : h) v *= J.xi();
    return h;
}

double max_abs_delta(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("cac step: x = 0 is inert, e integrates the target deficit") {
    auto J = ferromagnet(2);
    SolverState s;
    s.resize(2);
    s.e = {1.0, 1.0};
    auto sched = fixed_sched(10, 0.125, -1.0, 1.0, 0.8);
    step_cac(s, J, sched, 0);
    CHECK(s.x[0] == 0.0);
    CHECK(s.x[1] == 0.0);
    CHECK(s.e[0] == doctest::Approx(1.1).epsilon(1e-15));
}

TEST_CASE("cac step: solitary oscillator fixed point") {
    CouplingMatrix J(1, {0.0});
    SolverState s;
    s.resize(1);
    s.x = {1.0};
    s.e = {1.0};
    auto sched = fixed_sched(10, 0.125, 2.0, 1.0, 0.0);
    step_cac(s, J, sched, 0);
    CHECK(s.x[0] == 1.0);
}

TEST_CASE("cac fixed point residual") {
    // x_i = sqrt(alpha) sigma_i and e_i h_i = (p - 1 - alpha) sigma_i make
    // both update right-hand sides stationary
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        auto J = sk_random(12, seed);
        const double p = 1.0, alpha = 1.0, beta = 0.8, dt = 0.125;
        auto sched = fixed_sched(10, dt, p, alpha, beta);
        auto sigma = local_minimum(J, seed * 11 + 1);
        auto h = scaled_field(J, sigma);

        SolverState s;
        s.resize(J.n());
        for (int i = 0; i < J.n(); ++i) {
            REQUIRE(h[i] != 0.0);
            s.x[i] = std::sqrt(alpha) * sigma[i];
            s.e[i] = (p - 1.0 - alpha) * sigma[i] / h[i];
            CHECK(s.e[i] > 0.0); // error amplitude is positive at a local minimum
        }
        SolverState before = s;
        step_cac(s, J, sched, 0);
        CHECK(max_abs_delta(before.x, s.x) <= 1e-10 * dt);
        CHECK(max_abs_delta(before.e, s.e) <= 1e-10 * dt);
    }
}

TEST_CASE("cfc step: x = 0 is inert, e grows at rate beta*alpha") {
    auto J = ferromagnet(2);
    SolverState s;
    s.resize(2);
    s.e = {1.0, 1.0};
    auto sched = fixed_sched(10, 0.4, -1.0, 1.0, 0.2);
    step_cfc(s, J, sched, 0);
    CHECK(s.x[0] == 0.0);
    CHECK(s.e[0] == doctest::Approx(1.08).epsilon(1e-15));
}

TEST_CASE("cfc clamp floor") {
    auto J = ferromagnet(2);
    SolverState s;
    s.resize(2);
    s.x = {1.5, 1.5};
    s.e = {1.0, 1.0};
    // large beta drives e through the floor in one step
    auto sched = fixed_sched(10, 0.4, -1.0, 1.0, 4.0);
    step_cfc(s, J, sched, 0);
    CHECK(s.e[0] == 0.01);
    CHECK(s.e[1] == 0.01);
}

TEST_CASE("cfc fixed point residual") {
    // lambda solves lambda (lambda^2 - (p-1)) = sqrt(alpha); then
    // x = lambda sigma, e = (p - 1 - lambda^2) sigma / h gives z^2 = alpha
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        auto J = sk_random(12, seed ^ 0xabcULL);
        const double p = 0.5, alpha = 1.2, beta = 0.2, dt = 0.4;
        auto sched = fixed_sched(10, dt, p, alpha, beta);

        double lo = 0.0, hi = 4.0;
        auto g = [&](double l) { return l * (l * l - (p - 1.0)) - std::sqrt(alpha); };
        REQUIRE(g(hi) > 0.0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        const double lambda = 0.5 * (lo + hi);

        auto sigma = local_minimum(J, seed * 31 + 7);
        auto h = scaled_field(J, sigma);
        SolverState s;
        s.resize(J.n());
        for (int i = 0; i < J.n(); ++i) {
            s.x[i] = lambda * sigma[i];
            s.e[i] = (p - 1.0 - lambda * lambda) * sigma[i] / h[i];
            CHECK(s.e[i] >= 0.01); // above the clamp floor
        }
        SolverState before = s;
        step_cfc(s, J, sched, 0);
        CHECK(max_abs_delta(before.x, s.x) <= 1e-10 * dt);
        CHECK(max_abs_delta(before.e, s.e) <= 1e-10 * dt);
    }
}

TEST_CASE("sfc step: all-zero state is a fixed point") {
    auto J = sk_random(8, 5);
    SolverState s;
    s.resize(8);
    auto sched = fixed_sched(10, 0.4, 1.0, 1.0, 0.3, 1.0, 0.2);
    step_sfc(s, J, sched, 0);
    for (double v : s.x) CHECK(v == 0.0);
    for (double v : s.e) CHECK(v == 0.0);
}

TEST_CASE("sfc large-c fixed point residual") {
    // at p = 1 the amplitude root of -l^3 + (p-1) l = -1 is l = 1;
    // x = sigma, e = h, and tanh saturates to -sigma within 1e-8 at c = 50
    for (uint64_t seed : {2ULL, 4ULL, 6ULL}) {
        auto J = sk_random(16, seed); // even n keeps |h| >= xi
        const double dt = 0.4;
        auto sched = fixed_sched(10, dt, 1.0, 1.0, 0.3, 50.0, 0.2);
        auto sigma = local_minimum(J, seed + 100);
        auto h = scaled_field(J, sigma);

        SolverState s;
        s.resize(J.n());
        for (int i = 0; i < J.n(); ++i) {
            s.x[i] = sigma[i];
            s.e[i] = h[i];
        }
        SolverState before = s;
        step_sfc(s, J, sched, 0);
        CHECK(max_abs_delta(before.x, s.x) <= 1e-8 * dt);
        CHECK(max_abs_delta(before.e, s.e) <= 1e-8 * dt);
    }
}

TEST_CASE("sfc with k = 0 matches the tanh baseline x-update") {
    auto J = sk_random(10, 9);
    auto sched = fixed_sched(10, 0.4, 0.3, 1.0, 0.0, 2.0, 0.0);
    Rng rng(17);
    SolverState a;
    a.resize(10);
    for (auto& v : a.x) v = 0.3 * rng.normal();
    SolverState b = a;
    step_sfc(a, J, sched, 0);
    step_tanh_baseline(b, J, sched, 0);
    CHECK(a.x == b.x);
}

TEST_CASE("linear baseline: inert at zero and at the solitary fixed point") {
    auto J = sk_random(6, 3);
    SolverState s;
    s.resize(6);
    auto sched = fixed_sched(10, 0.1, -1.0, 1.0, 0.0);
    step_linear_baseline(s, J, sched, 0);
    for (double v : s.x) CHECK(v == 0.0);

    CouplingMatrix J1(1, {0.0});
    SolverState s1;
    s1.resize(1);
    s1.x = {1.0};
    auto sched1 = fixed_sched(10, 0.1, 2.0, 1.0, 0.0);
    step_linear_baseline(s1, J1, sched1, 0);
    CHECK(s1.x[0] == 1.0);
}

TEST_CASE("dsbm step basics") {
    auto J = ferromagnet(2);
    auto sched = require_preset("dsbm-sk").sched;

    SolverState s;
    s.resize(2);
    step_dsbm(s, J, sched, 0);
    CHECK(s.x == std::vector<double>{0.0, 0.0}); // sgn(0) = 0 keeps the origin fixed
    CHECK(s.y == std::vector<double>{0.0, 0.0});

    // wall: position update overshoots, amplitude is pinned and momentum zeroed
    s.x = {0.9, 0.9};
    s.y = {0.5, 0.5};
    step_dsbm(s, J, sched, 1000);
    CHECK(s.x[0] == 1.0);
    CHECK(s.y[0] == 0.0);
}

TEST_CASE("dsbm finds the ferromagnetic ground state") {
    auto J = ferromagnet(2);
    const Preset pr = require_preset("dsbm-sk");
    Trajectory t = run_trajectory(Variant::dsbm, J, pr.sched, 42, pr.init);
    CHECK(t.best_energy == -1.0);
    CHECK(t.best_config.sigma[0] == t.best_config.sigma[1]);
}

TEST_CASE("run_trajectory on the 2-spin ferromagnet") {
    auto J = ferromagnet(2);
    Preset pr = scale_preset_steps(require_preset("cac-sk"), 200);
    Trajectory t = run_trajectory(Variant::cac, J, pr.sched, 7, pr.init);
    CHECK(t.best_energy == -1.0);
    CHECK(t.first_hit_step <= 200);
}

TEST_CASE("run_trajectory with zero steps reports the initial configuration") {
    auto J = sk_random(10, 4);
    ScheduleParams sched = fixed_sched(0, 0.1, -1.0, 1.0, 0.2);
    sched.t_r = 0;
    Trajectory t = run_trajectory(Variant::cfc, J, sched, 3);
    Rng rng(3);
    SolverState init = make_initial_state(Variant::cfc, J.n(), default_init(Variant::cfc), rng);
    CHECK(t.best_energy == ising_energy(J, read_spins(init.x)));
    CHECK(t.first_hit_step == 0);
    CHECK(t.final_energy == t.best_energy);
}

TEST_CASE("identical seeds give bit-identical trajectories") {
    auto J = sk_random(24, 8);
    const Preset pr = require_preset("cfc-sk");
    TrajectoryOptions opt;
    opt.record_energy_trace = true;
    Trajectory a = run_trajectory(Variant::cfc, J, pr.sched, 1234, pr.init, opt);
    Trajectory b = run_trajectory(Variant::cfc, J, pr.sched, 1234, pr.init, opt);
    CHECK(a.best_energy == b.best_energy);
    CHECK(a.first_hit_step == b.first_hit_step);
    CHECK(a.final_x == b.final_x);
    CHECK(a.energy_trace == b.energy_trace);
}

TEST_CASE("sign symmetry of the deterministic flows") {
    auto J = sk_random(14, 21);
    Rng rng(99);

    auto run_pair = [&](Variant v, const ScheduleParams& sched, bool negate_e) {
        SolverState s1;
        s1.resize(J.n());
        for (auto& x : s1.x) x = 0.2 * rng.normal();
        if (v == Variant::cac || v == Variant::cfc)
            for (auto& e : s1.e) e = 1.0;
        if (v == Variant::sfc)
            for (int i = 0; i < J.n(); ++i) s1.e[i] = 0.1 * rng.normal();
        SolverState s2 = s1;
        for (auto& x : s2.x) x = -x;
        if (negate_e)
            for (auto& e : s2.e) e = -e;
        if (v == Variant::dsbm) {
            for (int i = 0; i < J.n(); ++i) {
                s1.y[i] = 0.05 * rng.normal();
                s2.y[i] = -s1.y[i];
            }
        }
        for (int step = 0; step < sched.n_steps; ++step) {
            step_variant(v, s1, J, sched, step);
            step_variant(v, s2, J, sched, step);
        }
        for (int i = 0; i < J.n(); ++i) {
            CHECK(s2.x[i] == -s1.x[i]);
            if (negate_e) CHECK(s2.e[i] == -s1.e[i]);
            else if (v != Variant::dsbm) CHECK(s2.e[i] == s1.e[i]);
        }
    };

    run_pair(Variant::cac, fixed_sched(50, 0.125, 0.5, 1.0, 0.8), false);
    run_pair(Variant::cfc, fixed_sched(50, 0.4, 0.5, 1.0, 0.2), false);
    run_pair(Variant::sfc, fixed_sched(50, 0.4, 0.5, 1.0, 0.3, 2.0, 0.2), true);
    run_pair(Variant::linear_fb, fixed_sched(50, 0.05, 0.5, 1.0, 0.0), false);
    run_pair(Variant::tanh_fb, fixed_sched(50, 0.05, 0.5, 1.0, 0.0, 1.5, 0.0), false);
    run_pair(Variant::dsbm, require_preset("dsbm-sk").sched, false);
}

TEST_CASE("clamp bounds hold after every step") {
    auto J = sk_random(30, 13);
    Rng rng(55);

    // cac: |x| <= 1.5 sqrt(alpha(step)) with alpha ramping
    {
        const Preset pr = require_preset("cac-sk");
        SolverState s = make_initial_state(Variant::cac, J.n(), pr.init, rng);
        for (int step = 0; step < 400; ++step) {
            step_cac(s, J, pr.sched, step);
            const double bound = 1.5 * std::sqrt(schedule_value(pr.sched, Param::alpha, step));
            for (double x : s.x) CHECK(std::abs(x) <= bound + 1e-12);
        }
    }
    // cfc: |x| <= 1.5, e >= 0.01
    {
        const Preset pr = require_preset("cfc-sk");
        SolverState s = make_initial_state(Variant::cfc, J.n(), pr.init, rng);
        for (int step = 0; step < 400; ++step) {
            step_cfc(s, J, pr.sched, step);
            for (double x : s.x) CHECK(std::abs(x) <= 1.5 + 1e-12);
            for (double e : s.e) CHECK(e >= 0.01);
        }
    }
    // dsbm: |x| <= 1
    {
        const Preset pr = require_preset("dsbm-sk");
        SolverState s = make_initial_state(Variant::dsbm, J.n(), pr.init, rng);
        for (int step = 0; step < 400; ++step) {
            step_dsbm(s, J, pr.sched, step);
            for (double x : s.x) CHECK(std::abs(x) <= 1.0);
        }
    }
}

TEST_CASE("energy bookkeeping: best is the running minimum of the trace") {
    auto J = sk_random(20, 31);
    const Preset pr = require_preset("cfc-sk");
    TrajectoryOptions opt;
    opt.record_energy_trace = true;
    Trajectory t = run_trajectory(Variant::cfc, J, pr.sched, 5, pr.init, opt);
    REQUIRE(t.energy_trace.size() == static_cast<size_t>(pr.sched.n_steps) + 1);
    double running = t.energy_trace[0];
    for (double e : t.energy_trace) running = std::min(running, e);
    CHECK(t.best_energy == running);
    CHECK(t.energy_trace[t.first_hit_step] == t.best_energy);
    for (int s = 0; s < t.first_hit_step; ++s) CHECK(t.energy_trace[s] > t.best_energy);
    CHECK(ising_energy(J, t.best_config) == t.best_energy);
    CHECK(t.energy_trace.back() == t.final_energy);
}

TEST_CASE("incremental energy tracking equals direct evaluation") {
    auto J = sk_random(26, 12); // +-1 weights keep the incremental path exact
    const Preset pr = require_preset("cfc-sk");
    Rng rng(6);
    SolverState s = make_initial_state(Variant::cfc, J.n(), pr.init, rng);
    EnergyTracker tracker;
    tracker.reset(J, s.x.data());
    CHECK(tracker.energy() == ising_energy(J, read_spins(s.x)));
    for (int step = 0; step < 500; ++step) {
        step_cfc(s, J, pr.sched, step);
        const double tracked = tracker.update(J, s.x.data());
        CHECK(tracked == ising_energy(J, read_spins(s.x)));
    }
}

TEST_CASE("divergence is detected and reports the step") {
    auto J = sk_random(16, 3);
    // unclamped cac with an oversized time step blows up
    ScheduleParams sched = fixed_sched(4000, 0.7, 1.0, 1.0, 0.8);
    sched.clamp = false;
    InitParams init{1.0, 1.0};
    try {
        run_trajectory(Variant::cac, J, sched, 11, init);
        FAIL("expected divergence");
    } catch (const divergence_error& e) {
        CHECK(e.step >= 0);
        CHECK(e.step < 4000);
    }
}
