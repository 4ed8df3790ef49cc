#include "cim/metrics.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace cim;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BatchResult fake_batch(std::vector<double> best, std::vector<double> final_e, double target, int steps) {
    BatchResult b;
    b.n = 8;
    b.n_traj = static_cast<int>(best.size());
    b.steps_per_traj = steps;
    b.target_energy = target;
    b.best_energy = std::move(best);
    b.final_energy = std::move(final_e);
    b.first_hit.assign(b.n_traj, 0);
    b.diverged.assign(b.n_traj, 0);
    b.diverged_step.assign(b.n_traj, -1);
    return b;
}
} // namespace

TEST_CASE("success probability") {
    CHECK(success_probability(fake_batch({-3, -3, -3}, {-3, -3, -3}, -3, 10)) == 1.0);
    CHECK(success_probability(fake_batch({-1, -2, 0}, {-1, -2, 0}, -3, 10)) == 0.0);
    CHECK(success_probability(fake_batch({-3, -3, -3, -1}, {-3, -3, -3, -1}, -3, 10)) == 0.75);
    CHECK_THROWS(success_probability(fake_batch({}, {}, -3, 10)));
}

TEST_CASE("tts restart formula") {
    CHECK(tts(0.5, 1000) == doctest::Approx(6643.86).epsilon(1e-5));
    CHECK(tts(1.0, 500) == 500.0);
    CHECK(tts(0.995, 500) == 500.0);
    CHECK(std::isinf(tts(0.0, 100)));
    CHECK_THROWS(tts(0.5, 0.0));
    CHECK_THROWS(tts(-0.1, 10.0));

    // monotone non-increasing in ps
    double prev = kInf;
    for (double ps = 0.01; ps <= 1.0; ps += 0.01) {
        const double t = tts(ps, 750);
        CHECK(t <= prev + 1e-9);
        prev = t;
    }
}

TEST_CASE("mvm equals tts steps") {
    TtsReport r;
    r.ps = 0.3;
    r.tts_steps = 2e5;
    r.mvm_to_solution = r.tts_steps;
    CHECK(mvm_to_solution(r) == 2e5);
    r.tts_steps = kInf;
    r.mvm_to_solution = kInf;
    CHECK(std::isinf(mvm_to_solution(r)));
    r.tts_steps = 500;
    CHECK(mvm_to_solution({0.99, 500, 500}) == 500.0);
}

TEST_CASE("percentiles") {
    CHECK(percentile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(percentile({7}, 0.25) == 7.0);
    CHECK(std::isinf(percentile({1, kInf}, 0.75)));
    auto qs = percentiles({5, 1, 4, 2, 3}, {0.0, 0.25, 0.5, 1.0});
    CHECK(qs[0] == 1.0);
    CHECK(qs[1] == 2.0);
    CHECK(qs[2] == 3.0);
    CHECK(qs[3] == 5.0);
    CHECK(percentile({1, 2}, 0.5) == 1.5);
    CHECK_THROWS(percentile({}, 0.5));
}

TEST_CASE("scaling fit exact and noisy") {
    {
        auto fit = scaling_fit({{100, 10}, {400, 100}});
        CHECK(fit.b == doctest::Approx(std::pow(10.0, 0.1)).epsilon(1e-12));
        CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.r_squared == doctest::Approx(1.0));
    }
    {
        auto fit = scaling_fit({{100, 42}, {200, 42}, {300, 42}});
        CHECK(fit.b == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.a == doctest::Approx(42.0).epsilon(1e-12));
    }
    {
        // recover known coefficients from noisy synthetic data
        const double A = 3.0, B = 1.8;
        Rng rng(5);
        std::vector<std::pair<double, double>> pts;
        for (int n = 50; n <= 800; n += 50) {
            const double t = A * std::pow(B, std::sqrt(static_cast<double>(n)));
            pts.push_back({static_cast<double>(n), t * std::exp(0.02 * rng.normal())});
        }
        auto fit = scaling_fit(pts);
        CHECK(fit.b == doctest::Approx(B).epsilon(0.05));
        CHECK(fit.a == doctest::Approx(A).epsilon(0.30));
        CHECK(fit.r_squared > 0.99);
    }
    CHECK_THROWS(scaling_fit({{100, 10}}));
    CHECK_THROWS(scaling_fit({{100, 10}, {100, 20}}));
    CHECK_THROWS(scaling_fit({{100, 10}, {200, kInf}}));
}

TEST_CASE("lognormal fit") {
    {
        auto fit = lognormal_fit({5, 5, 5, 5});
        CHECK(fit.mu == doctest::Approx(std::log(5.0)));
        CHECK(fit.sigma == 0.0);
    }
    {
        const double e1 = std::exp(1.0), e3 = std::exp(3.0);
        auto fit = lognormal_fit({e1, e3});
        CHECK(fit.mu == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fit.sigma == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        Rng rng(17);
        std::vector<double> sample;
        for (int i = 0; i < 10000; ++i) sample.push_back(std::exp(2.5 + 0.8 * rng.normal()));
        auto fit = lognormal_fit(sample);
        CHECK(fit.mu == doctest::Approx(2.5).epsilon(0.05));
        CHECK(fit.sigma == doctest::Approx(0.8).epsilon(0.05));
        CHECK(fit.n_used == 10000);

        // survival curve: half the samples should exceed exp(mu)
        CHECK(fit.predicted_unsolved(std::exp(2.5)) == doctest::Approx(5000).epsilon(0.01));
        CHECK(fit.predicted_unsolved(1e9) == doctest::Approx(0.0).epsilon(1e-6));
    }
    {
        auto fit = lognormal_fit({10.0, kInf, 20.0, kInf});
        CHECK(fit.n_used == 2);
        CHECK(fit.n_infinite == 2);
        CHECK(fit.predicted_unsolved(1e12) == doctest::Approx(2.0)); // infinite tail never solves
    }
    CHECK_THROWS(lognormal_fit({1.0, -2.0}));
    CHECK_THROWS(lognormal_fit({0.0}));
    CHECK_THROWS(lognormal_fit({kInf}));
}

TEST_CASE("final state ground fraction") {
    CHECK(final_state_ground_fraction(fake_batch({-5, -5, -5}, {-5, -5, -5}, -5, 10)) == 1.0);
    CHECK(final_state_ground_fraction(fake_batch({-5, -5, -5, -4}, {-5, -5, -3, -4}, -5, 10)) ==
          doctest::Approx(2.0 / 3.0));
    CHECK_THROWS(final_state_ground_fraction(fake_batch({-1, -2}, {-1, -2}, -5, 10)));
}

TEST_CASE("wilson interval sanity") {
    auto [lo, hi] = wilson_interval(50, 100);
    CHECK(lo > 0.40);
    CHECK(hi < 0.60);
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
    auto [lo0, hi0] = wilson_interval(0, 100);
    CHECK(lo0 <= 1e-12);
    CHECK(hi0 > 0.0);
    auto [lo1, hi1] = wilson_interval(100, 100);
    CHECK(hi1 == 1.0);
    CHECK(lo1 < 1.0);
    CHECK_THROWS(wilson_interval(0, 0));
}

TEST_CASE("pearson and the checkpoint-0 closed form") {
    // r at step 0 for gaussian init of std s0 with kick of std sp is
    // 1 / sqrt(1 + (sp/s0)^2), up to sampling error at n = 100
    const double s0 = 0.25, sp = 0.01;
    const double want = 1.0 / std::sqrt(1.0 + (sp / s0) * (sp / s0));
    CHECK(want >= 0.999);

    Rng rng(31);
    double acc = 0.0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> a(100), b(100);
        for (int i = 0; i < 100; ++i) {
            a[i] = s0 * rng.normal();
            b[i] = a[i] + sp * rng.normal();
        }
        acc += pearson(a, b);
    }
    CHECK(acc / reps == doctest::Approx(want).epsilon(0.002));

    CHECK(std::isnan(pearson({1, 1, 1}, {1, 2, 3}))); // zero variance reported as undefined
}

TEST_CASE("perturbation correlation at checkpoint zero") {
    auto J = sk_random(100, 3);
    const Preset pr = require_preset("cfc-fixed");
    double acc = 0.0;
    const int pairs = 50;
    for (int i = 0; i < pairs; ++i) {
        auto pts = perturbation_correlation(Variant::cfc, J, pr.sched, 1000 + i, 0.01, {0}, 0.25);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].step == 0);
        acc += pts[0].r;
    }
    CHECK(acc / pairs == doctest::Approx(0.9992).epsilon(0.002));
}

TEST_CASE("residual energy constant") {
    {
        auto fit = residual_energy_constant({{0.0, 1.0, 1.0, 2.0}});
        CHECK(fit.k == doctest::Approx(2.0));
    }
    {
        // doubling beta halves the prediction at fixed K
        ResidualEnergyFit fit;
        fit.k = 3.0;
        const double p = -1.0, alpha = 2.0;
        const double pred1 = fit.k * (1.0 - p) / (alpha * 0.4);
        const double pred2 = fit.k * (1.0 - p) / (alpha * 0.8);
        CHECK(pred1 == doctest::Approx(2.0 * pred2));
    }
    CHECK_THROWS(residual_energy_constant({}));
    CHECK_THROWS(residual_energy_constant({{1.5, 1.0, 1.0, 2.0}})); // p >= 1
}

TEST_CASE("soft cost function") {
    auto J = sk_random(6, 11);
    CHECK(soft_cost(std::vector<double>(6, 0.0), 0.3, 1.0, J) == 0.0);

    CouplingMatrix J1(1, {0.0});
    CHECK(soft_cost({1.0}, 1.0, 0.7, J1) == doctest::Approx(0.25));

    // coupling term at sigma in {+-1}^n equals 2c * ising_energy
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        SpinConfig s;
        for (int i = 0; i < 6; ++i) s.sigma.push_back(rng.next_u64() & 1 ? 1.0 : -1.0);
        const double p = 1.0; // self term vanishes at |x| = 1 only when p = 1... compute both parts
        const double c = 0.8;
        double self = 0.0;
        for (double v : s.sigma) self += (v * v / 4.0 - (1.0 - p) / 2.0) * v * v;
        const double h = soft_cost(s.sigma, p, c, J);
        CHECK(h - self == doctest::Approx(2.0 * c * ising_energy(J, s)).epsilon(1e-12));
    }
    CHECK_THROWS(soft_cost({1.0, 2.0}, 0.0, 1.0, J));
}

TEST_CASE("soft cost gradient matches finite differences") {
    auto J = sk_random(8, 23);
    Rng rng(9);
    std::vector<double> x(8);
    for (auto& v : x) v = rng.normal();
    const double p = 0.4, c = 0.9;

    // analytic: dH/dx_i = x_i^3 - (1-p) x_i + 2 c (J x)_i
    std::vector<double> jx(8);
    J.mvm(x.data(), jx.data());
    const double eps = 1e-6;
    for (int i = 0; i < 8; ++i) {
        const double grad = x[i] * x[i] * x[i] - (1.0 - p) * x[i] + 2.0 * c * jx[i];
        std::vector<double> xp = x, xm = x;
        xp[i] += eps;
        xm[i] -= eps;
        const double fd = (soft_cost(xp, p, c, J) - soft_cost(xm, p, c, J)) / (2.0 * eps);
        CHECK(fd == doctest::Approx(grad).epsilon(1e-6));
    }
}
