#pragma once

#include "cim/batch.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace cim {

// Fraction of trajectories whose best energy reached the batch target.
double success_probability(const BatchResult& batch);
double success_probability(const BatchResult& batch, double target_energy);

// Expected steps to reach the target with 99% confidence under optimal
// restarts: steps * ln(0.01) / ln(1 - ps), capped at steps for ps >= 0.99,
// +inf for ps = 0.
double tts(double ps, double steps);

struct TtsReport {
    double ps = 0.0;
    double tts_steps = 0.0;
    double mvm_to_solution = 0.0;
};

TtsReport tts_report(const BatchResult& batch);

// One MVM per integration step; energy bookkeeping is not counted.
double mvm_to_solution(const TtsReport& report);

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(int hits, int trials);

// Linear-interpolation quantiles; +inf values sort last.
std::vector<double> percentiles(std::vector<double> values, const std::vector<double>& qs);
double percentile(std::vector<double> values, double q);

// Least-squares fit of log(tts) = log(A) + sqrt(n) log(B).
struct ScalingFit {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
};
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& n_tts_points);

// mu/sigma of ln(t); infinite values are excluded and counted.
struct LognormalFit {
    double mu = 0.0;
    double sigma = 0.0;
    int n_used = 0;
    int n_infinite = 0;

    // predicted number of samples (out of n_used + n_infinite) still
    // unsolved after m steps, under the log-normal assumption
    double predicted_unsolved(double m) const;
};
LognormalFit lognormal_fit(const std::vector<double>& tts_values);

// Among successful trajectories, the fraction whose final configuration
// still attains the target.
double final_state_ground_fraction(const BatchResult& batch);

// Two runs differing by a small Gaussian kick on the initial x; Pearson
// correlation of the two x vectors at each checkpoint. A correlation is NaN
// when either snapshot has zero variance.
struct CorrelationPoint {
    int step;
    double r;
};
std::vector<CorrelationPoint> perturbation_correlation(Variant v, const CouplingMatrix& J,
                                                       const ScheduleParams& sched, uint64_t seed,
                                                       double perturb_std,
                                                       const std::vector<int>& checkpoints,
                                                       double init_std = 0.25);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Least-squares constant K in  mean-excess-energy ~= K (1-p) / (alpha beta).
struct ResidualEnergySample {
    double p, alpha, beta;
    double mean_excess_energy;
};
struct ResidualEnergyFit {
    double k = 0.0;
    double r_squared = 0.0;
};
ResidualEnergyFit residual_energy_constant(const std::vector<ResidualEnergySample>& samples);

// Mean of ising_energy(sign(x)) - ground over the second half of a
// fixed-parameter run; the sampling window for the residual-energy fit.
double mean_visited_excess_energy(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                                  uint64_t seed, double ground_energy);

// H(x) = sum_i (x_i^2/4 - (1-p)/2) x_i^2 + c sum_i sum_j J_ij x_i x_j
double soft_cost(const std::vector<double>& x, double p, double c, const CouplingMatrix& J);

} // namespace cim
