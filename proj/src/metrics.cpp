#include "cim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double success_probability(const BatchResult& batch, double target_energy) {
    if (batch.n_traj < 1) throw std::invalid_argument("success_probability: empty batch");
    if (!std::isfinite(target_energy)) throw std::invalid_argument("success_probability: no target energy");
    int hits = 0;
    for (double e : batch.best_energy)
        if (e <= target_energy) ++hits;
    return static_cast<double>(hits) / batch.n_traj;
}

double success_probability(const BatchResult& batch) {
    return success_probability(batch, batch.target_energy);
}

double tts(double ps, double steps) {
    if (!(steps > 0.0)) throw std::invalid_argument("tts: steps must be > 0");
    if (ps < 0.0 || ps > 1.0) throw std::invalid_argument("tts: ps outside [0, 1]");
    if (ps <= 0.0) return kInf;
    if (ps >= 0.99) return steps;
    return steps * std::log(0.01) / std::log1p(-ps);
}

TtsReport tts_report(const BatchResult& batch) {
    TtsReport r;
    r.ps = success_probability(batch);
    r.tts_steps = tts(r.ps, static_cast<double>(batch.steps_per_traj));
    r.mvm_to_solution = r.tts_steps;
    return r;
}

double mvm_to_solution(const TtsReport& report) { return report.tts_steps; }

std::pair<double, double> wilson_interval(int hits, int trials) {
    if (trials < 1) throw std::invalid_argument("wilson_interval: empty sample");
    const double z = 1.959963984540054; // 95%
    const double n = trials;
    const double phat = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

double percentile(std::vector<double> values, double q) {
    return percentiles(std::move(values), {q})[0];
}

std::vector<double> percentiles(std::vector<double> values, const std::vector<double>& qs) {
    if (values.empty()) throw std::invalid_argument("percentiles: empty input");
    std::sort(values.begin(), values.end()); // +inf lands at the top
    std::vector<double> out;
    out.reserve(qs.size());
    for (double q : qs) {
        if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentiles: quantile outside [0, 1]");
        const double h = q * static_cast<double>(values.size() - 1);
        const size_t lo = static_cast<size_t>(h);
        const size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = h - static_cast<double>(lo);
        if (frac == 0.0 || values[lo] == values[hi]) {
            out.push_back(values[lo]);
        } else {
            out.push_back(values[lo] + frac * (values[hi] - values[lo]));
        }
    }
    return out;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("scaling_fit: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double m = static_cast<double>(points.size());
    for (auto [n, t] : points) {
        if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scaling_fit: tts must be finite and positive");
        const double x = std::sqrt(n);
        const double y = std::log(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * m * sxx || det == 0.0)
        throw std::invalid_argument("scaling_fit: degenerate predictor (all sizes equal)");
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / m;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ymean = sy / m;
    for (auto [n, t] : points) {
        const double x = std::sqrt(n);
        const double y = std::log(t);
        const double pred = intercept + slope * x;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - ymean) * (y - ymean);
    }
    ScalingFit fit;
    fit.a = std::exp(intercept);
    fit.b = std::exp(slope);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double LognormalFit::predicted_unsolved(double m) const {
    if (!(m > 0.0)) return n_used + n_infinite;
    double tail;
    if (sigma <= 0.0) {
        tail = std::log(m) < mu ? 1.0 : 0.0;
    } else {
        const double zscore = (std::log(m) - mu) / sigma;
        tail = 0.5 * std::erfc(zscore / std::sqrt(2.0));
    }
    return n_used * tail + n_infinite;
}

LognormalFit lognormalfit_impl(const std::vector<double>& values) {
    LognormalFit fit;
    double sum = 0.0;
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double t : values) {
        if (std::isinf(t)) {
            ++fit.n_infinite;
            continue;
        }
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument("lognormal_fit: values must be positive (or +inf)");
        logs.push_back(std::log(t));
        sum += logs.back();
    }
    if (logs.empty()) throw std::invalid_argument("lognormal_fit: no finite values");
    fit.n_used = static_cast<int>(logs.size());
    fit.mu = sum / fit.n_used;
    double var = 0.0;
    for (double l : logs) var += (l - fit.mu) * (l - fit.mu);
    fit.sigma = std::sqrt(var / fit.n_used);
    return fit;
}

LognormalFit lognormal_fit(const std::vector<double>& tts_values) { return lognormalfit_impl(tts_values); }

double final_state_ground_fraction(const BatchResult& batch) {
    if (!std::isfinite(batch.target_energy))
        throw std::invalid_argument("final_state_ground_fraction: no target energy");
    int successes = 0, in_ground_at_end = 0;
    for (int t = 0; t < batch.n_traj; ++t) {
        if (batch.best_energy[t] <= batch.target_energy) {
            ++successes;
            if (batch.final_energy[t] <= batch.target_energy) ++in_ground_at_end;
        }
    }
    if (successes == 0)
        throw std::invalid_argument("final_state_ground_fraction: no successful trajectories");
    return static_cast<double>(in_ground_at_end) / successes;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch");
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double cov = 0, va = 0, vb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va <= 0.0 || vb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(va * vb);
}

std::vector<CorrelationPoint> perturbation_correlation(Variant v, const CouplingMatrix& J,
                                                       const ScheduleParams& sched, uint64_t seed,
                                                       double perturb_std,
                                                       const std::vector<int>& checkpoints,
                                                       double init_std) {
    if (!(perturb_std > 0.0)) throw std::invalid_argument("perturbation_correlation: perturb_std must be > 0");
    if (v == Variant::dsbm) throw std::invalid_argument("perturbation_correlation: deterministic CIM variants only");

    InitParams init = default_init(v);
    init.x_std = init_std;

    Rng rng(seed);
    SolverState s1 = make_initial_state(v, J.n(), init, rng);
    SolverState s2 = s1;
    Rng kick(mix64(seed ^ 0x70657274757262ULL));
    for (int i = 0; i < J.n(); ++i) s2.x[i] += perturb_std * kick.normal();

    TrajectoryOptions opt;
    opt.track_energy = false;
    opt.snapshot_steps = checkpoints;

    Trajectory t1 = run_trajectory_from(v, J, sched, std::move(s1), opt);
    Trajectory t2 = run_trajectory_from(v, J, sched, std::move(s2), opt);

    std::vector<CorrelationPoint> out;
    for (size_t i = 0; i < checkpoints.size() && i < t1.snapshots.size() && i < t2.snapshots.size(); ++i)
        out.push_back({checkpoints[i], pearson(t1.snapshots[i], t2.snapshots[i])});
    return out;
}

ResidualEnergyFit residual_energy_constant(const std::vector<ResidualEnergySample>& samples) {
    if (samples.empty()) throw std::invalid_argument("residual_energy_constant: no samples");
    double sxx = 0, sxy = 0;
    for (const auto& s : samples) {
        if (!(s.p < 1.0) || !(s.alpha > 0.0) || !(s.beta > 0.0))
            throw std::invalid_argument("residual_energy_constant: need p < 1, alpha > 0, beta > 0");
        const double pred = (1.0 - s.p) / (s.alpha * s.beta);
        sxx += pred * pred;
        sxy += pred * s.mean_excess_energy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("residual_energy_constant: degenerate predictor");

    ResidualEnergyFit fit;
    fit.k = sxy / sxx;

    double mean_y = 0.0;
    for (const auto& s : samples) mean_y += s.mean_excess_energy;
    mean_y /= static_cast<double>(samples.size());
    double ss_res = 0, ss_tot = 0;
    for (const auto& s : samples) {
        const double pred = fit.k * (1.0 - s.p) / (s.alpha * s.beta);
        ss_res += (s.mean_excess_energy - pred) * (s.mean_excess_energy - pred);
        ss_tot += (s.mean_excess_energy - mean_y) * (s.mean_excess_energy - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double mean_visited_excess_energy(Variant v, const CouplingMatrix& J, const ScheduleParams& sched,
                                  uint64_t seed, double ground_energy) {
    TrajectoryOptions opt;
    opt.record_energy_trace = true;
    Trajectory traj = run_trajectory(v, J, sched, seed, opt);
    const size_t begin = traj.energy_trace.size() / 2;
    if (begin >= traj.energy_trace.size()) throw std::invalid_argument("mean_visited_excess_energy: empty trace");
    double acc = 0.0;
    for (size_t i = begin; i < traj.energy_trace.size(); ++i) acc += traj.energy_trace[i] - ground_energy;
    return acc / static_cast<double>(traj.energy_trace.size() - begin);
}

double soft_cost(const std::vector<double>& x, double p, double c, const CouplingMatrix& J) {
    if (static_cast<int>(x.size()) != J.n()) throw std::invalid_argument("soft_cost: dimension mismatch");
    double self = 0.0;
    for (double xi : x) self += (xi * xi / 4.0 - (1.0 - p) / 2.0) * xi * xi;
    std::vector<double> jx(J.n());
    J.mvm(x.data(), jx.data());
    double coupling = 0.0;
    for (int i = 0; i < J.n(); ++i) coupling += x[i] * jx[i];
    return self + c * coupling;
}

} // namespace cim
