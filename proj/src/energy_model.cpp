#include "cim/energy_model.hpp"

#include <cmath>
#include <limits>

namespace cim {

EnergyReport energy_report(double mvm, int n, const EnergyParams& params) {
    params.validate();
    if (mvm < 0.0) throw std::invalid_argument("energy_report: mvm must be >= 0");
    if (n < 1) throw std::invalid_argument("energy_report: n must be >= 1");

    const double N = static_cast<double>(n);
    EnergyReport r;
    r.e_main = 2.0 * params.photon_energy * mvm * N * params.roundtrip_dt / params.g_sq;
    r.e_correction = ((N + 1.0) * params.psa_small_pulse + params.psa_large_pulse) * N * mvm;
    r.e_factory = params.factory_per_mvm_per_spin * N * mvm + params.factory_static_per_spin_sq * N * N +
                  (params.psa_large_pulse + params.psa_small_pulse * N) * mvm * N;
    r.e_total = r.e_main + r.e_correction + r.e_factory;
    r.e_gpu = params.gpu_power * mvm * params.gpu_seconds_per_mvm;
    r.e_correction_simplified = 1e-13 * N * N * mvm;
    r.e_factory_simplified = 1e-13 * N * N * mvm;
    return r;
}

GsqSweepResult optimal_g_sq(const std::vector<CouplingMatrix>& instances,
                            const std::vector<double>& target_energies, Variant v,
                            const ScheduleParams& sched, const NoiseParams& noise_base,
                            std::span<const double> g_grid, const EnergyParams& eparams,
                            const BatchOptions& bopt) {
    if (instances.empty()) throw std::invalid_argument("optimal_g_sq: no instances");
    if (instances.size() != target_energies.size())
        throw std::invalid_argument("optimal_g_sq: one target energy per instance required");
    if (g_grid.empty()) throw std::invalid_argument("optimal_g_sq: empty grid");

    GsqSweepResult out;
    double best = std::numeric_limits<double>::infinity();
    for (size_t gi = 0; gi < g_grid.size(); ++gi) {
        NoiseParams noise = noise_base;
        noise.g_sq = g_grid[gi];

        std::vector<double> mvms;
        double ps_acc = 0.0;
        for (size_t ii = 0; ii < instances.size(); ++ii) {
            BatchOptions opt = bopt;
            opt.instance_id = mix64(opt.instance_id ^ (0x677371ULL + ii));
            BatchResult batch = run_batch_sde(v, instances[ii], sched, noise, opt);
            batch.target_energy = target_energies[ii];
            TtsReport rep = tts_report(batch);
            mvms.push_back(rep.mvm_to_solution);
            ps_acc += rep.ps;
        }

        GsqSweepPoint pt;
        pt.g_sq = g_grid[gi];
        pt.mean_ps = ps_acc / static_cast<double>(instances.size());
        pt.median_mvm = percentile(mvms, 0.5);
        EnergyParams ep = eparams;
        ep.g_sq = g_grid[gi];
        pt.median_e_main = std::isfinite(pt.median_mvm)
                               ? energy_report(pt.median_mvm, instances[0].n(), ep).e_main
                               : std::numeric_limits<double>::infinity();
        out.points.push_back(pt);
        if (pt.median_e_main < best) {
            best = pt.median_e_main;
            out.best_index = static_cast<int>(gi);
        }
    }
    if (out.best_index < 0)
        throw std::runtime_error("optimal_g_sq: no grid point reached the target (all TTS infinite)");
    return out;
}

} // namespace cim
