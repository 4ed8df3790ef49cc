// Compares the OpenMP batch runner against the serial reference, and the
// dense MVM against the CSR path, on representative workloads.

#include "cim/batch.hpp"
#include "cim/metrics.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cim;

namespace {

double now_sec() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

void bench_batch(Variant v, const char* preset_name, const CouplingMatrix& J, int trajectories) {
    Preset pr = require_preset(preset_name);
    BatchOptions opt;
    opt.n_trajectories = trajectories;
    opt.master_seed = 7;

    opt.serial = true;
    double t0 = now_sec();
    BatchResult serial = run_batch(v, J, pr.sched, opt);
    double t_serial = now_sec() - t0;

    opt.serial = false;
    t0 = now_sec();
    BatchResult parallel = run_batch(v, J, pr.sched, opt);
    double t_parallel = now_sec() - t0;

    bool identical = serial.best_energy == parallel.best_energy &&
                     serial.first_hit == parallel.first_hit &&
                     serial.final_energy == parallel.final_energy;

    const double steps = static_cast<double>(pr.sched.n_steps) * trajectories;
    std::printf("%-8s n=%-5d %5d traj : serial %7.2fs (%8.0f step/s)  omp %7.2fs (%8.0f step/s)  "
                "speedup %.2fx  results %s\n",
                preset_name, J.n(), trajectories, t_serial, steps / t_serial, t_parallel,
                steps / t_parallel, t_serial / t_parallel, identical ? "identical" : "DIFFER");
}

void bench_mvm(const CouplingMatrix& J, const char* label, int reps) {
    std::vector<double> x(J.n(), 0.01), z(J.n());
    for (int i = 0; i < J.n(); ++i) x[i] = 0.01 * ((i % 7) - 3);
    double t0 = now_sec();
    for (int r = 0; r < reps; ++r) {
        J.mvm(x.data(), z.data());
        x[r % J.n()] += 1e-12 * z[r % J.n()];
    }
    double dt = now_sec() - t0;
    std::printf("mvm %-18s n=%-5d nnz=%-8zu %s : %8.1f us/op\n", label, J.n(), J.nonzeros(),
                J.uses_sparse_mvm() ? "csr  " : "dense", dt / reps * 1e6);
}

} // namespace

int main(int argc, char** argv) {
    int traj = 64;
    if (argc > 1) traj = std::atoi(argv[1]);

#ifdef _OPENMP
    std::printf("OpenMP: %d threads available\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled\n");
#endif

    CouplingMatrix sk100 = sk_random(100, 11);
    CouplingMatrix sk800 = sk_random(800, 11);
    CouplingMatrix torus800 = torus_pm(20, 40, 11);

    std::printf("\n-- MVM kernels --\n");
    bench_mvm(sk100, "sk-100", 20000);
    bench_mvm(sk800, "sk-800", 2000);
    bench_mvm(torus800, "torus-20x40", 20000);

    std::printf("\n-- batch runner, serial reference vs OpenMP --\n");
    bench_batch(Variant::cac, "cac-sk", sk100, traj);
    bench_batch(Variant::cfc, "cfc-sk", sk100, traj);
    bench_batch(Variant::sfc, "sfc-sk", sk100, traj);
    bench_batch(Variant::dsbm, "dsbm-sk", sk100, traj);
    return 0;
}
