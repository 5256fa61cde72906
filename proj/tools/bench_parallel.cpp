// Timing comparison of the serial path against the OpenMP worker pool for the
// two hot kernels: flux-map evaluation and a short optimization campaign.
// Also checks that both paths produce identical bytes.

#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "fluxchain/experiments.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* label, double serial, double parallel, bool identical)
{
    std::printf("%-28s serial %7.3f s  parallel %7.3f s  speedup %4.2fx  %s\n", label,
                serial, parallel, serial / parallel,
                identical ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main()
{
    const int cores = omp_get_max_threads();
    std::printf("workers available: %d\n", cores);

    {
        fluxchain::ExperimentConfig config = fluxchain::preset("fig3-right");
        config.kind = fluxchain::ExperimentKind::FluxMap;
        config.grid.points = 101;
        config.grid.overlay_trials = 0;

        config.threads = 1;
        auto start = std::chrono::steady_clock::now();
        const auto serial = fluxchain::run_flux_map(config);
        const double t_serial = seconds_since(start);

        config.threads = cores;
        start = std::chrono::steady_clock::now();
        const auto parallel = fluxchain::run_flux_map(config);
        const double t_parallel = seconds_since(start);

        report("fluxmap 101x101 (model I)", t_serial, t_parallel,
               serial.csv == parallel.csv);
    }

    {
        fluxchain::ExperimentConfig config = fluxchain::preset("appb-oqs2-alpha3-n6");
        config.sampler.n_trials = 8;

        config.threads = 1;
        auto start = std::chrono::steady_clock::now();
        const auto serial = fluxchain::run_optimize_campaign(config);
        const double t_serial = seconds_since(start);

        config.threads = cores;
        start = std::chrono::steady_clock::now();
        const auto parallel = fluxchain::run_optimize_campaign(config);
        const double t_parallel = seconds_since(start);

        report("campaign 8 trials (model II)", t_serial, t_parallel,
               serial.csv == parallel.csv);
    }
    return 0;
}
