// Serial reference vs OpenMP dissimilarity matrix on synthetic fGn / mBm
// datasets. Usage: bench_kernels [paths] [length] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "pathclust/dissimilarity.hpp"
#include "pathclust/experiments.hpp"

using namespace pathclust;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

void run(const char* label, const PathDataset& ds, Measure measure, const DissimilarityConfig& cfg,
         int reps) {
    DistanceMatrix serial, parallel;
    const double ts = best_of(reps, [&] { serial = dissimilarity_matrix_serial(ds, measure, cfg); });
    const double tp = best_of(reps, [&] { parallel = dissimilarity_matrix(ds, measure, cfg); });
    const std::size_t pairs = ds.size() * (ds.size() - 1) / 2;
    std::printf("%-6s N=%zu n=%zu  serial %8.3f s  omp(%d) %8.3f s  speedup %5.2fx  %8.1f us/pair  %s\n",
                label, ds.size(), ds.paths.front().size(), ts, omp_get_max_threads(), tp, ts / tp,
                1e6 * tp / static_cast<double>(pairs), serial == parallel ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t per_cluster = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 8;
    const std::size_t length = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2048;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 3;

    auto fgn = default_fgn_manifest();
    fgn.paths_per_cluster = per_cluster;
    run("cov", make_offline_dataset(fgn, length, 1), Measure::Covariance, fgn.cfg, reps);

    auto mbm = default_mbm_manifest();
    mbm.paths_per_cluster = per_cluster;
    run("local", make_offline_dataset(mbm, length, 2), Measure::Local, mbm.cfg, reps);
    return 0;
}
