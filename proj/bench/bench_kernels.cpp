// Serial reference vs OpenMP kernel timings for the parallel stages of a fit.

#include <chrono>
#include <cstdio>

#include <CLI11.hpp>
#include <json.hpp>

#include "compass/core/rng.hpp"
#include "compass/embedding/fuzzy_graph.hpp"
#include "compass/embedding/knn.hpp"
#include "compass/embedding/layout_init.hpp"
#include "compass/embedding/trustworthiness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace compass;

namespace {

EmbeddingMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    EmbeddingMatrix m(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : m.row(i)) v = static_cast<float>(rng.normal());
    }
    return m;
}

// Best of `reps` wall times, in seconds.
template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel benchmark", "compass_bench"};
    std::size_t n = 1000, dim = 512, k = 15;
    int reps = 3;
    bool as_json = false;
    app.add_option("--n", n, "Points")->capture_default_str();
    app.add_option("--dim", dim, "Dimension")->capture_default_str();
    app.add_option("--k", k, "Neighbors")->capture_default_str();
    app.add_option("--reps", reps, "Repetitions (best time is kept)")->capture_default_str();
    app.add_flag("--json", as_json, "JSON output");
    CLI11_PARSE(app, argc, argv);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    const auto data = random_matrix(n, dim, 1);
    const auto low = random_layout(n, 2);

    KnnGraph g_serial, g_par;
    const double knn_s = best_of(reps, [&] { g_serial = knn_graph_serial(data, k, Metric::cosine); });
    const double knn_p = best_of(reps, [&] { g_par = knn_graph(data, k, Metric::cosine); });

    FuzzyGraph f_serial, f_par;
    const double fz_s = best_of(reps, [&] { f_serial = build_fuzzy_graph_serial(g_serial); });
    const double fz_p = best_of(reps, [&] { f_par = build_fuzzy_graph(g_serial); });

    double t_serial = 0, t_par = 0;
    const double tw_s = best_of(reps, [&] { t_serial = trustworthiness_serial(data, Metric::cosine, low, k); });
    const double tw_p = best_of(reps, [&] { t_par = trustworthiness(data, Metric::cosine, low, k); });

    const bool identical = g_serial == g_par && f_serial == f_par && t_serial == t_par;
    struct Row {
        const char* kernel;
        double serial, parallel;
    };
    const Row rows[] = {{"knn_graph", knn_s, knn_p}, {"fuzzy_graph", fz_s, fz_p}, {"trustworthiness", tw_s, tw_p}};

    if (as_json) {
        nlohmann::json out = {{"n", n}, {"dim", dim}, {"k", k}, {"threads", threads}, {"identical", identical}};
        for (const auto& r : rows) {
            out["kernels"][r.kernel] = {{"serial_s", r.serial}, {"openmp_s", r.parallel}, {"speedup", r.serial / r.parallel}};
        }
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("n=%zu dim=%zu k=%zu threads=%d\n", n, dim, k, threads);
        std::printf("%-16s %10s %10s %8s\n", "kernel", "serial s", "openmp s", "speedup");
        for (const auto& r : rows) {
            std::printf("%-16s %10.4f %10.4f %7.2fx\n", r.kernel, r.serial, r.parallel, r.serial / r.parallel);
        }
        std::printf("outputs identical: %s\n", identical ? "yes" : "no");
    }
    return identical ? 0 : 1;
}
