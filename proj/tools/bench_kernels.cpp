#include "tsc/adjacency.hpp"
#include "tsc/analysis.hpp"
#include "tsc/gram.hpp"
#include "tsc/reference.hpp"
#include "tsc/spectral.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

tsc::Matrix random_unit_points(int n, int m, std::uint64_t seed) {
    tsc::RandomSource src(seed);
    tsc::Matrix pts(n, m);
    for (int i = 0; i < n; ++i) pts.row(i) = src.unit_sphere(m).transpose();
    return pts;
}

void bench_gram() {
    std::printf("gram matrix (m=50)\n%8s %12s %12s %8s\n", "N", "serial ms", "parallel ms", "check");
    for (int n : {400, 800, 1600}) {
        const tsc::Matrix pts = random_unit_points(n, 50, 7);
        tsc::Matrix a, b;
        const double ts = time_ms([&] { a = tsc::ref::gram_matrix(pts); });
        const double tp = time_ms([&] { b = tsc::gram_matrix(pts); });
        std::printf("%8d %12.2f %12.2f %8.1e\n", n, ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
}

void bench_selection() {
    std::printf("\nneighbor selection (q=16, from shared gram)\n%8s %12s %12s %10s\n", "N",
                "full sort", "partial ms", "us/point");
    for (int n : {400, 800, 1600, 3200}) {
        const tsc::Matrix gram = tsc::gram_matrix(random_unit_points(n, 50, 11));
        tsc::NeighborSet a, b;
        const double ts = time_ms([&] { a = tsc::ref::select_neighbors_from_gram(gram, 16); });
        const double tp = time_ms([&] { b = tsc::select_neighbors_from_gram(gram, 16); });
        const bool same = a.indices == b.indices && a.values == b.values;
        std::printf("%8d %12.2f %12.2f %10.2f%s\n", n, ts, tp, 1e3 * tp / n,
                    same ? "" : "  MISMATCH");
    }
}

void bench_margins() {
    std::printf("\nmargin statistic (m=50, q=10, 4 classes)\n");
    const int n = 1200;
    tsc::DataSet data;
    data.points = random_unit_points(n, 50, 13);
    data.labels.resize(n);
    for (int i = 0; i < n; ++i) data.labels[i] = i / (n / 4);
    tsc::Vector a, b;
    const double ts = time_ms([&] { a = tsc::ref::margin_statistic(data, 10); });
    const double tp =
        time_ms([&] { b = tsc::margin_statistic(data, data.labels, 10).margins; });
    std::printf("%8d %12.2f %12.2f %8.1e\n", n, ts, tp, (a - b).cwiseAbs().maxCoeff());
}

void bench_kmeans() {
    std::printf("\nk-means (N=1500, k=15, 10 restarts)\n");
    const int n = 1500, k = 15;
    tsc::RandomSource src(17);
    tsc::Matrix pts(n, k);
    for (int i = 0; i < n; ++i) {
        pts.row(i) = (0.05 * src.gaussian_vector(k)).transpose();
        pts(i, i % k) += 1.0;
    }
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    tsc::RandomSource s1(23);
    tsc::KMeansResult r1;
    const double ts = time_ms([&] { r1 = tsc::kmeans(pts, k, s1); });
    omp_set_num_threads(max_threads);
    tsc::RandomSource s2(23);
    tsc::KMeansResult r2;
    const double tp = time_ms([&] { r2 = tsc::kmeans(pts, k, s2); });
    std::printf("%8s %12.2f %12.2f   wcss %.6f / %.6f (%d threads)\n", "", ts, tp, r1.wcss, r2.wcss,
                max_threads);
#else
    tsc::RandomSource s1(23);
    tsc::KMeansResult r1;
    const double ts = time_ms([&] { r1 = tsc::kmeans(pts, k, s1); });
    std::printf("%8s %12.2f   wcss %.6f (no OpenMP)\n", "", ts, r1.wcss);
#endif
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled\n\n");
#endif
    bench_gram();
    bench_selection();
    bench_margins();
    bench_kmeans();
    return 0;
}
