#include "tsc/spectral.hpp"

#include "tsc/gram.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#ifdef TSC_HAVE_LAPACKE
#include <lapacke.h>
#else
#include <Eigen/Eigenvalues>
#endif

namespace tsc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Matrix normalized_laplacian(const AdjacencyMatrix& adj) {
    const int n = adj.num_points();
    Vector deg = adj.A.rowwise().sum();
    Vector inv_sqrt(n);
    for (int i = 0; i < n; ++i) inv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
    Matrix lap(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            lap(i, j) = (i == j ? 1.0 : 0.0) - inv_sqrt(i) * inv_sqrt(j) * adj.A(i, j);
    return lap;
}

int estimate_num_subspaces(const Vector& eigenvalues, int max_L) {
    const int n = static_cast<int>(eigenvalues.size());
    if (n < 2) throw std::invalid_argument("estimate_num_subspaces: need at least 2 eigenvalues");
    int hi = n - 1;
    if (max_L > 0) hi = std::min(hi, max_L);
    int best_i = 1;
    double best_gap = eigenvalues(1) - eigenvalues(0);
    for (int i = 2; i <= hi; ++i) {
        const double gap = eigenvalues(i) - eigenvalues(i - 1);
        if (gap > best_gap) {
            best_gap = gap;
            best_i = i;
        }
    }
    return best_i;
}

EigenDecomposition symmetric_eigendecomposition(const Matrix& sym) {
    const int n = static_cast<int>(sym.rows());
    if (sym.cols() != n) throw std::invalid_argument("eigendecomposition: matrix not square");
    EigenDecomposition out;
#ifdef TSC_HAVE_LAPACKE
    out.vectors = sym;
    out.values.resize(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                           out.values.data());
    if (info != 0)
        throw std::runtime_error("eigendecomposition failed: dsyevd info=" + std::to_string(info) +
                                 ", n=" + std::to_string(n) +
                                 ", |M|_max=" + std::to_string(sym.cwiseAbs().maxCoeff()));
#else
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed: n=" + std::to_string(n) +
                                 ", |M|_max=" + std::to_string(sym.cwiseAbs().maxCoeff()));
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
#endif
    return out;
}

Matrix spectral_embed(const EigenDecomposition& eig, int k) {
    const int n = static_cast<int>(eig.vectors.rows());
    if (k < 1 || k > n) throw std::invalid_argument("spectral_embed: need 1 <= k <= N");
    Matrix emb = eig.vectors.leftCols(k);
    for (int i = 0; i < n; ++i) {
        const double norm = emb.row(i).norm();
        if (norm >= 1e-12) emb.row(i) /= norm;
    }
    return emb;
}

Matrix spectral_embed(const Matrix& laplacian, int k) {
    return spectral_embed(symmetric_eigendecomposition(laplacian), k);
}

namespace {

// squared distances in gemm form; ties go to the smaller center index
void assign_points(const Matrix& points, const Matrix& centers, std::vector<int>& labels) {
    const int n = static_cast<int>(points.rows());
    const int k = static_cast<int>(centers.rows());
    const Matrix cross = points * centers.transpose();
    const Vector cnorm = centers.rowwise().squaredNorm();
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_score = cnorm(0) - 2.0 * cross(i, 0);
        for (int c = 1; c < k; ++c) {
            const double score = cnorm(c) - 2.0 * cross(i, c);
            if (score < best_score) {
                best_score = score;
                best = c;
            }
        }
        labels[i] = best;
    }
}

double exact_wcss(const Matrix& points, const Matrix& centers, const std::vector<int>& labels) {
    double w = 0.0;
    for (int i = 0; i < points.rows(); ++i)
        w += (points.row(i) - centers.row(labels[i])).squaredNorm();
    return w;
}

Matrix farthest_point_init(const Matrix& points, int k) {
    const int n = static_cast<int>(points.rows());
    Matrix centers(k, points.cols());
    Vector mindist = Vector::Constant(n, std::numeric_limits<double>::infinity());
    // start from the point farthest from the centroid
    const Vector mean = points.colwise().mean();
    int pick = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = (points.row(i).transpose() - mean).squaredNorm();
        if (d > best) {
            best = d;
            pick = i;
        }
    }
    for (int c = 0; c < k; ++c) {
        centers.row(c) = points.row(pick);
        if (c + 1 == k) break;
        int next = 0;
        double far = -1.0;
        for (int i = 0; i < n; ++i) {
            mindist(i) = std::min(mindist(i), (points.row(i) - points.row(pick)).squaredNorm());
            if (mindist(i) > far) {
                far = mindist(i);
                next = i;
            }
        }
        pick = next;
    }
    return centers;
}

Matrix uniform_init(const Matrix& points, int k, RandomSource& source) {
    const int n = static_cast<int>(points.rows());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    // partial Fisher-Yates for k distinct rows
    for (int c = 0; c < k; ++c) {
        const int j = c + static_cast<int>(source.uniform_index(n - c));
        std::swap(order[c], order[j]);
    }
    Matrix centers(k, points.cols());
    for (int c = 0; c < k; ++c) centers.row(c) = points.row(order[c]);
    return centers;
}

KMeansResult lloyd(const Matrix& points, Matrix centers, const KMeansOptions& opts) {
    const int n = static_cast<int>(points.rows());
    const int k = static_cast<int>(centers.rows());
    std::vector<int> labels(n, 0);
    std::vector<int> counts(k, 0);
    double prev = std::numeric_limits<double>::infinity();
    double wcss = prev;
    for (int it = 0; it < opts.max_iters; ++it) {
        assign_points(points, centers, labels);
        std::fill(counts.begin(), counts.end(), 0);
        centers.setZero();
        for (int i = 0; i < n; ++i) {
            centers.row(labels[i]) += points.row(i);
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            // re-seed an empty cluster from the worst-fit point
            int far_i = 0;
            double far = -1.0;
            for (int i = 0; i < n; ++i) {
                const double d = (points.row(i) - centers.row(labels[i])).squaredNorm();
                if (counts[labels[i]] > 1 && d > far) {
                    far = d;
                    far_i = i;
                }
            }
            --counts[labels[far_i]];
            labels[far_i] = c;
            counts[c] = 1;
            centers.row(c) = points.row(far_i);
        }
        wcss = exact_wcss(points, centers, labels);
        if (prev - wcss <= opts.tol * std::max(prev, 1e-300) && prev != std::numeric_limits<double>::infinity())
            break;
        prev = wcss;
    }
    assign_points(points, centers, labels);
    wcss = exact_wcss(points, centers, labels);
    return {std::move(labels), wcss};
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, RandomSource& source, const KMeansOptions& opts) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");
    if (k == 1) {
        Matrix center = points.colwise().mean();
        return {std::vector<int>(n, 0), exact_wcss(points, center, std::vector<int>(n, 0))};
    }
    const int restarts = std::max(1, opts.restarts);
    std::vector<RandomSource> sources;
    sources.reserve(restarts);
    for (int r = 0; r < restarts; ++r) sources.push_back(source.derive(static_cast<uint64_t>(r)));

    std::vector<KMeansResult> runs(restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        Matrix init = r == 0 ? farthest_point_init(points, k) : uniform_init(points, k, sources[r]);
        runs[r] = lloyd(points, std::move(init), opts);
    }
    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (runs[r].wcss < runs[best].wcss) best = r;
    return std::move(runs[best]);
}

ClusterReport tsc_pipeline(const DataSet& data, const PipelineOptions& opts, RandomSource& source) {
    const auto t_start = std::chrono::steady_clock::now();
    ClusterReport report;

    const DataSet* active = &data;
    DataSet normalized_copy;
    if (opts.normalize_points) {
        normalized_copy = normalize(data);
        active = &normalized_copy;
    }
    const int n = active->num_points();

    int q = opts.q;
    if (q == 0) {
        if (opts.L_hint < 1)
            throw std::invalid_argument("tsc_pipeline: q not set and no L hint to derive it from");
        q = default_q(n, opts.L_hint);
    }

    auto t0 = std::chrono::steady_clock::now();
    const Matrix gram = gram_matrix(active->points);
    report.timings.gram_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const NeighborSet neighbors = select_neighbors_from_gram(gram, q);
    report.timings.selection_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    AdjacencyMatrix adj = build_adjacency(neighbors);
    report.timings.adjacency_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Matrix lap = normalized_laplacian(adj);
    report.timings.laplacian_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const EigenDecomposition eig = symmetric_eigendecomposition(lap);
    report.timings.eigen_s = seconds_since(t0);

    report.spectrum.eigenvalues = eig.values;
    report.spectrum.gap_index = estimate_num_subspaces(eig.values, opts.max_L);
    report.spectrum.estimated_L = report.spectrum.gap_index;
    const int L = opts.L_override > 0 ? opts.L_override : report.spectrum.gap_index;
    report.spectrum.embedding = spectral_embed(eig, L);
    report.estimated_L = L;

    t0 = std::chrono::steady_clock::now();
    RandomSource km_source = source.derive(0x6b6d65616e73ULL);
    report.labels = kmeans(report.spectrum.embedding, L, km_source, opts.kmeans).labels;
    report.timings.kmeans_s = seconds_since(t0);

    if (opts.keep_adjacency) {
        report.adjacency = std::move(adj);
        report.has_adjacency = true;
    }
    report.timings.total_s = seconds_since(t_start);
    return report;
}

}  // namespace tsc
