#include "tsc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsc::ref {

Matrix gram_matrix(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    const int m = static_cast<int>(points.cols());
    Matrix g = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += points(i, k) * points(j, k);
            g(i, j) = s;
        }
    }
    return g;
}

NeighborSet select_neighbors_from_gram(const Matrix& gram, int q) {
    const int n = static_cast<int>(gram.rows());
    if (q < 1 || q > n - 1)
        throw std::invalid_argument("ref::select_neighbors: need 1 <= q <= N-1");
    NeighborSet out;
    out.indices.resize(n, q);
    out.values.resize(n, q);
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < n; ++j) {
        cand.clear();
        for (int i = 0; i < n; ++i)
            if (i != j) cand.emplace_back(std::abs(gram(j, i)), i);
        std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        for (int s = 0; s < q; ++s) {
            out.indices(j, s) = cand[s].second;
            out.values(j, s) = cand[s].first;
        }
    }
    return out;
}

Vector max_correlations(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    Vector out = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
        double best = 0.0;
        for (int p = 0; p < n; ++p) {
            if (p == j) continue;
            best = std::max(best, std::abs(points.row(p).dot(points.row(j))));
        }
        out(j) = best;
    }
    return out;
}

Vector margin_statistic(const DataSet& data, int q) {
    const int n = data.num_points();
    if (static_cast<int>(data.labels.size()) != n)
        throw std::invalid_argument("margin_statistic: labels required");
    std::map<int, int> class_sizes;
    for (int lab : data.labels)
        if (lab != kOutlierLabel) ++class_sizes[lab];
    std::string too_small;
    for (const auto& [lab, sz] : class_sizes)
        if (sz < q + 1)
            too_small += " class " + std::to_string(lab) + " has " + std::to_string(sz) +
                         " points (needs " + std::to_string(q + 1) + ")";
    if (!too_small.empty()) throw std::invalid_argument("margin_statistic:" + too_small);

    Vector margins = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> same;
    for (int i = 0; i < n; ++i) {
        const int lab = data.labels[i];
        if (lab == kOutlierLabel) continue;
        same.clear();
        double cross = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double z = std::abs(data.points.row(j).dot(data.points.row(i)));
            if (data.labels[j] == lab)
                same.push_back(z);
            else
                cross = std::max(cross, z);
        }
        std::sort(same.begin(), same.end());
        const int nl = class_sizes[lab];
        margins(i) = same[nl - q - 1] - cross;  // (n_l - q)-th smallest, 1-based
    }
    return margins;
}

double clustering_error_exhaustive(const std::vector<int>& predicted,
                                   const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("clustering_error: length mismatch");
    const int n = static_cast<int>(truth.size());
    if (n == 0) throw std::invalid_argument("clustering_error: empty input");

    std::map<int, int> pid, tid;
    for (int v : predicted) pid.emplace(v, static_cast<int>(pid.size()));
    for (int v : truth) tid.emplace(v, static_cast<int>(tid.size()));
    const int k = std::max(static_cast<int>(pid.size()), static_cast<int>(tid.size()));
    if (k > 8) throw std::invalid_argument("clustering_error_exhaustive: too many classes");

    std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
    for (int i = 0; i < n; ++i) ++confusion[pid[predicted[i]]][tid[truth[i]]];

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long best = 0;
    do {
        long agree = 0;
        for (int i = 0; i < k; ++i) agree += confusion[i][perm[i]];
        best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 - static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace tsc::ref
