#include "tsc/analysis.hpp"

#include "tsc/gram.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace tsc {

AffinityReport affinity(const SubspaceBasis& Uk, const SubspaceBasis& Ul) {
    if (Uk.ambient_dim() != Ul.ambient_dim())
        throw std::invalid_argument("affinity: bases have different ambient dimensions");
    const Matrix cross = Uk.basis.transpose() * Ul.basis;
    Eigen::JacobiSVD<Matrix> svd(cross);
    AffinityReport report;
    report.principal_angle_cosines = svd.singularValues();
    for (int i = 0; i < report.principal_angle_cosines.size(); ++i)
        report.principal_angle_cosines(i) =
            std::clamp(report.principal_angle_cosines(i), 0.0, 1.0);
    const int dmin = std::min(Uk.dim(), Ul.dim());
    report.affinity = std::min(1.0, cross.norm() / std::sqrt(static_cast<double>(dmin)));
    return report;
}

SdpReport subspace_detection_property(const AdjacencyMatrix& adj, const std::vector<int>& truth,
                                      int q) {
    const int n = adj.num_points();
    if (static_cast<int>(truth.size()) != n)
        throw std::invalid_argument("subspace_detection_property: label count mismatch");
    for (int lab : truth)
        if (lab == kOutlierLabel)
            throw std::invalid_argument("subspace_detection_property: outlier labels not allowed");
    SdpReport report;
    for (int i = 0; i < n; ++i) {
        int same = 0;
        for (int j = 0; j < n; ++j) {
            if (adj.A(i, j) == 0.0) continue;
            if (truth[i] == truth[j])
                ++same;
            else if (i < j)
                report.cross_links.emplace_back(i, j);
        }
        if (same < q) report.deficient_rows.push_back(i);
    }
    report.holds = report.cross_links.empty() && report.deficient_rows.empty();
    return report;
}

MarginReport margin_statistic(const DataSet& data, const std::vector<int>& truth, int q) {
    const int n = data.num_points();
    if (static_cast<int>(truth.size()) != n)
        throw std::invalid_argument("margin_statistic: label count mismatch");
    if (q < 1) throw std::invalid_argument("margin_statistic: q must be >= 1");
    std::map<int, int> class_sizes;
    for (int lab : truth)
        if (lab != kOutlierLabel) ++class_sizes[lab];
    std::string too_small;
    for (const auto& [lab, sz] : class_sizes)
        if (sz < q + 1)
            too_small += " class " + std::to_string(lab) + " has " + std::to_string(sz) +
                         " points (needs " + std::to_string(q + 1) + ")";
    if (!too_small.empty()) throw std::invalid_argument("margin_statistic:" + too_small);

    const Matrix gram = gram_matrix(data.points);
    MarginReport report;
    report.margins = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());

#pragma omp parallel
    {
        std::vector<double> same;
#pragma omp for schedule(dynamic, 16)
        for (int i = 0; i < n; ++i) {
            const int lab = truth[i];
            if (lab == kOutlierLabel) continue;
            same.clear();
            double cross = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double z = std::abs(gram(j, i));
                if (truth[j] == lab)
                    same.push_back(z);
                else
                    cross = std::max(cross, z);
            }
            std::sort(same.begin(), same.end());
            const int nl = static_cast<int>(same.size()) + 1;
            report.margins(i) = same[nl - q - 1] - cross;
        }
    }

    report.min_margin = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < n; ++i) {
        if (std::isnan(report.margins(i))) continue;
        any = true;
        report.min_margin = std::min(report.min_margin, report.margins(i));
    }
    if (!any) report.min_margin = std::numeric_limits<double>::quiet_NaN();
    report.all_positive = any && report.min_margin > 0.0;
    return report;
}

ClusteringConditionReport check_clustering_condition(const std::vector<SubspaceBasis>& bases,
                                                     int N, double sigma2) {
    if (bases.empty()) throw std::invalid_argument("check_clustering_condition: no bases");
    if (N < 2) throw std::invalid_argument("check_clustering_condition: need N >= 2");
    if (sigma2 < 0.0) throw std::invalid_argument("check_clustering_condition: negative sigma2");
    const int m = bases.front().ambient_dim();
    int d_max = 0;
    for (const auto& b : bases) {
        if (b.ambient_dim() != m)
            throw std::invalid_argument("check_clustering_condition: mixed ambient dimensions");
        d_max = std::max(d_max, b.dim());
    }
    ClusteringConditionReport report;
    for (size_t k = 0; k < bases.size(); ++k)
        for (size_t l = k + 1; l < bases.size(); ++l)
            report.max_affinity = std::max(report.max_affinity, affinity(bases[k], bases[l]).affinity);
    const double logN = std::log(static_cast<double>(N));
    const double sigma = std::sqrt(sigma2);
    report.noise_term = sigma * (1.0 + sigma) / std::sqrt(logN) *
                        std::sqrt(static_cast<double>(d_max)) / std::sqrt(static_cast<double>(m));
    report.lhs = report.max_affinity + report.noise_term;
    report.rhs = 1.0 / (12.0 * logN);
    report.m_ok = static_cast<double>(m) >= 6.0 * logN;
    report.satisfied = report.lhs <= report.rhs && report.m_ok;
    return report;
}

OutlierConditionReport check_outlier_condition(int d_max, int m, int N, double sigma2, double c1,
                                               const std::vector<int>* inlier_counts) {
    if (d_max < 1 || m < 1) throw std::invalid_argument("check_outlier_condition: bad dimensions");
    if (N < 2) throw std::invalid_argument("check_outlier_condition: need N >= 2");
    if (c1 <= 0.0) throw std::invalid_argument("check_outlier_condition: c1 must be positive");
    OutlierConditionReport report;
    const double one_plus = (1.0 + sigma2) * (1.0 + sigma2);
    report.lhs = static_cast<double>(d_max) / static_cast<double>(m);
    report.rhs = c1 / (one_plus * std::log(static_cast<double>(N)));
    report.satisfied = report.lhs <= report.rhs;
    if (inlier_counts) {
        double total = 0.0;
        for (int c : *inlier_counts) total += c;
        report.outlier_budget =
            std::exp(static_cast<double>(m) / static_cast<double>(d_max) * c1 / one_plus) - total;
        report.has_budget = true;
    }
    return report;
}

namespace {

// exact min-cost assignment on a square matrix (potentials method)
double min_cost_assignment(const std::vector<std::vector<double>>& cost,
                           std::vector<int>& row_of_col) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    row_of_col.assign(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        row_of_col[j - 1] = p[j] - 1;
        total += cost[p[j] - 1][j - 1];
    }
    return total;
}

}  // namespace

double clustering_error(const std::vector<int>& labels, const std::vector<int>& truth,
                        OutlierHandling handling) {
    if (labels.size() != truth.size())
        throw std::invalid_argument("clustering_error: length mismatch");
    std::map<int, int> pid, tid;
    long total = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (handling == OutlierHandling::exclude &&
            (labels[i] == kOutlierLabel || truth[i] == kOutlierLabel))
            continue;
        pid.emplace(labels[i], static_cast<int>(pid.size()));
        tid.emplace(truth[i], static_cast<int>(tid.size()));
        ++total;
    }
    if (total == 0) throw std::invalid_argument("clustering_error: no points to score");
    const int k = std::max(static_cast<int>(pid.size()), static_cast<int>(tid.size()));
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (size_t i = 0; i < truth.size(); ++i) {
        if (handling == OutlierHandling::exclude &&
            (labels[i] == kOutlierLabel || truth[i] == kOutlierLabel))
            continue;
        cost[pid[labels[i]]][tid[truth[i]]] -= 1.0;
    }
    std::vector<int> assignment;
    const double agreements = -min_cost_assignment(cost, assignment);
    return 1.0 - agreements / static_cast<double>(total);
}

std::vector<SubspaceBasis> recover_subspaces(const DataSet& data, const std::vector<int>& labels,
                                             int d) {
    const int n = data.num_points();
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("recover_subspaces: label count mismatch");
    if (d < 1) throw std::invalid_argument("recover_subspaces: d must be >= 1");
    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i)
        if (labels[i] != kOutlierLabel) clusters[labels[i]].push_back(i);
    std::string deficient;
    for (const auto& [lab, members] : clusters)
        if (static_cast<int>(members.size()) < d)
            deficient += " cluster " + std::to_string(lab) + " has " +
                         std::to_string(members.size()) + " points (needs " + std::to_string(d) + ")";
    if (!deficient.empty()) throw std::invalid_argument("recover_subspaces:" + deficient);

    std::vector<SubspaceBasis> bases;
    bases.reserve(clusters.size());
    for (const auto& [lab, members] : clusters) {
        Matrix block(members.size(), data.points.cols());
        for (size_t r = 0; r < members.size(); ++r) block.row(r) = data.points.row(members[r]);
        Eigen::BDCSVD<Matrix> svd(block, Eigen::ComputeThinV);
        SubspaceBasis basis;
        basis.basis = svd.matrixV().leftCols(d);
        bases.push_back(std::move(basis));
    }
    return bases;
}

}  // namespace tsc
