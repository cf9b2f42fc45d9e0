#pragma once

#include "tsc/adjacency.hpp"
#include "tsc/types.hpp"

#include <utility>
#include <vector>

namespace tsc {

struct AffinityReport {
    double affinity = 0.0;            // in [0, 1]
    Vector principal_angle_cosines;   // descending, in [0, 1]
};

// ||Uk^T Ul||_F / sqrt(min(dk, dl)); cosines are the singular values of the
// cross-Gram, clipped to [0, 1].
AffinityReport affinity(const SubspaceBasis& Uk, const SubspaceBasis& Ul);

struct SdpReport {
    bool holds = false;
    std::vector<std::pair<int, int>> cross_links;  // nonzero A_ij with different labels
    std::vector<int> deficient_rows;               // rows with < q same-label nonzeros
};

// Part (i): every nonzero entry links same-label points. Part (ii): every row
// has at least q nonzero same-label entries.
SdpReport subspace_detection_property(const AdjacencyMatrix& adj, const std::vector<int>& truth,
                                      int q);

struct MarginReport {
    Vector margins;  // NaN for outlier-labeled points
    double min_margin = 0.0;
    bool all_positive = false;
};

// Per point: the (n_l - q)-th smallest same-class absolute correlation
// (excluding self) minus the largest cross-class one. A positive margin means
// the point's q strongest correlations all stay inside its class.
MarginReport margin_statistic(const DataSet& data, const std::vector<int>& truth, int q);

struct ClusteringConditionReport {
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    bool m_ok = false;
    double max_affinity = 0.0;
    double noise_term = 0.0;
};

// max affinity plus the noise term sigma(1+sigma)/sqrt(log N) * sqrt(d_max/m)
// against 1/(12 log N), with the side requirement m >= 6 log N.
ClusteringConditionReport check_clustering_condition(const std::vector<SubspaceBasis>& bases,
                                                     int N, double sigma2);

struct OutlierConditionReport {
    bool satisfied = false;
    double lhs = 0.0;  // d_max / m
    double rhs = 0.0;  // c1 / ((1+sigma2)^2 log N)
    double outlier_budget = 0.0;
    bool has_budget = false;
};

// d_max/m <= c1/((1+sigma2)^2 log N); when inlier counts are supplied, also
// the implied bound on how many outliers the rule tolerates.
OutlierConditionReport check_outlier_condition(int d_max, int m, int N, double sigma2, double c1,
                                               const std::vector<int>* inlier_counts = nullptr);

enum class OutlierHandling {
    exclude,   // drop positions labeled as outliers on either side
    as_class,  // treat the outlier label as one more class
};

// 1 - (best injective label matching agreement) / N via exact optimal
// assignment on the confusion matrix.
double clustering_error(const std::vector<int>& labels, const std::vector<int>& truth,
                        OutlierHandling handling = OutlierHandling::exclude);

// Per-cluster top-d directions of the uncentered second moment.
std::vector<SubspaceBasis> recover_subspaces(const DataSet& data, const std::vector<int>& labels,
                                             int d);

}  // namespace tsc
