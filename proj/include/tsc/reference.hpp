#pragma once

#include "tsc/adjacency.hpp"
#include "tsc/types.hpp"

#include <vector>

// Serial reference implementations. These mirror the parallel kernels with
// straightforward loops and full sorts so the fast paths can be checked
// against them exactly.
namespace tsc::ref {

Matrix gram_matrix(const Matrix& points);

NeighborSet select_neighbors_from_gram(const Matrix& gram, int q);

// max_p != j |<x_p, x_j>| for every j
Vector max_correlations(const Matrix& points);

// Per-point separation between same-class and cross-class absolute
// correlations: the (n_l - q)-th ascending same-class value minus the largest
// cross-class value. Positive margins for all points of a class certify that
// q-nearest selection stays inside the class.
Vector margin_statistic(const DataSet& data, int q);

// Exact clustering error by trying every bijection between label sets.
// Feasible for small numbers of clusters only.
double clustering_error_exhaustive(const std::vector<int>& predicted,
                                   const std::vector<int>& truth);

}  // namespace tsc::ref
