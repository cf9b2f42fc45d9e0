#pragma once

#include <Eigen/Dense>

#include "tsc/gram.hpp"
#include "tsc/types.hpp"

namespace tsc {

/**
 * Per-point q nearest neighbors in absolute inner product. Row j holds the
 * selected indices S_j (never containing j) and the values |<x_j, x_i>|,
 * ordered by value descending with ties to the smaller index. Every value in
 * S_j is >= every absolute inner product with a non-selected point.
 */
struct NeighborSet {
    Eigen::MatrixXi indices;  // N x q
    Matrix values;            // N x q

    int num_points() const { return static_cast<int>(indices.rows()); }
    int q() const { return static_cast<int>(indices.cols()); }

    /// Checks the defining threshold inequality against the Gram matrix the
    /// set was built from. Test helper; throws on violation.
    void validate(const Matrix& gram) const;
};

/// Symmetric nonnegative similarity matrix with zero diagonal,
/// A_ij = |[z_j]_i| + |[z_i]_j|.
struct AdjacencyMatrix {
    Matrix A;

    int num_points() const { return static_cast<int>(A.rows()); }
    void validate() const;
};

/// Default neighbor count when the caller supplies a cluster-count hint:
/// max(3, ceil(N / (6 L_hint))).
int default_q(int N, int L_hint);

/// Selection from a precomputed Gram matrix. Partial selection per row,
/// O(N) average per point, parallel over points.
NeighborSet select_neighbors_from_gram(const Matrix& gram, int q);

/// Computes the Gram matrix and selects. Warns on stderr when row norms
/// differ by more than 10x (the threshold rule presumes comparable norms).
NeighborSet select_neighbors(const DataSet& data, int q);

AdjacencyMatrix build_adjacency(const NeighborSet& neighbors);

}  // namespace tsc
