#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace tsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Outlier marker used in label sequences; cluster labels are 0-based.
inline constexpr int kOutlierLabel = -1;

inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;

/**
 * A set of N points in R^m, one point per row, with optional ground-truth
 * labels. Label -1 marks an outlier; non-outlier labels form a contiguous
 * range starting at 0.
 */
struct DataSet {
    Matrix points;            // N x m
    std::vector<int> labels;  // empty, or one label per row

    int num_points() const { return static_cast<int>(points.rows()); }
    int ambient_dim() const { return static_cast<int>(points.cols()); }
    bool has_labels() const { return !labels.empty(); }

    /// Throws std::invalid_argument on any invariant violation.
    void validate() const;
};

/// Orthonormal basis of a d-dimensional subspace of R^m, one column per
/// basis vector.
struct SubspaceBasis {
    Matrix basis;  // m x d

    int ambient_dim() const { return static_cast<int>(basis.rows()); }
    int dim() const { return static_cast<int>(basis.cols()); }

    /// Max absolute deviation of basis^T basis from the identity.
    double orthonormality_error() const;
    void validate(double tol = kOrthonormalityTol) const;
};

/// Whether generated inliers are scaled by 1/sqrt(1+sigma^2), which makes
/// E||x||^2 = 1 and matches the expected squared norm of the outliers.
enum class InlierScaling { none, unit_energy };

/**
 * Full specification of the generative process: L deterministic subspaces,
 * n_l unit-sphere coefficient draws per subspace, isotropic Gaussian noise
 * with per-entry variance sigma^2/m, and num_outliers draws from
 * N(0, (1/m) I).
 */
struct SyntheticModel {
    std::vector<SubspaceBasis> bases;
    std::vector<int> counts;  // n_l per subspace
    double noise_sigma2 = 0.0;
    int num_outliers = 0;
    InlierScaling scaling = InlierScaling::none;
    std::uint64_t seed = 0;

    int num_subspaces() const { return static_cast<int>(bases.size()); }
    int ambient_dim() const { return bases.empty() ? 0 : bases.front().ambient_dim(); }
    int max_dim() const;
    int num_inliers() const;
    int total_points() const { return num_inliers() + num_outliers; }

    void validate() const;
};

/// Raw draws behind a generated dataset, kept so recovery error can be
/// measured without re-deriving them. Rows align with the inlier rows of the
/// dataset (inliers precede outliers in generation order).
struct GenerationRecord {
    std::vector<Vector> coefficients;  // a_j, unit norm, dimension d_l
    Matrix noise;                      // e_j, one row per inlier, unscaled
    Matrix clean_points;               // y_j = basis * a_j, one row per inlier
};

/**
 * Returns a copy of `data` with every row scaled to unit Euclidean norm.
 * Labels are preserved. Throws std::invalid_argument naming the first
 * offending row if any row has zero norm.
 */
DataSet normalize(const DataSet& data);

}  // namespace tsc
