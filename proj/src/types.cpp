#include "tsc/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tsc {

void DataSet::validate() const {
    const int n = num_points();
    const int m = ambient_dim();
    if (n < 2) throw std::invalid_argument("DataSet: need at least 2 points, got " + std::to_string(n));
    if (m < 1) throw std::invalid_argument("DataSet: ambient dimension must be >= 1");
    if (!labels.empty()) {
        if (static_cast<int>(labels.size()) != n)
            throw std::invalid_argument("DataSet: labels length " + std::to_string(labels.size()) +
                                        " does not match point count " + std::to_string(n));
        int max_label = -1;
        for (int v : labels) {
            if (v < kOutlierLabel)
                throw std::invalid_argument("DataSet: label " + std::to_string(v) + " out of range");
            max_label = std::max(max_label, v);
        }
        // non-outlier labels must cover 0..max_label
        if (max_label >= 0) {
            std::vector<char> seen(max_label + 1, 0);
            for (int v : labels)
                if (v >= 0) seen[v] = 1;
            for (int l = 0; l <= max_label; ++l)
                if (!seen[l])
                    throw std::invalid_argument("DataSet: cluster labels not contiguous, missing " +
                                                std::to_string(l));
        }
    }
}

double SubspaceBasis::orthonormality_error() const {
    const Matrix gram = basis.transpose() * basis;
    return (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

void SubspaceBasis::validate(double tol) const {
    const int m = ambient_dim();
    const int d = dim();
    if (d < 1 || d > m)
        throw std::invalid_argument("SubspaceBasis: need 1 <= d <= m, got d=" + std::to_string(d) +
                                    ", m=" + std::to_string(m));
    const double err = orthonormality_error();
    if (err > tol)
        throw std::invalid_argument("SubspaceBasis: columns not orthonormal, deviation " +
                                    std::to_string(err));
}

int SyntheticModel::max_dim() const {
    int d = 0;
    for (const auto& b : bases) d = std::max(d, b.dim());
    return d;
}

int SyntheticModel::num_inliers() const {
    int n = 0;
    for (int c : counts) n += c;
    return n;
}

void SyntheticModel::validate() const {
    if (bases.empty()) throw std::invalid_argument("SyntheticModel: need at least one subspace");
    if (bases.size() != counts.size())
        throw std::invalid_argument("SyntheticModel: bases/counts size mismatch");
    const int m = bases.front().ambient_dim();
    for (const auto& b : bases) {
        if (b.ambient_dim() != m)
            throw std::invalid_argument("SyntheticModel: bases do not share an ambient dimension");
        b.validate();
    }
    for (int c : counts)
        if (c < 1) throw std::invalid_argument("SyntheticModel: subspace counts must be positive");
    if (noise_sigma2 < 0.0) throw std::invalid_argument("SyntheticModel: noise_sigma2 must be >= 0");
    if (num_outliers < 0) throw std::invalid_argument("SyntheticModel: num_outliers must be >= 0");
}

DataSet normalize(const DataSet& data) {
    DataSet out;
    out.points = data.points;
    out.labels = data.labels;
    for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
        const double n = out.points.row(i).norm();
        if (n == 0.0)
            throw std::invalid_argument("normalize: row " + std::to_string(i) + " has zero norm");
        out.points.row(i) /= n;
    }
    return out;
}

}  // namespace tsc
