#pragma once

#include "tsc/types.hpp"

#include <vector>

namespace tsc {

struct OutlierConfig {
    double c = 5.633826408401308;  // 2.3 * sqrt(6)
};

struct OutlierReport {
    std::vector<bool> flags;  // true marks an outlier
    Vector max_correlations;  // max_{p != j} |<x_p, x_j>|
    double threshold = 0.0;   // c * sqrt(log N) / sqrt(m)

    int num_flagged() const {
        int k = 0;
        for (bool f : flags) k += f;
        return k;
    }
};

OutlierReport detect_outliers(const DataSet& data, const OutlierConfig& config = {});
OutlierReport detect_outliers_from_gram(const Matrix& gram, int ambient_dim,
                                        const OutlierConfig& config = {});

// Drops flagged points; kept_indices maps surviving rows back to the input.
DataSet remove_flagged(const DataSet& data, const std::vector<bool>& flags,
                       std::vector<int>* kept_indices = nullptr);

}  // namespace tsc
