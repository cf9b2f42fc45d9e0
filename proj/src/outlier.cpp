#include "tsc/outlier.hpp"

#include "tsc/gram.hpp"

#include <cmath>
#include <stdexcept>

namespace tsc {

OutlierReport detect_outliers_from_gram(const Matrix& gram, int ambient_dim,
                                        const OutlierConfig& config) {
    const int n = static_cast<int>(gram.rows());
    if (n < 2) throw std::invalid_argument("detect_outliers: need at least 2 points");
    if (config.c <= 0.0) throw std::invalid_argument("detect_outliers: c must be positive");

    OutlierReport report;
    report.threshold = config.c * std::sqrt(std::log(static_cast<double>(n))) /
                       std::sqrt(static_cast<double>(ambient_dim));
    report.max_correlations.resize(n);
    report.flags.assign(n, false);

#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        double best = 0.0;
        for (int p = 0; p < n; ++p) {
            if (p == j) continue;
            const double v = std::abs(gram(p, j));
            if (v > best) best = v;
        }
        report.max_correlations(j) = best;
    }
    for (int j = 0; j < n; ++j) report.flags[j] = report.max_correlations(j) < report.threshold;
    return report;
}

OutlierReport detect_outliers(const DataSet& data, const OutlierConfig& config) {
    return detect_outliers_from_gram(gram_matrix(data.points), data.ambient_dim(), config);
}

DataSet remove_flagged(const DataSet& data, const std::vector<bool>& flags,
                       std::vector<int>* kept_indices) {
    const int n = data.num_points();
    if (static_cast<int>(flags.size()) != n)
        throw std::invalid_argument("remove_flagged: flag count does not match point count");
    int keep = 0;
    for (bool f : flags) keep += !f;
    DataSet out;
    out.points.resize(keep, data.points.cols());
    if (data.has_labels()) out.labels.reserve(keep);
    if (kept_indices) kept_indices->clear();
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (flags[i]) continue;
        out.points.row(r++) = data.points.row(i);
        if (data.has_labels()) out.labels.push_back(data.labels[i]);
        if (kept_indices) kept_indices->push_back(i);
    }
    return out;
}

}  // namespace tsc
