#include "tsc/synthgen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsc {

SubspaceBasis random_orthobasis(int m, int d, RandomSource& source) {
    if (d < 1 || d > m)
        throw std::invalid_argument("random_orthobasis: need 1 <= d <= m, got d=" + std::to_string(d) +
                                    ", m=" + std::to_string(m));
    Matrix g(m, d);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = source.gaussian();

    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(m, d);
    const Matrix r = qr.matrixQR().topRows(d);
    // sign convention: diagonal of R nonnegative
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return SubspaceBasis{std::move(q)};
}

std::vector<SubspaceBasis> mutually_orthogonal_bases(int m, const std::vector<int>& dims,
                                                     RandomSource& source) {
    const int total = std::accumulate(dims.begin(), dims.end(), 0);
    if (total > m)
        throw std::invalid_argument("mutually_orthogonal_bases: sum of dims " + std::to_string(total) +
                                    " exceeds ambient dimension " + std::to_string(m));
    const SubspaceBasis joint = random_orthobasis(m, total, source);
    std::vector<SubspaceBasis> bases;
    bases.reserve(dims.size());
    int col = 0;
    for (int d : dims) {
        bases.push_back(SubspaceBasis{joint.basis.middleCols(col, d)});
        col += d;
    }
    return bases;
}

std::pair<DataSet, GenerationRecord> generate(const SyntheticModel& model) {
    model.validate();
    const int m = model.ambient_dim();
    const int num_inliers = model.num_inliers();
    const int total = model.total_points();
    const double noise_std = std::sqrt(model.noise_sigma2 / m);
    const double scale =
        model.scaling == InlierScaling::unit_energy ? 1.0 / std::sqrt(1.0 + model.noise_sigma2) : 1.0;

    DataSet data;
    data.points.resize(total, m);
    data.labels.resize(total);

    GenerationRecord rec;
    rec.coefficients.reserve(num_inliers);
    rec.noise.resize(num_inliers, m);
    rec.clean_points.resize(num_inliers, m);

    auto source = seeded_source(model.seed);
    int row = 0;
    for (int l = 0; l < model.num_subspaces(); ++l) {
        const Matrix& basis = model.bases[l].basis;
        for (int j = 0; j < model.counts[l]; ++j, ++row) {
            Vector a = source.unit_sphere(model.bases[l].dim());
            Vector e = noise_std * source.gaussian_vector(m);
            Vector y = basis * a;
            data.points.row(row) = scale * (y + e);
            data.labels[row] = l;
            rec.coefficients.push_back(std::move(a));
            rec.noise.row(row) = e;
            rec.clean_points.row(row) = y;
        }
    }
    const double outlier_std = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < model.num_outliers; ++j, ++row) {
        data.points.row(row) = outlier_std * source.gaussian_vector(m);
        data.labels[row] = kOutlierLabel;
    }
    return {std::move(data), std::move(rec)};
}

}  // namespace tsc
