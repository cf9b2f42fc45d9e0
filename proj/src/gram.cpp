#include "tsc/gram.hpp"

namespace tsc {

Matrix gram_matrix(const Matrix& points) {
    const Eigen::Index n = points.rows();
    Matrix gram(n, n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = points.row(i).dot(points.row(j));
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

}  // namespace tsc
