#pragma once

#include "tsc/types.hpp"

namespace tsc {

/// Symmetric N x N matrix of pairwise inner products <x_i, x_j>, computed
/// once and shared by neighbor selection, outlier detection, and the margin
/// statistic. Parallel over rows.
Matrix gram_matrix(const Matrix& points);

}  // namespace tsc
