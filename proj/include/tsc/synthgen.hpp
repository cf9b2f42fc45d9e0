#pragma once

#include <utility>
#include <vector>

#include "tsc/random.hpp"
#include "tsc/types.hpp"

namespace tsc {

/**
 * Basis drawn uniformly over m x d orthonormal frames: a standard-Gaussian
 * matrix orthonormalized by Householder QR, with the sign convention that the
 * diagonal of the triangular factor is nonnegative. Throws if d > m.
 */
SubspaceBasis random_orthobasis(int m, int d, RandomSource& source);

/// Mutually orthogonal subspaces with the given dimensions, drawn with a
/// uniformly random joint orientation (one sum(dims)-frame split column-wise).
/// Requires sum(dims) <= m.
std::vector<SubspaceBasis> mutually_orthogonal_bases(int m, const std::vector<int>& dims,
                                                     RandomSource& source);

/**
 * Generates a dataset from the model: for each subspace l, counts[l] points
 * s * (basis_l * a + e) with a uniform on the unit sphere of R^{d_l} and
 * e ~ N(0, (sigma^2/m) I); then num_outliers points drawn N(0, (1/m) I).
 * s is 1 or 1/sqrt(1+sigma^2) per model.scaling. Row order is subspace 0
 * first, ..., outliers last; labels mark outliers -1. Bit-reproducible for
 * equal models (including seed).
 */
std::pair<DataSet, GenerationRecord> generate(const SyntheticModel& model);

}  // namespace tsc
