#include "tsc/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsc {

namespace {

struct Candidate {
    double value;
    int index;
};

// value descending, ties to the smaller index
inline bool better(const Candidate& a, const Candidate& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
}

}  // namespace

void NeighborSet::validate(const Matrix& gram) const {
    const int n = num_points();
    const int k = q();
    for (int j = 0; j < n; ++j) {
        std::vector<char> selected(n, 0);
        double min_selected = std::numeric_limits<double>::infinity();
        for (int s = 0; s < k; ++s) {
            const int i = indices(j, s);
            if (i < 0 || i >= n || i == j)
                throw std::runtime_error("NeighborSet: bad index in S_" + std::to_string(j));
            if (selected[i]) throw std::runtime_error("NeighborSet: duplicate index in S_" + std::to_string(j));
            selected[i] = 1;
            const double v = std::abs(gram(j, i));
            if (v != values(j, s)) throw std::runtime_error("NeighborSet: stored value mismatch");
            min_selected = std::min(min_selected, v);
        }
        for (int p = 0; p < n; ++p) {
            if (p == j || selected[p]) continue;
            if (std::abs(gram(j, p)) > min_selected)
                throw std::runtime_error("NeighborSet: threshold inequality violated at point " +
                                         std::to_string(j));
        }
    }
}

void AdjacencyMatrix::validate() const {
    const int n = num_points();
    if (A.cols() != n) throw std::runtime_error("AdjacencyMatrix: not square");
    for (int i = 0; i < n; ++i) {
        if (A(i, i) != 0.0) throw std::runtime_error("AdjacencyMatrix: nonzero diagonal");
        for (int j = 0; j < i; ++j) {
            if (A(i, j) != A(j, i)) throw std::runtime_error("AdjacencyMatrix: not symmetric");
            if (A(i, j) < 0.0) throw std::runtime_error("AdjacencyMatrix: negative entry");
        }
    }
}

int default_q(int N, int L_hint) {
    if (L_hint < 1) throw std::invalid_argument("default_q: L_hint must be >= 1");
    const int q = (N + 6 * L_hint - 1) / (6 * L_hint);  // ceil(N / (6 L))
    return std::max(3, q);
}

NeighborSet select_neighbors_from_gram(const Matrix& gram, int q) {
    const int n = static_cast<int>(gram.rows());
    if (q < 1 || q > n - 1)
        throw std::invalid_argument("select_neighbors: need 1 <= q <= N-1, got q=" + std::to_string(q) +
                                    ", N=" + std::to_string(n));
    NeighborSet out;
    out.indices.resize(n, q);
    out.values.resize(n, q);

#pragma omp parallel
    {
        std::vector<Candidate> cand(n - 1);
#pragma omp for schedule(dynamic, 32)
        for (int j = 0; j < n; ++j) {
            int c = 0;
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                cand[c++] = {std::abs(gram(j, i)), i};
            }
            std::nth_element(cand.begin(), cand.begin() + (q - 1), cand.end(), better);
            std::sort(cand.begin(), cand.begin() + q, better);
            for (int s = 0; s < q; ++s) {
                out.indices(j, s) = cand[s].index;
                out.values(j, s) = cand[s].value;
            }
        }
    }
    return out;
}

NeighborSet select_neighbors(const DataSet& data, int q) {
    const auto norms = data.points.rowwise().norm();
    const double lo = norms.minCoeff();
    const double hi = norms.maxCoeff();
    if (lo <= 0.0 || hi > 10.0 * lo)
        std::cerr << "warning: row norms differ by more than 10x (min " << lo << ", max " << hi
                  << "); thresholded correlations assume comparable norms\n";
    return select_neighbors_from_gram(gram_matrix(data.points), q);
}

AdjacencyMatrix build_adjacency(const NeighborSet& neighbors) {
    const int n = neighbors.num_points();
    const int q = neighbors.q();
    AdjacencyMatrix adj;
    adj.A = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int s = 0; s < q; ++s) {
            const int i = neighbors.indices(j, s);
            const double v = neighbors.values(j, s);
            adj.A(i, j) += v;
            adj.A(j, i) += v;
        }
    }
    return adj;
}

}  // namespace tsc
