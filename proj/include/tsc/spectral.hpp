#pragma once

#include "tsc/adjacency.hpp"
#include "tsc/random.hpp"
#include "tsc/types.hpp"

#include <vector>

namespace tsc {

struct SpectrumResult {
    Vector eigenvalues;  // ascending
    int estimated_L = 0;
    int gap_index = 0;  // 1-based i maximizing lambda_{i+1} - lambda_i, equals estimated_L
    Matrix embedding;   // N x estimated_L, rows normalized
};

struct EigenDecomposition {
    Vector values;   // ascending
    Matrix vectors;  // column j pairs with values(j)
};

struct StageTimings {
    double gram_s = 0.0;
    double selection_s = 0.0;
    double adjacency_s = 0.0;
    double laplacian_s = 0.0;
    double eigen_s = 0.0;
    double kmeans_s = 0.0;
    double total_s = 0.0;
};

struct ClusterReport {
    std::vector<int> labels;
    int estimated_L = 0;
    SpectrumResult spectrum;
    StageTimings timings;
    AdjacencyMatrix adjacency;  // populated only when requested
    bool has_adjacency = false;
};

// L_sym = I - D^{-1/2} A D^{-1/2}; zero-degree nodes keep an identity row
// (their D^{-1/2} entry is taken as 0), contributing eigenvalue 1.
Matrix normalized_laplacian(const AdjacencyMatrix& adj);

// Largest consecutive gap in an ascending eigenvalue sequence; ties go to the
// smaller index. max_L > 0 restricts the search to i <= max_L.
int estimate_num_subspaces(const Vector& eigenvalues, int max_L = 0);

EigenDecomposition symmetric_eigendecomposition(const Matrix& sym);

// Eigenvectors of the k smallest eigenvalues, rows normalized to unit length.
// Rows with norm below 1e-12 are left zero.
Matrix spectral_embed(const Matrix& laplacian, int k);
Matrix spectral_embed(const EigenDecomposition& eig, int k);

struct KMeansOptions {
    int restarts = 10;
    int max_iters = 300;
    double tol = 1e-9;  // relative WCSS improvement threshold
};

struct KMeansResult {
    std::vector<int> labels;
    double wcss = 0.0;
};

// Lloyd iterations, farthest-point seeding on the first restart and uniform
// seeding on the rest; returns the lowest-WCSS assignment. Deterministic
// given the source.
KMeansResult kmeans(const Matrix& points, int k, RandomSource& source,
                    const KMeansOptions& opts = {});

struct PipelineOptions {
    int q = 0;           // 0 derives q from L_hint
    int L_hint = 0;      // used only when q == 0
    int L_override = 0;  // 0 uses the eigengap estimate
    int max_L = 0;       // 0 searches the full range
    bool normalize_points = false;
    bool keep_adjacency = false;
    KMeansOptions kmeans;
};

ClusterReport tsc_pipeline(const DataSet& data, const PipelineOptions& opts, RandomSource& source);

}  // namespace tsc
