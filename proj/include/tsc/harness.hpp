#pragma once

#include "tsc/outlier.hpp"
#include "tsc/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace tsc {

/**
 * Monte Carlo grid over subspace dimension d, points-per-dimension rho and
 * noise level sigma^2. Each cell runs `trials` independent datasets with L
 * subspaces of dimension d in R^m, n = d * rho points each.
 */
struct SweepSpec {
    int m = 50;
    int L = 15;
    std::vector<int> d_values;
    std::vector<int> rho_values;
    std::vector<double> sigma2_values;
    int trials = 10;
    std::uint64_t master_seed = 1;
    int explicit_q = 0;  // 0 applies the q = d rule
    int max_L = 0;       // optional eigengap search cap, 0 = full range
    bool orthogonal_bases = false;  // draw one mutually orthogonal frame per trial

    void validate() const;
};

struct TrialResult {
    std::uint64_t seed = 0;
    double ce = 0.0;
    int estimated_L = 0;
    bool sdp = false;
    double seconds = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

struct CellResult {
    int d = 0;
    int rho = 0;
    double sigma2 = 0.0;
    int q = 0;
    int N = 0;  // L * d * rho
    double mean_ce = 0.0;
    double median_ce = 0.0;
    double sdp_frequency = 0.0;
    double mean_estimated_L = 0.0;
    double wall_time_s = 0.0;
    std::vector<TrialResult> trials;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<CellResult> cells;  // sigma2-major, then d, then rho

    int num_failed_trials() const;
    const CellResult* find_cell(int d, int rho, double sigma2) const;
};

/**
 * Runs every cell. Per-trial seeds derive from (master_seed, sigma2, d, rho,
 * trial index), so a cell's results do not depend on which other cells are
 * present. Trials run in parallel; failures are recorded per trial and never
 * abort the sweep.
 */
SweepResult run_sweep(const SweepSpec& spec);

nlohmann::json sweep_spec_to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
SweepSpec read_sweep_spec(const std::string& path);

/// include_timing = false drops all wall-time fields, leaving byte-identical
/// output for equal specs.
nlohmann::json sweep_result_to_json(const SweepResult& result, bool include_timing = true);

/// Writes results.json plus one CE_sigma<val>.csv per noise level
/// (rows = d, columns = rho, values = mean CE).
void write_sweep_outputs(const SweepResult& result, const std::string& out_dir,
                         bool include_timing = true);

struct OutlierTrialResult {
    std::uint64_t seed = 0;
    double outlier_detection_rate = 0.0;  // flagged outliers / N0 (1 when N0 = 0)
    double inlier_misflag_rate = 0.0;     // flagged inliers / num inliers
    bool all_outliers_detected = false;
    bool zero_inliers_misflagged = false;
};

struct OutlierTrialsSummary {
    int trials = 0;
    double threshold = 0.0;
    double c = 0.0;
    double mean_detection_rate = 0.0;
    double mean_misflag_rate = 0.0;
    double all_detected_frequency = 0.0;
    double zero_misflag_frequency = 0.0;
    std::vector<OutlierTrialResult> per_trial;
};

/// Repeats generation + detection with the model's bases held fixed and the
/// generation seed derived per trial from master_seed.
OutlierTrialsSummary run_outlier_trials(const SyntheticModel& model, const OutlierConfig& config,
                                        int trials, std::uint64_t master_seed);

nlohmann::json outlier_summary_to_json(const OutlierTrialsSummary& summary);

}  // namespace tsc
