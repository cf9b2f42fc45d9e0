#include "tsc/harness.hpp"

#include "tsc/analysis.hpp"
#include "tsc/io.hpp"
#include "tsc/spectral.hpp"
#include "tsc/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#ifdef TSC_HAVE_LAPACKE
extern "C" void openblas_set_num_threads(int);
#endif

namespace tsc {

namespace {

void pin_blas_threads() {
#ifdef TSC_HAVE_LAPACKE
    // trials are already parallel; threaded BLAS underneath would oversubscribe
    openblas_set_num_threads(1);
#endif
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void SweepSpec::validate() const {
    if (m < 1 || L < 1) throw std::invalid_argument("sweep: m and L must be positive");
    if (d_values.empty() || rho_values.empty() || sigma2_values.empty())
        throw std::invalid_argument("sweep: d, rho and sigma2 grids must be non-empty");
    for (int d : d_values)
        if (d < 1 || d > m) throw std::invalid_argument("sweep: need 1 <= d <= m");
    for (int rho : rho_values)
        if (rho < 1) throw std::invalid_argument("sweep: rho values must be positive");
    for (double s : sigma2_values)
        if (s < 0.0) throw std::invalid_argument("sweep: sigma2 values must be nonnegative");
    if (trials < 0) throw std::invalid_argument("sweep: negative trial count");
    if (explicit_q < 0 || max_L < 0) throw std::invalid_argument("sweep: negative q or max_L");
}

int SweepResult::num_failed_trials() const {
    int k = 0;
    for (const auto& cell : cells)
        for (const auto& t : cell.trials) k += !t.ok();
    return k;
}

const CellResult* SweepResult::find_cell(int d, int rho, double sigma2) const {
    for (const auto& cell : cells)
        if (cell.d == d && cell.rho == rho && cell.sigma2 == sigma2) return &cell;
    return nullptr;
}

namespace {

TrialResult run_one_trial(const SweepSpec& spec, int d, int rho, double sigma2, int trial) {
    TrialResult result;
    result.seed = derive_seed(spec.master_seed,
                              {std::bit_cast<std::uint64_t>(sigma2), static_cast<std::uint64_t>(d),
                               static_cast<std::uint64_t>(rho), static_cast<std::uint64_t>(trial)});
    const auto t0 = std::chrono::steady_clock::now();
    try {
        RandomSource basis_src(derive_seed(result.seed, {1}));
        const std::uint64_t gen_seed = derive_seed(result.seed, {2});
        RandomSource pipe_src(derive_seed(result.seed, {3}));

        SyntheticModel model;
        const std::vector<int> dims(spec.L, d);
        if (spec.orthogonal_bases) {
            model.bases = mutually_orthogonal_bases(spec.m, dims, basis_src);
        } else {
            model.bases.reserve(spec.L);
            for (int l = 0; l < spec.L; ++l)
                model.bases.push_back(random_orthobasis(spec.m, d, basis_src));
        }
        model.counts.assign(spec.L, d * rho);
        model.noise_sigma2 = sigma2;
        model.seed = gen_seed;
        auto [data, record] = generate(model);

        PipelineOptions opts;
        opts.q = spec.explicit_q > 0 ? spec.explicit_q : d;
        opts.max_L = spec.max_L;
        opts.keep_adjacency = true;
        ClusterReport report = tsc_pipeline(data, opts, pipe_src);

        result.ce = clustering_error(report.labels, data.labels);
        result.estimated_L = report.estimated_L;
        result.sdp = subspace_detection_property(report.adjacency, data.labels, opts.q).holds;
    } catch (const std::exception& e) {
        result.error = e.what();
    } catch (...) {
        result.error = "unknown error";
    }
    result.seconds = seconds_since(t0);
    return result;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    pin_blas_threads();

    SweepResult result;
    result.spec = spec;

    struct Slot {
        int cell;
        int d;
        int rho;
        double sigma2;
        int trial;
    };
    std::vector<Slot> slots;
    for (double sigma2 : spec.sigma2_values)
        for (int d : spec.d_values)
            for (int rho : spec.rho_values) {
                CellResult cell;
                cell.d = d;
                cell.rho = rho;
                cell.sigma2 = sigma2;
                cell.q = spec.explicit_q > 0 ? spec.explicit_q : d;
                cell.N = spec.L * d * rho;
                cell.trials.resize(spec.trials);
                const int idx = static_cast<int>(result.cells.size());
                result.cells.push_back(std::move(cell));
                for (int t = 0; t < spec.trials; ++t) slots.push_back({idx, d, rho, sigma2, t});
            }

    const int total = static_cast<int>(slots.size());
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < total; ++s) {
        const Slot& slot = slots[s];
        result.cells[slot.cell].trials[slot.trial] =
            run_one_trial(spec, slot.d, slot.rho, slot.sigma2, slot.trial);
    }

    for (auto& cell : result.cells) {
        std::vector<double> ces;
        double sum_ce = 0.0, sum_L = 0.0, sdp_count = 0.0;
        for (const auto& t : cell.trials) {
            cell.wall_time_s += t.seconds;
            if (!t.ok()) continue;
            ces.push_back(t.ce);
            sum_ce += t.ce;
            sum_L += t.estimated_L;
            sdp_count += t.sdp;
        }
        if (!ces.empty()) {
            cell.mean_ce = sum_ce / ces.size();
            cell.median_ce = median_of(ces);
            cell.mean_estimated_L = sum_L / ces.size();
            cell.sdp_frequency = sdp_count / ces.size();
        }
    }
    return result;
}

nlohmann::json sweep_spec_to_json(const SweepSpec& spec) {
    return {
        {"m", spec.m},
        {"L", spec.L},
        {"d_values", spec.d_values},
        {"rho_values", spec.rho_values},
        {"sigma2_values", spec.sigma2_values},
        {"trials", spec.trials},
        {"master_seed", spec.master_seed},
        {"q_rule", spec.explicit_q > 0 ? std::to_string(spec.explicit_q) : "q=d"},
        {"max_L", spec.max_L},
        {"orthogonal_bases", spec.orthogonal_bases},
    };
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    SweepSpec spec;
    spec.m = j.at("m").get<int>();
    spec.L = j.at("L").get<int>();
    spec.d_values = j.at("d_values").get<std::vector<int>>();
    spec.rho_values = j.at("rho_values").get<std::vector<int>>();
    spec.sigma2_values = j.at("sigma2_values").get<std::vector<double>>();
    spec.trials = j.value("trials", 10);
    spec.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("q_rule")) {
        const auto rule = j.at("q_rule").get<std::string>();
        if (rule != "q=d") spec.explicit_q = std::stoi(rule);
    }
    spec.max_L = j.value("max_L", 0);
    spec.orthogonal_bases = j.value("orthogonal_bases", false);
    spec.validate();
    return spec;
}

SweepSpec read_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep config " + path);
    nlohmann::json j;
    in >> j;
    return sweep_spec_from_json(j);
}

nlohmann::json sweep_result_to_json(const SweepResult& result, bool include_timing) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : result.cells) {
        nlohmann::json trials = nlohmann::json::array();
        for (const auto& t : cell.trials) {
            nlohmann::json jt = {
                {"seed", t.seed},
                {"estimated_L", t.estimated_L},
                {"sdp", t.sdp},
            };
            if (t.ok())
                jt["ce"] = t.ce;
            else {
                jt["ce"] = nullptr;
                jt["error"] = t.error;
            }
            if (include_timing) jt["seconds"] = t.seconds;
            trials.push_back(std::move(jt));
        }
        nlohmann::json jc = {
            {"d", cell.d},
            {"rho", cell.rho},
            {"sigma2", cell.sigma2},
            {"q", cell.q},
            {"N", cell.N},
            {"mean_ce", cell.mean_ce},
            {"median_ce", cell.median_ce},
            {"sdp_frequency", cell.sdp_frequency},
            {"mean_estimated_L", cell.mean_estimated_L},
            {"trials", std::move(trials)},
        };
        if (include_timing) jc["wall_time_s"] = cell.wall_time_s;
        cells.push_back(std::move(jc));
    }
    return {
        {"spec", sweep_spec_to_json(result.spec)},
        {"cells", std::move(cells)},
        {"failed_trials", result.num_failed_trials()},
    };
}

void write_sweep_outputs(const SweepResult& result, const std::string& out_dir,
                         bool include_timing) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
        std::ofstream out(dir / "results.json");
        if (!out) throw std::runtime_error("cannot write results.json in " + out_dir);
        out << sweep_result_to_json(result, include_timing).dump(2) << '\n';
    }
    for (double sigma2 : result.spec.sigma2_values) {
        std::ofstream out(dir / ("CE_sigma" + format_g(sigma2) + ".csv"));
        if (!out) throw std::runtime_error("cannot write CE csv in " + out_dir);
        out << "d";
        for (int rho : result.spec.rho_values) out << ',' << rho;
        out << '\n';
        for (int d : result.spec.d_values) {
            out << d;
            for (int rho : result.spec.rho_values) {
                const CellResult* cell = result.find_cell(d, rho, sigma2);
                out << ',' << (cell ? format_exact(cell->mean_ce) : "");
            }
            out << '\n';
        }
    }
}

OutlierTrialsSummary run_outlier_trials(const SyntheticModel& model, const OutlierConfig& config,
                                        int trials, std::uint64_t master_seed) {
    model.validate();
    if (trials < 0) throw std::invalid_argument("outlier trials: negative trial count");
    pin_blas_threads();

    OutlierTrialsSummary summary;
    summary.trials = trials;
    summary.c = config.c;
    summary.threshold = config.c * std::sqrt(std::log(static_cast<double>(model.total_points()))) /
                        std::sqrt(static_cast<double>(model.ambient_dim()));
    summary.per_trial.resize(trials);

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t) {
        SyntheticModel trial_model = model;
        trial_model.seed = derive_seed(master_seed, {static_cast<std::uint64_t>(t)});
        auto [data, record] = generate(trial_model);
        const OutlierReport report = detect_outliers(data, config);

        OutlierTrialResult& r = summary.per_trial[t];
        r.seed = trial_model.seed;
        int outliers = 0, inliers = 0, detected = 0, misflagged = 0;
        for (int i = 0; i < data.num_points(); ++i) {
            if (data.labels[i] == kOutlierLabel) {
                ++outliers;
                detected += report.flags[i];
            } else {
                ++inliers;
                misflagged += report.flags[i];
            }
        }
        r.outlier_detection_rate = outliers > 0 ? static_cast<double>(detected) / outliers : 1.0;
        r.inlier_misflag_rate = inliers > 0 ? static_cast<double>(misflagged) / inliers : 0.0;
        r.all_outliers_detected = detected == outliers;
        r.zero_inliers_misflagged = misflagged == 0;
    }

    for (const auto& r : summary.per_trial) {
        summary.mean_detection_rate += r.outlier_detection_rate;
        summary.mean_misflag_rate += r.inlier_misflag_rate;
        summary.all_detected_frequency += r.all_outliers_detected;
        summary.zero_misflag_frequency += r.zero_inliers_misflagged;
    }
    if (trials > 0) {
        summary.mean_detection_rate /= trials;
        summary.mean_misflag_rate /= trials;
        summary.all_detected_frequency /= trials;
        summary.zero_misflag_frequency /= trials;
    }
    return summary;
}

nlohmann::json outlier_summary_to_json(const OutlierTrialsSummary& summary) {
    nlohmann::json per_trial = nlohmann::json::array();
    for (const auto& r : summary.per_trial)
        per_trial.push_back({
            {"seed", r.seed},
            {"outlier_detection_rate", r.outlier_detection_rate},
            {"inlier_misflag_rate", r.inlier_misflag_rate},
            {"all_outliers_detected", r.all_outliers_detected},
            {"zero_inliers_misflagged", r.zero_inliers_misflagged},
        });
    return {
        {"trials", summary.trials},
        {"c", summary.c},
        {"threshold", summary.threshold},
        {"mean_outlier_detection_rate", summary.mean_detection_rate},
        {"mean_inlier_misflag_rate", summary.mean_misflag_rate},
        {"all_outliers_detected_frequency", summary.all_detected_frequency},
        {"zero_inliers_misflagged_frequency", summary.zero_misflag_frequency},
        {"per_trial", std::move(per_trial)},
    };
}

}  // namespace tsc
