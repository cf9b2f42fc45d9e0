#include "tsc/analysis.hpp"
#include "tsc/harness.hpp"
#include "tsc/io.hpp"
#include "tsc/outlier.hpp"
#include "tsc/spectral.hpp"
#include "tsc/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

int resolve_q(int q, int L_hint, int N) {
    if (q > 0) return q;
    if (L_hint > 0) return tsc::default_q(N, L_hint);
    throw std::runtime_error("supply --q, or --L-hint to derive it");
}

json timings_to_json(const tsc::StageTimings& t) {
    return {
        {"gram_s", t.gram_s},       {"selection_s", t.selection_s},
        {"adjacency_s", t.adjacency_s}, {"laplacian_s", t.laplacian_s},
        {"eigen_s", t.eigen_s},     {"kmeans_s", t.kmeans_s},
        {"total_s", t.total_s},
    };
}

int cmd_generate(const std::string& config, const std::string& out, const std::string& labels,
                 std::int64_t seed) {
    tsc::SyntheticModel model = tsc::read_model_json(config);
    if (seed >= 0) model.seed = static_cast<std::uint64_t>(seed);
    auto [data, record] = tsc::generate(model);
    tsc::write_points_csv(data, out);
    if (!labels.empty()) tsc::write_labels(data.labels, labels);
    std::cerr << "wrote " << data.num_points() << " points in R^" << data.ambient_dim() << " to "
              << out << '\n';
    return 0;
}

int cmd_adjacency(const std::string& in, int q, int L_hint, const std::string& out) {
    const tsc::DataSet data = tsc::read_points_csv(in);
    const int effective_q = resolve_q(q, L_hint, data.num_points());
    const tsc::NeighborSet neighbors = tsc::select_neighbors(data, effective_q);
    tsc::write_matrix_csv(tsc::build_adjacency(neighbors).A, out);
    std::cerr << "wrote " << data.num_points() << "x" << data.num_points()
              << " adjacency (q=" << effective_q << ") to " << out << '\n';
    return 0;
}

int cmd_cluster(const std::string& in, int q, int L_hint, int L_override, int max_L,
                std::uint64_t seed, bool normalize, bool remove_outliers, double c,
                const std::string& out) {
    tsc::DataSet data = tsc::read_points_csv(in);
    const int original_n = data.num_points();

    json report_json;
    std::vector<int> kept;
    if (remove_outliers) {
        const tsc::OutlierReport outliers = tsc::detect_outliers(data, {c});
        if (outliers.threshold >= 1.0)
            std::cerr << "warning: threshold " << outliers.threshold
                      << " >= 1; every unit-norm point would be flagged\n";
        data = tsc::remove_flagged(data, outliers.flags, &kept);
        if (data.num_points() < 2) throw std::runtime_error("fewer than 2 points survive removal");
        report_json["outliers"] = {{"threshold", outliers.threshold},
                                   {"num_flagged", outliers.num_flagged()}};
    }

    tsc::PipelineOptions opts;
    opts.q = q;
    opts.L_hint = L_hint;
    opts.L_override = L_override;
    opts.max_L = max_L;
    opts.normalize_points = normalize;
    tsc::RandomSource source(seed);
    const tsc::ClusterReport report = tsc::tsc_pipeline(data, opts, source);

    std::vector<int> labels(original_n, tsc::kOutlierLabel);
    if (remove_outliers) {
        for (size_t r = 0; r < kept.size(); ++r) labels[kept[r]] = report.labels[r];
    } else {
        labels = report.labels;
    }

    report_json["labels"] = labels;
    report_json["estimated_L"] = report.estimated_L;
    report_json["gap_index"] = report.spectrum.gap_index;
    report_json["eigenvalues"] =
        std::vector<double>(report.spectrum.eigenvalues.begin(), report.spectrum.eigenvalues.end());
    report_json["timings"] = timings_to_json(report.timings);
    open_out(out) << report_json.dump(2) << '\n';
    std::cerr << "clustered " << original_n << " points into " << report.estimated_L
              << " groups; report in " << out << '\n';
    return 0;
}

int cmd_outliers(const std::string& in, double c, const std::string& out) {
    const tsc::DataSet data = tsc::read_points_csv(in);
    const tsc::OutlierReport report = tsc::detect_outliers(data, {c});
    if (report.threshold >= 1.0)
        std::cerr << "warning: threshold " << report.threshold
                  << " >= 1; every unit-norm point would be flagged\n";
    json j = {
        {"c", c},
        {"threshold", report.threshold},
        {"num_flagged", report.num_flagged()},
        {"flags", std::vector<bool>(report.flags.begin(), report.flags.end())},
        {"max_correlations",
         std::vector<double>(report.max_correlations.begin(), report.max_correlations.end())},
    };
    open_out(out) << j.dump(2) << '\n';
    std::cerr << "flagged " << report.num_flagged() << " of " << data.num_points()
              << " points (threshold " << report.threshold << ") -> " << out << '\n';
    return 0;
}

int cmd_check(const std::string& model_path, double c1) {
    const tsc::SyntheticModel model = tsc::read_model_json(model_path);
    const int N = model.total_points();

    json affinities = json::array();
    for (int k = 0; k < model.num_subspaces(); ++k)
        for (int l = k + 1; l < model.num_subspaces(); ++l)
            affinities.push_back(
                {{"k", k}, {"l", l}, {"affinity", tsc::affinity(model.bases[k], model.bases[l]).affinity}});

    const tsc::ClusteringConditionReport cc =
        tsc::check_clustering_condition(model.bases, N, model.noise_sigma2);
    const tsc::OutlierConditionReport oc = tsc::check_outlier_condition(
        model.max_dim(), model.ambient_dim(), N, model.noise_sigma2, c1, &model.counts);

    json j = {
        {"m", model.ambient_dim()},
        {"N", N},
        {"L", model.num_subspaces()},
        {"d_max", model.max_dim()},
        {"sigma2", model.noise_sigma2},
        {"affinities", std::move(affinities)},
        {"clustering_condition",
         {{"satisfied", cc.satisfied},
          {"lhs", cc.lhs},
          {"rhs", cc.rhs},
          {"m_ok", cc.m_ok},
          {"max_affinity", cc.max_affinity},
          {"noise_term", cc.noise_term}}},
        {"outlier_condition",
         {{"satisfied", oc.satisfied},
          {"lhs", oc.lhs},
          {"rhs", oc.rhs},
          {"c1", c1},
          {"outlier_budget", oc.outlier_budget}}},
    };
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out_dir, bool no_timing) {
    const tsc::SweepSpec spec = tsc::read_sweep_spec(config);
    const tsc::SweepResult result = tsc::run_sweep(spec);
    tsc::write_sweep_outputs(result, out_dir, !no_timing);
    const int failed = result.num_failed_trials();
    std::cerr << result.cells.size() << " cells, " << failed << " failed trials; outputs in "
              << out_dir << '\n';
    return failed > 0 ? 1 : 0;
}

int cmd_outlier_trials(const std::string& config, int trials, std::uint64_t seed, double c,
                       const std::string& out) {
    const tsc::SyntheticModel model = tsc::read_model_json(config);
    const tsc::OutlierTrialsSummary summary = tsc::run_outlier_trials(model, {c}, trials, seed);
    if (summary.threshold >= 1.0)
        std::cerr << "warning: threshold " << summary.threshold
                  << " >= 1; every unit-norm point would be flagged\n";
    open_out(out) << tsc::outlier_summary_to_json(summary).dump(2) << '\n';
    std::cerr << trials << " trials: all-outliers-detected frequency "
              << summary.all_detected_frequency << ", zero-misflag frequency "
              << summary.zero_misflag_frequency << " -> " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thresholded-correlation subspace clustering toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    auto* gen = app.add_subcommand("generate", "sample a dataset from a model description");
    std::string gen_config, gen_out, gen_labels;
    std::int64_t gen_seed = -1;
    gen->add_option("--config", gen_config, "model JSON")->required();
    gen->add_option("--out", gen_out, "points CSV to write")->required();
    gen->add_option("--labels", gen_labels, "label file to write");
    gen->add_option("--seed", gen_seed, "override the model's seed");
    gen->callback([&] { exit_code = cmd_generate(gen_config, gen_out, gen_labels, gen_seed); });

    auto* adj = app.add_subcommand("adjacency", "build the thresholded-correlation adjacency");
    std::string adj_in, adj_out;
    int adj_q = 0, adj_hint = 0;
    adj->add_option("--in", adj_in, "points CSV")->required();
    adj->add_option("--q", adj_q, "neighbors per point");
    adj->add_option("--L-hint", adj_hint, "derive q from an expected group count");
    adj->add_option("--out", adj_out, "adjacency CSV to write")->required();
    adj->callback([&] { exit_code = cmd_adjacency(adj_in, adj_q, adj_hint, adj_out); });

    auto* clu = app.add_subcommand("cluster", "run the full clustering pipeline");
    std::string clu_in, clu_out;
    int clu_q = 0, clu_hint = 0, clu_L = 0, clu_max_L = 0;
    std::uint64_t clu_seed = 1;
    bool clu_normalize = false, clu_remove = false;
    double clu_c = tsc::OutlierConfig{}.c;
    clu->add_option("--in", clu_in, "points CSV")->required();
    clu->add_option("--q", clu_q, "neighbors per point");
    clu->add_option("--L-hint", clu_hint, "derive q from an expected group count");
    clu->add_option("--L", clu_L, "bypass the eigengap estimate with a fixed group count");
    clu->add_option("--max-L", clu_max_L, "cap the eigengap search range");
    clu->add_option("--seed", clu_seed, "seed for the clustering stage");
    clu->add_flag("--normalize", clu_normalize, "scale points to unit norm first");
    clu->add_flag("--remove-outliers", clu_remove, "drop low-correlation points first");
    clu->add_option("--c", clu_c, "outlier threshold constant (with --remove-outliers)");
    clu->add_option("--out", clu_out, "report JSON to write")->required();
    clu->callback([&] {
        exit_code = cmd_cluster(clu_in, clu_q, clu_hint, clu_L, clu_max_L, clu_seed, clu_normalize,
                                clu_remove, clu_c, clu_out);
    });

    auto* outl = app.add_subcommand("outliers", "flag points with no strong correlation");
    std::string outl_in, outl_out;
    double outl_c = tsc::OutlierConfig{}.c;
    outl->add_option("--in", outl_in, "points CSV")->required();
    outl->add_option("--c", outl_c, "threshold constant");
    outl->add_option("--out", outl_out, "report JSON to write")->required();
    outl->callback([&] { exit_code = cmd_outliers(outl_in, outl_c, outl_out); });

    auto* chk = app.add_subcommand("check", "evaluate the guarantee conditions for a model");
    std::string chk_model;
    double chk_c1 = 0.1;  // working default, not a derived constant
    chk->add_option("--model", chk_model, "model JSON")->required();
    chk->add_option("--c1", chk_c1, "constant for the outlier-regime condition");
    chk->callback([&] { exit_code = cmd_check(chk_model, chk_c1); });

    auto* swp = app.add_subcommand("sweep", "run a Monte Carlo grid of clustering trials");
    std::string swp_config, swp_out;
    bool swp_no_timing = false;
    swp->add_option("--config", swp_config, "sweep spec JSON")->required();
    swp->add_option("--out", swp_out, "output directory")->required();
    swp->add_flag("--no-timing", swp_no_timing, "omit wall-time fields from outputs");
    swp->callback([&] { exit_code = cmd_sweep(swp_config, swp_out, swp_no_timing); });

    auto* otr = app.add_subcommand("outlier-trials", "repeat generation + outlier detection");
    std::string otr_config, otr_out;
    int otr_trials = 20;
    std::uint64_t otr_seed = 1;
    double otr_c = tsc::OutlierConfig{}.c;
    otr->add_option("--config", otr_config, "model JSON")->required();
    otr->add_option("--trials", otr_trials, "number of trials");
    otr->add_option("--seed", otr_seed, "master seed");
    otr->add_option("--c", otr_c, "threshold constant");
    otr->add_option("--out", otr_out, "summary JSON to write")->required();
    otr->callback(
        [&] { exit_code = cmd_outlier_trials(otr_config, otr_trials, otr_seed, otr_c, otr_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
