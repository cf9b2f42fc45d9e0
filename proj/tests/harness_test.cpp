#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsc/harness.hpp"
#include "tsc/synthgen.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using tsc::RandomSource;
using tsc::SweepResult;
using tsc::SweepSpec;

namespace {

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.m = 30;
    spec.L = 3;
    spec.d_values = {4};
    spec.rho_values = {8};
    spec.sigma2_values = {0.0};
    spec.trials = 4;
    spec.master_seed = 7;
    spec.orthogonal_bases = true;
    spec.explicit_q = 6;
    return spec;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("sweep spec validation") {
    SweepSpec spec = tiny_spec();
    CHECK_NOTHROW(spec.validate());
    SUBCASE("empty grids") {
        spec.d_values.clear();
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
    SUBCASE("d beyond m") {
        spec.d_values = {31};
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
    SUBCASE("negative sigma2") {
        spec.sigma2_values = {-0.1};
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
    SUBCASE("negative trials") {
        spec.trials = -1;
        CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    }
}

TEST_CASE("zero trials produce an empty but well-formed result") {
    SweepSpec spec = tiny_spec();
    spec.trials = 0;
    const SweepResult result = tsc::run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.cells[0].trials.empty());
    CHECK(result.num_failed_trials() == 0);
}

TEST_CASE("orthogonal noiseless cells cluster perfectly") {
    SweepSpec spec;
    spec.m = 50;
    spec.L = 3;
    spec.d_values = {5};
    spec.rho_values = {10};
    spec.sigma2_values = {0.0};
    spec.trials = 5;
    spec.master_seed = 11;
    spec.orthogonal_bases = true;
    spec.explicit_q = 8;
    const SweepResult result = tsc::run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    const auto& cell = result.cells[0];
    CHECK(cell.N == 150);
    CHECK(cell.q == 8);
    CHECK(cell.mean_ce == 0.0);
    CHECK(cell.median_ce == 0.0);
    CHECK(cell.sdp_frequency == 1.0);
    CHECK(cell.mean_estimated_L == 3.0);
    CHECK(result.num_failed_trials() == 0);
}

TEST_CASE("sweeps are deterministic given the master seed") {
    const SweepSpec spec = tiny_spec();
    const auto a = tsc::sweep_result_to_json(tsc::run_sweep(spec), false).dump(2);
    const auto b = tsc::sweep_result_to_json(tsc::run_sweep(spec), false).dump(2);
    CHECK(a == b);
}

TEST_CASE("cell results do not depend on the surrounding grid") {
    SweepSpec lone = tiny_spec();
    SweepSpec grid = tiny_spec();
    grid.d_values = {2, 4};
    grid.rho_values = {8, 10};
    grid.sigma2_values = {0.0, 0.5};

    const SweepResult r1 = tsc::run_sweep(lone);
    const SweepResult r2 = tsc::run_sweep(grid);
    const auto* c1 = r1.find_cell(4, 8, 0.0);
    const auto* c2 = r2.find_cell(4, 8, 0.0);
    REQUIRE(c1 != nullptr);
    REQUIRE(c2 != nullptr);
    REQUIRE(c1->trials.size() == c2->trials.size());
    for (size_t t = 0; t < c1->trials.size(); ++t) {
        CHECK(c1->trials[t].seed == c2->trials[t].seed);
        CHECK(c1->trials[t].ce == c2->trials[t].ce);
        CHECK(c1->trials[t].estimated_L == c2->trials[t].estimated_L);
    }
    CHECK(r2.find_cell(3, 8, 0.0) == nullptr);
}

TEST_CASE("trial failures are recorded, not thrown") {
    SweepSpec spec = tiny_spec();
    spec.L = 3;
    spec.d_values = {20};  // 3 * 20 > m = 30, orthogonal frame impossible
    spec.trials = 3;
    const SweepResult result = tsc::run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    CHECK(result.num_failed_trials() == 3);
    for (const auto& t : result.cells[0].trials) {
        CHECK(!t.ok());
        CHECK(!t.error.empty());
    }
    const auto j = tsc::sweep_result_to_json(result, false);
    CHECK(j.at("cells").at(0).at("trials").at(0).at("ce").is_null());
}

TEST_CASE("sweep spec JSON round-trip") {
    SweepSpec spec = tiny_spec();
    SUBCASE("explicit q") {
        const auto j = tsc::sweep_spec_to_json(spec);
        CHECK(j.at("q_rule") == "6");
        const SweepSpec back = tsc::sweep_spec_from_json(j);
        CHECK(tsc::sweep_spec_to_json(back) == j);
    }
    SUBCASE("q = d rule") {
        spec.explicit_q = 0;
        const auto j = tsc::sweep_spec_to_json(spec);
        CHECK(j.at("q_rule") == "q=d");
        const SweepSpec back = tsc::sweep_spec_from_json(j);
        CHECK(back.explicit_q == 0);
        CHECK(tsc::sweep_spec_to_json(back) == j);
    }
}

TEST_CASE("sweep outputs are byte-identical across runs") {
    const SweepSpec spec = tiny_spec();
    const auto dir1 = std::filesystem::temp_directory_path() / "tsc_sweep_a";
    const auto dir2 = std::filesystem::temp_directory_path() / "tsc_sweep_b";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    tsc::write_sweep_outputs(tsc::run_sweep(spec), dir1.string(), false);
    tsc::write_sweep_outputs(tsc::run_sweep(spec), dir2.string(), false);

    CHECK(slurp(dir1 / "results.json") == slurp(dir2 / "results.json"));
    CHECK(slurp(dir1 / "CE_sigma0.csv") == slurp(dir2 / "CE_sigma0.csv"));

    // CSV layout: header row of rho values, one row per d
    std::istringstream csv(slurp(dir1 / "CE_sigma0.csv"));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "d,8");
    REQUIRE(std::getline(csv, line));
    CHECK(line.substr(0, 2) == "4,");
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("outlier trials with no outliers are trivially perfect") {
    RandomSource src(21);
    tsc::SyntheticModel model;
    model.bases = {tsc::random_orthobasis(50, 3, src)};
    model.counts = {30};
    model.scaling = tsc::InlierScaling::unit_energy;
    const auto summary = tsc::run_outlier_trials(model, {}, 3, 5);
    CHECK(summary.trials == 3);
    CHECK(summary.mean_detection_rate == 1.0);
    CHECK(summary.all_detected_frequency == 1.0);
}

TEST_CASE("outlier trials at the concentration scale") {
    RandomSource src(22);
    tsc::SyntheticModel model;
    model.bases = {tsc::random_orthobasis(300, 3, src), tsc::random_orthobasis(300, 3, src)};
    model.counts = {50, 50};
    model.num_outliers = 100;
    model.scaling = tsc::InlierScaling::unit_energy;
    const auto summary = tsc::run_outlier_trials(model, {}, 5, 23);
    CHECK(summary.threshold == doctest::Approx(0.74870687013061521).epsilon(1e-14));
    CHECK(summary.all_detected_frequency >= 0.8);
    CHECK(summary.zero_misflag_frequency >= 0.8);
    CHECK(summary.mean_detection_rate > 0.99);
    CHECK(summary.mean_misflag_rate < 0.01);
    REQUIRE(static_cast<int>(summary.per_trial.size()) == 5);

    // repeatability of the whole summary
    const auto again = tsc::run_outlier_trials(model, {}, 5, 23);
    CHECK(tsc::outlier_summary_to_json(summary) == tsc::outlier_summary_to_json(again));

    // different master seeds change the per-trial seeds
    const auto other = tsc::run_outlier_trials(model, {}, 5, 24);
    CHECK(other.per_trial[0].seed != summary.per_trial[0].seed);
}
