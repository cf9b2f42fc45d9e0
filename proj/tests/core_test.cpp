#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsc/random.hpp"
#include "tsc/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

using tsc::DataSet;
using tsc::Matrix;
using tsc::RandomSource;
using tsc::SubspaceBasis;
using tsc::SyntheticModel;
using tsc::Vector;

TEST_CASE("normalize scales rows to unit norm") {
    DataSet data;
    data.points.resize(2, 3);
    data.points << 3.0, 4.0, 0.0, 0.0, 0.0, 2.0;
    const DataSet out = tsc::normalize(data);
    CHECK(out.points(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(out.points(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(out.points(0, 2) == 0.0);
    CHECK(out.points(1, 2) == 1.0);
}

TEST_CASE("normalize leaves unit rows unchanged and preserves labels") {
    DataSet data;
    data.points.resize(2, 2);
    data.points << 1.0, 0.0, 0.0, -1.0;
    data.labels = {0, 1};
    const DataSet out = tsc::normalize(data);
    CHECK(out.points == data.points);
    CHECK(out.labels == data.labels);
}

TEST_CASE("normalize random matrix: unit norms, positive scaling of input") {
    RandomSource src(7);
    DataSet data;
    data.points.resize(5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) data.points(i, j) = 10.0 * src.gaussian();
    const DataSet out = tsc::normalize(data);
    for (int i = 0; i < 5; ++i) {
        CHECK(out.points.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double factor = out.points.row(i).norm() / data.points.row(i).norm();
        CHECK(factor > 0.0);
        CHECK((out.points.row(i) - factor * data.points.row(i)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("normalize is idempotent") {
    RandomSource src(11);
    DataSet data;
    data.points.resize(6, 4);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 4; ++j) data.points(i, j) = src.gaussian();
    const DataSet once = tsc::normalize(data);
    const DataSet twice = tsc::normalize(once);
    CHECK((twice.points - once.points).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("normalize reports the zero-norm row by index") {
    DataSet data;
    data.points = Matrix::Zero(4, 3);
    data.points(0, 0) = 1.0;
    data.points(1, 1) = 1.0;
    data.points(3, 2) = 1.0;
    try {
        tsc::normalize(data);
        FAIL("expected zero-norm row to throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("equal seeds give identical draw sequences") {
    RandomSource a = tsc::seeded_source(42);
    RandomSource b = tsc::seeded_source(42);
    for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    CHECK(a.seed() == 42);
}

TEST_CASE("different seeds diverge") {
    RandomSource a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 20; ++i) equal += a.gaussian() == b.gaussian();
    CHECK(equal < 20);
}

TEST_CASE("sphere draws have unit norm") {
    RandomSource src(3);
    for (int d : {1, 2, 7, 50}) {
        const Vector v = src.unit_sphere(d);
        CHECK(v.size() == d);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gaussian sample moments") {
    RandomSource src(123);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = src.gaussian();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform stays in [0,1) and uniform_index in range") {
    RandomSource src(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = src.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(src.uniform_index(7) < 7);
    }
}

TEST_CASE("splitmix64 matches the reference sequence") {
    // first output of the reference generator seeded with 0
    CHECK(tsc::splitmix64(0) == 16294208416658607535ULL);
}

TEST_CASE("derive_seed is stable and sensitive to every coordinate") {
    const std::uint64_t base = tsc::derive_seed(5, {1, 2, 3});
    CHECK(base == tsc::derive_seed(5, {1, 2, 3}));
    CHECK(base != tsc::derive_seed(6, {1, 2, 3}));
    CHECK(base != tsc::derive_seed(5, {0, 2, 3}));
    CHECK(base != tsc::derive_seed(5, {1, 0, 3}));
    CHECK(base != tsc::derive_seed(5, {1, 2, 0}));
    CHECK(base != tsc::derive_seed(5, {1, 2}));
    CHECK(base != tsc::derive_seed(5, {3, 2, 1}));
}

TEST_CASE("derived child sources are independent streams") {
    RandomSource parent(17);
    RandomSource c0 = parent.derive(0);
    RandomSource c1 = parent.derive(0);  // second derive consumes state, new child
    CHECK(c0.seed() != c1.seed());
    RandomSource other(17);
    CHECK(other.derive(0).seed() == c0.seed());
}

TEST_CASE("DataSet validation") {
    DataSet data;
    data.points.resize(3, 2);
    data.points << 1, 0, 0, 1, 1, 1;

    SUBCASE("valid without labels") { CHECK_NOTHROW(data.validate()); }
    SUBCASE("valid with labels and outliers") {
        data.labels = {0, 1, tsc::kOutlierLabel};
        CHECK_NOTHROW(data.validate());
    }
    SUBCASE("length mismatch") {
        data.labels = {0, 1};
        CHECK_THROWS_AS(data.validate(), std::invalid_argument);
    }
    SUBCASE("label below the outlier marker") {
        data.labels = {0, -2, 1};
        CHECK_THROWS_AS(data.validate(), std::invalid_argument);
    }
    SUBCASE("non-contiguous cluster labels") {
        data.labels = {0, 2, 2};
        CHECK_THROWS_AS(data.validate(), std::invalid_argument);
    }
    SUBCASE("single point rejected") {
        DataSet one;
        one.points.resize(1, 2);
        one.points << 1, 0;
        CHECK_THROWS_AS(one.validate(), std::invalid_argument);
    }
}

TEST_CASE("SubspaceBasis validation") {
    SubspaceBasis b;
    b.basis.resize(3, 2);
    b.basis << 1, 0, 0, 1, 0, 0;
    CHECK(b.orthonormality_error() == 0.0);
    CHECK_NOTHROW(b.validate());

    b.basis(2, 1) = 0.5;  // breaks column norm
    CHECK(b.orthonormality_error() > 0.1);
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);

    SubspaceBasis wide;
    wide.basis = Matrix::Identity(2, 2);
    wide.basis.conservativeResize(2, 3);
    CHECK_THROWS_AS(wide.validate(), std::invalid_argument);
}

TEST_CASE("SyntheticModel validation") {
    SyntheticModel model;
    SubspaceBasis b;
    b.basis = Matrix::Identity(4, 2);
    model.bases = {b};
    model.counts = {10};
    CHECK_NOTHROW(model.validate());
    CHECK(model.max_dim() == 2);
    CHECK(model.num_inliers() == 10);
    CHECK(model.total_points() == 10);

    SUBCASE("no subspaces") {
        model.bases.clear();
        model.counts.clear();
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
    SUBCASE("bases/counts mismatch") {
        model.counts = {10, 5};
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
    SUBCASE("mixed ambient dimensions") {
        SubspaceBasis other;
        other.basis = Matrix::Identity(5, 2);
        model.bases.push_back(other);
        model.counts.push_back(3);
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
    SUBCASE("nonpositive count") {
        model.counts = {0};
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
    SUBCASE("negative noise") {
        model.noise_sigma2 = -0.1;
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
    SUBCASE("negative outlier count") {
        model.num_outliers = -1;
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
}
