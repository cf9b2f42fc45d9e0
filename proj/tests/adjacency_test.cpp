#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsc/adjacency.hpp"
#include "tsc/reference.hpp"
#include "tsc/synthgen.hpp"

#include <cmath>
#include <stdexcept>

using tsc::AdjacencyMatrix;
using tsc::DataSet;
using tsc::Matrix;
using tsc::NeighborSet;
using tsc::RandomSource;

namespace {

// e1, e2, (2 e1 + e2)/sqrt(5): pairwise |<.,.>| are 0, 2/sqrt5, 1/sqrt5
DataSet three_point_example() {
    DataSet data;
    data.points.resize(3, 2);
    const double s = 1.0 / std::sqrt(5.0);
    data.points << 1.0, 0.0, 0.0, 1.0, 2.0 * s, s;
    return data;
}

DataSet random_points(int n, int m, std::uint64_t seed) {
    RandomSource src(seed);
    DataSet data;
    data.points.resize(n, m);
    for (int i = 0; i < n; ++i) data.points.row(i) = src.unit_sphere(m).transpose();
    return data;
}

}  // namespace

TEST_CASE("three-point neighbor selection, q=1") {
    const DataSet data = three_point_example();
    const NeighborSet nbrs = tsc::select_neighbors(data, 1);
    REQUIRE(nbrs.num_points() == 3);
    REQUIRE(nbrs.q() == 1);
    CHECK(nbrs.indices(0, 0) == 2);
    CHECK(nbrs.indices(1, 0) == 2);
    CHECK(nbrs.indices(2, 0) == 0);
    CHECK(nbrs.values(2, 0) == doctest::Approx(0.89442719099991586).epsilon(1e-15));
    CHECK(nbrs.values(1, 0) == doctest::Approx(0.44721359549995793).epsilon(1e-15));
    nbrs.validate(tsc::gram_matrix(data.points));
}

TEST_CASE("three-point adjacency, q=1") {
    const DataSet data = three_point_example();
    const AdjacencyMatrix adj = tsc::build_adjacency(tsc::select_neighbors(data, 1));
    adj.validate();
    CHECK(adj.A(0, 2) == doctest::Approx(1.7888543819998317).epsilon(1e-15));  // 4/sqrt5, mutual
    CHECK(adj.A(1, 2) == doctest::Approx(0.44721359549995793).epsilon(1e-15));  // one-sided
    CHECK(adj.A(0, 1) == 0.0);
    CHECK(adj.A == adj.A.transpose());
}

TEST_CASE("q = N-1 selects everything else") {
    const DataSet data = random_points(8, 5, 21);
    const NeighborSet nbrs = tsc::select_neighbors(data, 7);
    for (int j = 0; j < 8; ++j) {
        std::vector<bool> seen(8, false);
        for (int s = 0; s < 7; ++s) {
            const int idx = nbrs.indices(j, s);
            CHECK(idx != j);
            CHECK(!seen[idx]);
            seen[idx] = true;
        }
    }
}

TEST_CASE("partial selection matches the full-sort reference") {
    for (std::uint64_t seed : {31, 32, 33}) {
        const DataSet data = random_points(20, 10, seed);
        const Matrix gram = tsc::gram_matrix(data.points);
        for (int q : {1, 5, 19}) {
            const NeighborSet fast = tsc::select_neighbors_from_gram(gram, q);
            const NeighborSet slow = tsc::ref::select_neighbors_from_gram(gram, q);
            CHECK(fast.indices == slow.indices);
            CHECK(fast.values == slow.values);
        }
    }
}

TEST_CASE("gram kernel matches the reference") {
    const DataSet data = random_points(17, 6, 41);
    const Matrix fast = tsc::gram_matrix(data.points);
    const Matrix slow = tsc::ref::gram_matrix(data.points);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(fast == fast.transpose());
}

TEST_CASE("scaling all points leaves selection fixed and scales A by c^2") {
    const DataSet data = random_points(15, 4, 51);
    DataSet scaled = data;
    scaled.points *= 3.0;
    const NeighborSet n1 = tsc::select_neighbors(data, 4);
    const NeighborSet n2 = tsc::select_neighbors(scaled, 4);
    CHECK(n1.indices == n2.indices);
    const AdjacencyMatrix a1 = tsc::build_adjacency(n1);
    const AdjacencyMatrix a2 = tsc::build_adjacency(n2);
    CHECK((a2.A - 9.0 * a1.A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthogonal subspaces keep selection within the subspace") {
    RandomSource src(61);
    const auto bases = tsc::mutually_orthogonal_bases(20, {4, 4}, src);
    tsc::SyntheticModel model;
    model.bases = bases;
    model.counts = {25, 25};
    model.seed = 611;
    const auto [data, rec] = tsc::generate(model);
    const NeighborSet nbrs = tsc::select_neighbors(data, 6);
    for (int j = 0; j < 50; ++j)
        for (int s = 0; s < 6; ++s)
            CHECK(data.labels[nbrs.indices(j, s)] == data.labels[j]);
}

TEST_CASE("mutually orthogonal points give a zero adjacency matrix") {
    DataSet data;
    data.points = Matrix::Identity(3, 3);
    const NeighborSet nbrs = tsc::select_neighbors(data, 1);
    const AdjacencyMatrix adj = tsc::build_adjacency(nbrs);
    CHECK(adj.A.cwiseAbs().maxCoeff() == 0.0);
    // index sets still have cardinality q
    CHECK(nbrs.indices.rows() == 3);
    adj.validate();
}

TEST_CASE("default_q applies the 1/(6L) rule with a floor of 3") {
    CHECK(tsc::default_q(600, 15) == 7);
    CHECK(tsc::default_q(90, 15) == 3);
    CHECK(tsc::default_q(10, 1) == 3);
    CHECK(tsc::default_q(1000, 2) == 84);
    CHECK_THROWS_AS(tsc::default_q(10, 0), std::invalid_argument);
}

TEST_CASE("q out of range is rejected") {
    const DataSet data = random_points(5, 3, 71);
    CHECK_THROWS_AS(tsc::select_neighbors(data, 0), std::invalid_argument);
    CHECK_THROWS_AS(tsc::select_neighbors(data, 5), std::invalid_argument);
    CHECK_NOTHROW(tsc::select_neighbors(data, 4));
}

TEST_CASE("adjacency validation catches corruption") {
    const DataSet data = random_points(6, 3, 81);
    AdjacencyMatrix adj = tsc::build_adjacency(tsc::select_neighbors(data, 2));
    CHECK_NOTHROW(adj.validate());

    SUBCASE("asymmetry") {
        adj.A(0, 1) += 0.5;
        CHECK_THROWS_AS(adj.validate(), std::runtime_error);
    }
    SUBCASE("negative entry") {
        adj.A(0, 1) = adj.A(1, 0) = -0.25;
        CHECK_THROWS_AS(adj.validate(), std::runtime_error);
    }
    SUBCASE("nonzero diagonal") {
        adj.A(2, 2) = 0.1;
        CHECK_THROWS_AS(adj.validate(), std::runtime_error);
    }
}
