#include <doctest.h>

#include <cmath>

#include "scenagg/rng.hpp"
#include "scenagg/som.hpp"

using namespace scenagg;

namespace {

ScenarioSet points_1d(std::vector<double> xs) {
    std::vector<std::vector<double>> profiles;
    for (double x : xs) profiles.push_back({x});
    return make_scenario_set(profiles, {}, {"c"});
}

}  // namespace

TEST_CASE("single update on a 1x1 grid lands on the sample") {
    const ScenarioSet s = points_1d({7.5});
    SomOptions opts;
    opts.epochs = 1;
    opts.lr0 = 1.0;
    opts.lr_floor = 1.0;  // constant alpha = 1
    opts.radius0 = 0.0;
    const SomGrid g = som_train(s, 1, 1, opts, 9);
    CHECK(g.weights[0][0] == doctest::Approx(7.5));
}

TEST_CASE("radius zero moves only the BMU") {
    const ScenarioSet s = points_1d({0.0, 10.0});
    SomOptions opts;
    opts.epochs = 1;
    opts.lr0 = 0.5;
    opts.lr_floor = 0.5;
    opts.radius0 = 0.0;
    const SomGrid g = som_train(s, 1, 4, opts, 4);
    // Same init sequence with a vanishing learning rate: any difference
    // marks a node that won a sample. With two samples at most two of the
    // four nodes can move when the neighborhood radius is zero.
    const SomGrid frozen = [&] {
        SomOptions o = opts;
        o.lr0 = 1e-12;
        o.lr_floor = 1e-12;
        return som_train(s, 1, 4, o, 4);
    }();
    int moved = 0;
    for (int i = 0; i < 4; ++i)
        if (std::abs(g.weights[i][0] - frozen.weights[i][0]) > 1e-6) ++moved;
    CHECK(moved >= 1);
    CHECK(moved <= 2);
}

TEST_CASE("1x1 grid converges to the data mean") {
    const ScenarioSet s = points_1d({1.0, 2.0, 3.0});
    SomOptions opts;
    opts.epochs = 50;
    opts.lr0 = 0.5;
    const SomGrid g = som_train(s, 1, 1, opts, 21);
    CHECK(g.weights[0][0] == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("bmu queries") {
    SomGrid g;
    g.rows = 1;
    g.cols = 2;
    g.weights = {{0.0}, {10.0}};

    CHECK(som_bmu(g, std::vector<double>{10.0}) == 1);
    CHECK(som_bmu(g, std::vector<double>{3.0}) == 0);
    CHECK(som_bmu(g, std::vector<double>{5.0}) == 0);  // tie -> lowest index
    CHECK_THROWS_WITH_AS(som_bmu(g, std::vector<double>{1.0, 2.0}),
                         doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("som_partition compacts to nonempty nodes") {
    SUBCASE("identical scenarios collapse to one node") {
        const ScenarioSet s = points_1d({4.0, 4.0, 4.0, 4.0});
        SomOptions opts;
        opts.epochs = 5;
        const SomGrid g = som_train(s, 2, 2, opts, 3);
        const Partition p = som_partition(g, s);
        CHECK(p.k() == 1);
        CHECK(p.cluster_weights[0] == doctest::Approx(4.0));
    }
    SUBCASE("nodes placed on distinct scenarios give singletons") {
        SomGrid g;
        g.rows = 1;
        g.cols = 3;
        g.weights = {{0.0}, {5.0}, {9.0}};
        const ScenarioSet s = points_1d({0.0, 5.0, 9.0});
        const Partition p = som_partition(g, s);
        CHECK(p.k() == 3);
        for (int i = 0; i < 3; ++i) CHECK(p.assignment[i] == i);
    }
    SUBCASE("two blobs on a 1x2 grid match the optimal split") {
        const ScenarioSet s = points_1d({0.0, 0.5, 1.0, 100.0, 100.5, 101.0});
        SomOptions opts;
        opts.epochs = 40;
        const SomGrid g = som_train(s, 1, 2, opts, 11);
        const Partition p = som_partition(g, s);
        REQUIRE(p.k() == 2);
        CHECK(p.assignment == std::vector<int>{0, 0, 0, 1, 1, 1});
    }
}

TEST_CASE("weights stay in the convex hull of init and data") {
    Rng rng(13);
    std::vector<std::vector<double>> profiles(10, std::vector<double>(3));
    for (auto& row : profiles)
        for (double& v : row) v = rng.uniform(-2, 6);
    const ScenarioSet s = make_scenario_set(profiles, {}, {"a", "b", "c"});
    SomOptions opts;
    opts.epochs = 30;
    opts.lr0 = 0.9;
    const SomGrid g = som_train(s, 2, 3, opts, 17);
    // Init is uniform over the data range, so the hull per dimension is
    // exactly the data range.
    for (int d = 0; d < 3; ++d) {
        double lo = 1e300, hi = -1e300;
        for (const auto& row : profiles) {
            lo = std::min(lo, row[d]);
            hi = std::max(hi, row[d]);
        }
        for (const auto& w : g.weights) {
            CHECK(w[d] >= lo - 1e-9);
            CHECK(w[d] <= hi + 1e-9);
        }
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    const ScenarioSet s = points_1d({1.0, 4.0, 2.0, 8.0, 5.0});
    SomOptions opts;
    opts.epochs = 10;
    const SomGrid a = som_train(s, 2, 2, opts, 99);
    const SomGrid b = som_train(s, 2, 2, opts, 99);
    for (int i = 0; i < a.nodes(); ++i) CHECK(a.weights[i] == b.weights[i]);
}

TEST_CASE("schedule validation") {
    const ScenarioSet s = points_1d({1.0});
    SomOptions opts;
    opts.epochs = 0;
    CHECK_THROWS_WITH_AS(som_train(s, 1, 1, opts, 1), doctest::Contains("BadSchedule"), Error);
    opts.epochs = 1;
    opts.lr0 = 1.5;
    CHECK_THROWS_WITH_AS(som_train(s, 1, 1, opts, 1), doctest::Contains("BadSchedule"), Error);
    CHECK_THROWS_WITH_AS(som_train(s, 0, 1, SomOptions{}, 1), doctest::Contains("BadGrid"),
                         Error);
}
