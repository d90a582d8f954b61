#include <doctest.h>

#include <cmath>

#include "scenagg/cluster.hpp"
#include "scenagg/preprocess.hpp"

using namespace scenagg;

namespace {

ScenarioSet column(std::vector<double> values, const std::string& label = "load_a") {
    std::vector<std::vector<double>> profiles;
    for (double v : values) profiles.push_back({v});
    return make_scenario_set(profiles, {}, {label});
}

}  // namespace

TEST_CASE("zscore uses the population standard deviation") {
    const auto r = normalize(column({1.0, 2.0, 3.0}), {NormMethod::zscore, true});
    const double expected = 1.0 / std::sqrt(2.0 / 3.0);
    CHECK(r.set.scenario(0).features[0] == doctest::Approx(-expected).epsilon(1e-4));
    CHECK(r.set.scenario(1).features[0] == doctest::Approx(0.0));
    CHECK(r.set.scenario(2).features[0] == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("minmax maps the range onto [0,1]") {
    const auto r = normalize(column({2.0, 4.0, 6.0}), {NormMethod::minmax, true});
    CHECK(r.set.scenario(0).features[0] == doctest::Approx(0.0));
    CHECK(r.set.scenario(1).features[0] == doctest::Approx(0.5));
    CHECK(r.set.scenario(2).features[0] == doctest::Approx(1.0));
}

TEST_CASE("zscore is idempotent on standardized data") {
    const auto first = normalize(column({1.0, 5.0, 9.0, 2.0}), {NormMethod::zscore, true});
    const auto second = normalize(first.set, {NormMethod::zscore, true});
    for (std::size_t i = 0; i < first.set.size(); ++i)
        CHECK(second.set.scenario(i).features[0] ==
              doctest::Approx(first.set.scenario(i).features[0]).epsilon(1e-9));
}

TEST_CASE("inverse transform recovers the input") {
    const ScenarioSet raw = make_scenario_set(
        {{10.0, 20.0, -3.0, 8.0}, {12.0, 18.0, -1.0, 9.0}, {9.0, 25.0, -2.0, 7.0}}, {},
        {"load_a", "wind_b"});
    for (NormMethod m : {NormMethod::zscore, NormMethod::minmax, NormMethod::maxabs}) {
        const auto r = normalize(raw, {m, true});
        const ScenarioSet back = r.record.inverse(r.set);
        for (std::size_t i = 0; i < raw.size(); ++i)
            for (std::size_t d = 0; d < raw.scenario(i).dim(); ++d) {
                const double orig = raw.scenario(i).features[d];
                CHECK(back.scenario(i).features[d] ==
                      doctest::Approx(orig).epsilon(1e-9));
            }
    }
}

TEST_CASE("degenerate channels are rejected") {
    CHECK_THROWS_WITH_AS(normalize(column({5.0, 5.0, 5.0}), {NormMethod::zscore, true}),
                         doctest::Contains("DegenerateChannel"), Error);
    CHECK_THROWS_WITH_AS(normalize(column({5.0, 5.0, 5.0}), {NormMethod::minmax, true}),
                         doctest::Contains("DegenerateChannel"), Error);
    CHECK_THROWS_WITH_AS(normalize(column({0.0, 0.0}), {NormMethod::maxabs, true}),
                         doctest::Contains("DegenerateChannel"), Error);
}

TEST_CASE("normalization makes clustering unit-free") {
    // Scaling a channel by 1000 must not change zscore-based assignments.
    std::vector<std::vector<double>> profiles = {
        {1.0, 2.0}, {1.2, 2.1}, {5.0, 9.0}, {5.1, 8.7}, {1.1, 2.2}, {4.9, 9.2}};
    const ScenarioSet a = make_scenario_set(profiles, {}, {"c0", "c1"});
    for (auto& row : profiles) row[1] *= 1000.0;
    const ScenarioSet b = make_scenario_set(profiles, {}, {"c0", "c1"});

    const auto na = normalize(a, {NormMethod::zscore, true});
    const auto nb = normalize(b, {NormMethod::zscore, true});
    const Partition pa = kmeans(na.set, 2, 42);
    const Partition pb = kmeans(nb.set, 2, 42);
    CHECK(pa.assignment == pb.assignment);
}

TEST_CASE("rescale_representatives") {
    const ScenarioSet source =
        make_scenario_set({{1.0, 1.0}, {1.0, 1.0}, {3.0, 3.0}, {5.0, 5.0}}, {}, {"load_a"});

    SUBCASE("centroid partitions are rejected") {
        Partition p = make_partition(source, {0, 0, 1, 1});
        CHECK_THROWS_WITH_AS(rescale_representatives(p, source), doctest::Contains("BadRepKind"),
                             Error);
    }

    SUBCASE("medoids scale by the mean-matching ratio") {
        // Medoids [1,1] w=2 and [3,3] w=2; source mean 2.5; factor 1.25.
        Partition p = make_partition(source, {0, 0, 1, 1});
        p = representative(p, source, RepresentativeKind::medoid);
        REQUIRE(p.representatives[0].features[0] == doctest::Approx(1.0));
        REQUIRE(p.representatives[1].features[0] == doctest::Approx(3.0));
        const Partition scaled = rescale_representatives(p, source);
        CHECK(scaled.representatives[0].features[0] == doctest::Approx(1.25));
        CHECK(scaled.representatives[1].features[0] == doctest::Approx(3.75));
    }

    SUBCASE("singleton partition needs no scaling") {
        Partition p = make_partition(source, {0, 1, 2, 3});
        p = representative(p, source, RepresentativeKind::medoid);
        const Partition scaled = rescale_representatives(p, source);
        for (int c = 0; c < 4; ++c)
            CHECK(scaled.representatives[c].features[0] ==
                  doctest::Approx(p.representatives[c].features[0]).epsilon(1e-12));
    }
}

TEST_CASE("rescaling conserves total weighted energy") {
    const ScenarioSet source = make_scenario_set(
        {{2.0, 4.0}, {6.0, 2.0}, {1.0, 9.0}, {4.0, 4.0}, {8.0, 1.0}}, {1, 2, 1, 3, 1},
        {"load_a", "load_b"});
    Partition p = make_partition(source, {0, 0, 1, 1, 1});
    p = representative(p, source, RepresentativeKind::medoid);
    const Partition scaled = rescale_representatives(p, source);

    for (int c = 0; c < source.channels(); ++c) {
        double source_energy = 0.0;
        for (std::size_t i = 0; i < source.size(); ++i)
            for (int t = 0; t < source.hours(); ++t)
                source_energy += source.weight(i) * source.scenario(i).value(t, c);
        double rep_energy = 0.0;
        for (int k = 0; k < scaled.k(); ++k)
            for (int t = 0; t < source.hours(); ++t)
                rep_energy += scaled.cluster_weights[k] * scaled.representatives[k].value(t, c);
        CHECK(rep_energy == doctest::Approx(source_energy).epsilon(1e-9));
    }
}
