#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "scenagg/cluster.hpp"
#include "scenagg/rng.hpp"

using namespace scenagg;

namespace {

ScenarioSet points_1d(std::vector<double> xs, std::vector<double> weights = {}) {
    std::vector<std::vector<double>> profiles;
    for (double x : xs) profiles.push_back({x});
    return make_scenario_set(profiles, weights, {"c"});
}

ScenarioSet points_2d(const std::vector<std::pair<double, double>>& pts,
                      std::vector<double> weights = {}) {
    std::vector<std::vector<double>> profiles;
    for (auto [a, b] : pts) profiles.push_back({a, b});
    return make_scenario_set(profiles, weights, {"c0", "c1"});
}

// Test-side agglomeration oracle: recomputes every pairwise linkage from
// member lists each step, same tie rule (smallest label pair), and cuts at
// k by stopping early.
struct OracleCluster {
    int label;
    std::vector<int> members;
};

double oracle_linkage(const ScenarioSet& s, LinkageKind kind, const std::vector<int>& xs,
                      const std::vector<int>& ys) {
    auto dist = [&](int a, int b) {
        return oracle::euclid(s.scenario(a).features, s.scenario(b).features);
    };
    auto wmean = [&](const std::vector<int>& m) {
        std::vector<double> mean(s.scenario(0).dim(), 0.0);
        double w = 0.0;
        for (int i : m) {
            w += s.weight(i);
            for (std::size_t d = 0; d < mean.size(); ++d)
                mean[d] += s.weight(i) * s.scenario(i).features[d];
        }
        for (double& v : mean) v /= w;
        return mean;
    };
    auto wsum = [&](const std::vector<int>& m) {
        double w = 0.0;
        for (int i : m) w += s.weight(i);
        return w;
    };
    switch (kind) {
        case LinkageKind::single: {
            double best = 1e300;
            for (int a : xs)
                for (int b : ys) best = std::min(best, dist(a, b));
            return best;
        }
        case LinkageKind::complete: {
            double worst = 0.0;
            for (int a : xs)
                for (int b : ys) worst = std::max(worst, dist(a, b));
            return worst;
        }
        case LinkageKind::average: {
            double sum = 0.0;
            for (int a : xs)
                for (int b : ys) sum += s.weight(a) * s.weight(b) * dist(a, b);
            return sum / (wsum(xs) * wsum(ys));
        }
        case LinkageKind::minmax: {
            std::vector<int> all = xs;
            all.insert(all.end(), ys.begin(), ys.end());
            double best = 1e300;
            for (int c : all) {
                double worst = 0.0;
                for (int o : all) worst = std::max(worst, dist(c, o));
                best = std::min(best, worst);
            }
            return best;
        }
        case LinkageKind::ward: {
            const auto cx = wmean(xs), cy = wmean(ys);
            double d2 = 0.0;
            for (std::size_t i = 0; i < cx.size(); ++i) d2 += (cx[i] - cy[i]) * (cx[i] - cy[i]);
            return wsum(xs) * wsum(ys) / (wsum(xs) + wsum(ys)) * d2;
        }
        case LinkageKind::centroid_link: {
            const auto cx = wmean(xs), cy = wmean(ys);
            double d2 = 0.0;
            for (std::size_t i = 0; i < cx.size(); ++i) d2 += (cx[i] - cy[i]) * (cx[i] - cy[i]);
            return d2;
        }
    }
    return 0.0;
}

std::vector<int> oracle_hac_cut(const ScenarioSet& s, int k, LinkageKind kind) {
    const int n = static_cast<int>(s.size());
    std::vector<OracleCluster> active;
    for (int i = 0; i < n; ++i) active.push_back({i, {i}});
    int next = n;
    while (static_cast<int>(active.size()) > k) {
        double best = 1e300;
        int bi = -1, bj = -1;
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double v = oracle_linkage(s, kind, active[i].members, active[j].members);
                const int la = std::min(active[i].label, active[j].label);
                const int lb = std::max(active[i].label, active[j].label);
                const int ca = bi < 0 ? 0 : std::min(active[bi].label, active[bj].label);
                const int cb = bi < 0 ? 0 : std::max(active[bi].label, active[bj].label);
                const bool better = v < best - 1e-15;
                const bool tie =
                    bi >= 0 && std::abs(v - best) <= 1e-15 && (la < ca || (la == ca && lb < cb));
                if (better || tie) {
                    best = v;
                    bi = static_cast<int>(i);
                    bj = static_cast<int>(j);
                }
            }
        OracleCluster merged{next++, active[bi].members};
        merged.members.insert(merged.members.end(), active[bj].members.begin(),
                              active[bj].members.end());
        std::sort(merged.members.begin(), merged.members.end());
        active.erase(active.begin() + std::max(bi, bj));
        active.erase(active.begin() + std::min(bi, bj));
        active.push_back(merged);
    }
    // Compact by smallest member, matching the library convention.
    std::sort(active.begin(), active.end(),
              [](const OracleCluster& a, const OracleCluster& b) {
                  return a.members.front() < b.members.front();
              });
    std::vector<int> assign(n, 0);
    for (std::size_t c = 0; c < active.size(); ++c)
        for (int m : active[c].members) assign[m] = static_cast<int>(c);
    return assign;
}

}  // namespace

TEST_CASE("kmeans trivial cases") {
    const ScenarioSet s = points_1d({0.0, 1.0, 2.0, 10.0, 11.0});

    SUBCASE("k = N gives zero inertia") {
        const Partition p = kmeans(s, 5, 1);
        CHECK(weighted_inertia(s, p) == doctest::Approx(0.0));
        CHECK(p.k() == 5);
    }
    SUBCASE("k = 1 gives the weighted mean and total variance") {
        const Partition p = kmeans(s, 1, 1);
        CHECK(p.representatives[0].features[0] == doctest::Approx(4.8));
        double var = 0.0;
        for (double x : {0.0, 1.0, 2.0, 10.0, 11.0}) var += (x - 4.8) * (x - 4.8);
        CHECK(weighted_inertia(s, p) == doctest::Approx(var));
    }
}

TEST_CASE("kmeans finds the optimal 2-partition of separated blobs") {
    std::vector<std::pair<double, double>> pts;
    Rng rng(17);
    for (int i = 0; i < 5; ++i) pts.emplace_back(rng.uniform(0, 1), rng.uniform(0, 1));
    for (int i = 0; i < 5; ++i) pts.emplace_back(100 + rng.uniform(0, 1), rng.uniform(0, 1));
    const ScenarioSet s = points_2d(pts);
    const Partition p = kmeans(s, 2, 123);

    std::vector<std::vector<double>> raw;
    for (auto [a, b] : pts) raw.push_back({a, b});
    const std::vector<double> w(raw.size(), 1.0);
    double best = 1e300;
    std::vector<int> best_assign;
    oracle::enumerate_partitions(10, 2, [&](const std::vector<int>& assign) {
        const double v = oracle::wcss(raw, w, assign, 2);
        if (v < best) {
            best = v;
            best_assign = assign;
        }
    });
    CHECK(p.assignment == best_assign);
    CHECK(weighted_inertia(s, p) == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
    const ScenarioSet s = points_1d({0, 1, 2, 3, 10, 11, 12, 20, 21, 22});
    const Partition a = kmeans(s, 3, 77);
    const Partition b = kmeans(s, 3, 77);
    CHECK(a.assignment == b.assignment);
    for (int c = 0; c < a.k(); ++c)
        CHECK(a.representatives[c].features == b.representatives[c].features);
}

TEST_CASE("kmedoids") {
    SUBCASE("k = N zero cost") {
        const ScenarioSet s = points_1d({3.0, 1.0, 4.0});
        const Partition p = kmedoids(s, 3, DistanceSpec::euclidean(), 0);
        CHECK(p.k() == 3);
        for (int i = 0; i < 3; ++i)
            CHECK(p.representatives[p.assignment[i]].features == s.scenario(i).features);
    }
    SUBCASE("line with two groups") {
        const ScenarioSet s = points_1d({0.0, 1.0, 2.0, 10.0, 11.0});
        const Partition p = kmedoids(s, 2, DistanceSpec::euclidean(), 0);
        CHECK(p.assignment == std::vector<int>{0, 0, 0, 1, 1});
        CHECK(p.representatives[0].features[0] == doctest::Approx(1.0));
        CHECK(p.representatives[1].features[0] == doctest::Approx(10.0));  // tie -> lowest id
        CHECK(p.rep_kind == RepKind::medoid);

        // PAM local optimality: no single swap lowers the cost.
        auto cost_of = [&](std::vector<double> medoids) {
            double total = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                double best = 1e300;
                for (double m : medoids)
                    best = std::min(best, std::abs(s.scenario(i).features[0] - m));
                total += best;
            }
            return total;
        };
        const double cost = cost_of({1.0, 10.0});
        for (double h : {0.0, 2.0, 11.0}) {
            CHECK(cost_of({h, 10.0}) >= cost - 1e-12);
            CHECK(cost_of({1.0, h}) >= cost - 1e-12);
        }
    }
}

TEST_CASE("hac examples") {
    SUBCASE("ward first merge height of two singletons") {
        const ScenarioSet s = points_2d({{0.0, 0.0}, {3.0, 4.0}});
        const auto [p, dendro] = hac(s, 1, LinkageKind::ward, DistanceSpec::euclidean());
        REQUIRE(dendro.merges.size() == 1);
        CHECK(dendro.merges[0].height == doctest::Approx(0.5 * 25.0));
    }
    SUBCASE("single linkage chains") {
        const ScenarioSet s = points_1d({0.0, 1.0, 2.0, 4.0});
        const auto [p, dendro] = hac(s, 2, LinkageKind::single, DistanceSpec::euclidean());
        CHECK(p.assignment == std::vector<int>{0, 0, 0, 1});
    }
    SUBCASE("complete linkage splits the chain differently") {
        const ScenarioSet s = points_1d({0.0, 1.0, 2.0, 4.0});
        const auto [p, dendro] = hac(s, 2, LinkageKind::complete, DistanceSpec::euclidean());
        CHECK(p.assignment == std::vector<int>{0, 0, 1, 1});
    }
    SUBCASE("ward rejects non-euclidean distances") {
        const ScenarioSet s = points_1d({0.0, 1.0});
        CHECK_THROWS_WITH_AS(hac(s, 1, LinkageKind::ward, DistanceSpec::dtw()),
                             doctest::Contains("BadSpec"), Error);
    }
}

TEST_CASE("hac equals the brute-force agglomeration for N <= 8") {
    Rng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(4));
        std::vector<std::vector<double>> profiles(n, std::vector<double>(3));
        for (auto& row : profiles)
            for (double& v : row) v = rng.uniform(-2, 2);
        std::vector<double> weights(n);
        for (double& w : weights) w = trial % 2 == 0 ? 1.0 : 1.0 + rng.below(3);
        const ScenarioSet s = make_scenario_set(profiles, weights, {"a", "b", "c"});
        for (LinkageKind kind :
             {LinkageKind::ward, LinkageKind::minmax, LinkageKind::complete, LinkageKind::single,
              LinkageKind::average, LinkageKind::centroid_link}) {
            for (int k = 1; k <= n; k += 2) {
                const auto [p, dendro] = hac(s, k, kind, DistanceSpec::euclidean());
                CHECK(p.assignment == oracle_hac_cut(s, k, kind));
            }
        }
    }
}

TEST_CASE("monotone linkages produce nondecreasing merge heights") {
    Rng rng(31);
    std::vector<std::vector<double>> profiles(9, std::vector<double>(2));
    for (auto& row : profiles)
        for (double& v : row) v = rng.uniform(0, 10);
    const ScenarioSet s = make_scenario_set(profiles, {}, {"a", "b"});
    for (LinkageKind kind : {LinkageKind::single, LinkageKind::complete, LinkageKind::average,
                             LinkageKind::ward}) {
        const auto [p, dendro] = hac(s, 1, kind, DistanceSpec::euclidean());
        for (std::size_t i = 1; i < dendro.merges.size(); ++i)
            CHECK(dendro.merges[i].height >= dendro.merges[i - 1].height - 1e-12);
    }
}

TEST_CASE("cutting at k and k-1 differs by exactly one merge") {
    Rng rng(37);
    std::vector<std::vector<double>> profiles(8, std::vector<double>(2));
    for (auto& row : profiles)
        for (double& v : row) v = rng.uniform(0, 10);
    const ScenarioSet s = make_scenario_set(profiles, {}, {"a", "b"});
    for (int k = 2; k <= 8; ++k) {
        const auto [pk, d1] = hac(s, k, LinkageKind::average, DistanceSpec::euclidean());
        const auto [pk1, d2] = hac(s, k - 1, LinkageKind::average, DistanceSpec::euclidean());
        // Every cluster of the k-cut maps into exactly one cluster of the
        // (k-1)-cut, and exactly two k-clusters share a target.
        std::vector<int> target(k, -1);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const int a = pk.assignment[i], b = pk1.assignment[i];
            if (target[a] < 0) target[a] = b;
            CHECK(target[a] == b);
        }
        std::set<int> seen;
        int shared = 0;
        for (int c = 0; c < k; ++c)
            if (!seen.insert(target[c]).second) ++shared;
        CHECK(shared == 1);
    }
}

TEST_CASE("ctpc clusters are contiguous for all cuts") {
    Rng rng(41);
    std::vector<std::vector<double>> profiles(10, std::vector<double>(2));
    for (auto& row : profiles)
        for (double& v : row) v = rng.uniform(0, 10);
    const ScenarioSet s = make_scenario_set(profiles, {}, {"a", "b"});
    for (int k = 1; k <= 10; ++k) {
        const auto [p, dendro] = ctpc(s, k, LinkageKind::ward);
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (p.assignment[i] == p.assignment[i - 1]) continue;
            // once a cluster ends it never reappears
            for (std::size_t j = i + 1; j < s.size(); ++j)
                CHECK(p.assignment[j] != p.assignment[i - 1]);
        }
        CHECK(p.k() == k);
    }
}

TEST_CASE("ctpc ward split matches the best contiguous 2-split") {
    const ScenarioSet s = points_1d({0.0, 0.0, 10.0, 10.0, 0.0, 0.0});
    const auto [p, dendro] = ctpc(s, 2, LinkageKind::ward);

    std::vector<std::vector<double>> raw;
    for (int i = 0; i < 6; ++i) raw.push_back({s.scenario(i).features[0]});
    const std::vector<double> w(6, 1.0);
    double best = 1e300;
    for (int split = 1; split <= 5; ++split) {
        std::vector<int> assign(6, 1);
        for (int i = 0; i < split; ++i) assign[i] = 0;
        best = std::min(best, oracle::wcss(raw, w, assign, 2));
    }
    CHECK(oracle::wcss(raw, w, p.assignment, 2) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("representative kinds") {
    const ScenarioSet s = points_2d({{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}});
    Partition p = make_partition(s, {0, 0, 0});

    SUBCASE("centroid") {
        const Partition r = representative(p, s, RepresentativeKind::centroid);
        CHECK(r.representatives[0].features[0] == doctest::Approx(4.0 / 3.0));
        CHECK(r.representatives[0].features[1] == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("medoid picks (2,0)") {
        const Partition r = representative(p, s, RepresentativeKind::medoid);
        CHECK(r.representatives[0].features[0] == doctest::Approx(2.0));
        CHECK(r.representatives[0].features[1] == doctest::Approx(0.0));
        CHECK(r.rep_kind == RepKind::medoid);
    }
    SUBCASE("singleton clusters return the member for all kinds") {
        Partition q = make_partition(s, {0, 1, 2});
        for (RepresentativeKind kind :
             {RepresentativeKind::centroid, RepresentativeKind::medoid,
              RepresentativeKind::closest_to_centroid}) {
            const Partition r = representative(q, s, kind);
            for (int c = 0; c < 3; ++c)
                CHECK(r.representatives[c].features == s.scenario(c).features);
        }
    }
}

TEST_CASE("centroid representation preserves the weighted mean exactly") {
    Rng rng(53);
    std::vector<std::vector<double>> profiles(12, std::vector<double>(4));
    for (auto& row : profiles)
        for (double& v : row) v = rng.uniform(-5, 5);
    std::vector<double> weights(12);
    for (double& w : weights) w = 1.0 + rng.below(4);
    const ScenarioSet s = make_scenario_set(profiles, weights, {"a", "b", "c", "d"});

    const Partition p = kmeans(s, 4, 5);
    std::vector<double> rep_mean(4, 0.0), src_mean(4, 0.0);
    double wtot = 0.0;
    for (int c = 0; c < p.k(); ++c)
        for (std::size_t d = 0; d < 4; ++d)
            rep_mean[d] += p.cluster_weights[c] * p.representatives[c].features[d];
    for (std::size_t i = 0; i < s.size(); ++i) {
        wtot += s.weight(i);
        for (std::size_t d = 0; d < 4; ++d) src_mean[d] += s.weight(i) * s.scenario(i).features[d];
    }
    for (std::size_t d = 0; d < 4; ++d)
        CHECK(rep_mean[d] / wtot == doctest::Approx(src_mean[d] / wtot).epsilon(1e-12));
}
