#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numeric>

#include "hardy/paths.hpp"
#include "hardy/rng.hpp"

using namespace hardy;

namespace {

LatticePoint random_point(SplitMix64& rng, int d, Coord lo, Coord hi) {
    LatticePoint x(std::vector<Coord>(static_cast<std::size_t>(d), 0));
    for (int q = 0; q < d; ++q)
        x[q] = lo + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    return x;
}

// Independent census: materialize every path and count edges in a map.
std::map<std::pair<LatticePoint, LatticePoint>, long long> census_by_paths(int n, int k, int d,
                                                                           int beta) {
    std::map<std::pair<LatticePoint, LatticePoint>, long long> counts;
    for (const auto& j : annulus_points(n, d)) {
        for (const auto& m : annulus_points(n + k, d)) {
            const LatticePath path = build_shifted_path(j, m, beta);
            for (std::size_t t = 0; t + 1 < path.points.size(); ++t)
                ++counts[{path.points[t], path.points[t + 1]}];
        }
    }
    return counts;
}

} // namespace

TEST_CASE("axis-ordered path example") {
    const LatticePath path = build_path({1, 4, 7}, {2, 4, 5});
    REQUIRE(path.points.size() == 4);
    CHECK(path.points[0] == LatticePoint{1, 4, 7});
    CHECK(path.points[1] == LatticePoint{2, 4, 7});
    CHECK(path.points[2] == LatticePoint{2, 4, 6});
    CHECK(path.points[3] == LatticePoint{2, 4, 5});
}

TEST_CASE("degenerate and simple paths") {
    const LatticePath self = build_path({3, 1}, {3, 1});
    CHECK(self.points.size() == 1);
    CHECK(self.length() == 0);

    const LatticePath p = build_path({0, 0}, {2, 1});
    REQUIRE(p.points.size() == 4);
    CHECK(p.points[1] == LatticePoint{1, 0});
    CHECK(p.points[2] == LatticePoint{2, 0});
    CHECK(p.points[3] == LatticePoint{2, 1});
    CHECK(p.length() == 3); // equals the 1-norm of the difference
}

TEST_CASE("shifted paths") {
    // beta = 0 is the plain path
    const LatticePath p0 = build_shifted_path({1, 4, 7}, {2, 4, 5}, 0);
    CHECK(p0.points == build_path({1, 4, 7}, {2, 4, 5}).points);

    // beta = 1 moves along the second axis first
    const LatticePath p1 = build_shifted_path({0, 0}, {1, 2}, 1);
    REQUIRE(p1.points.size() == 4);
    CHECK(p1.points[1] == LatticePoint{0, 1});
    CHECK(p1.points[2] == LatticePoint{0, 2});
    CHECK(p1.points[3] == LatticePoint{1, 2});

    CHECK_THROWS_AS(build_shifted_path({0, 0}, {1, 1}, 2), ValidationError);
    CHECK_THROWS_AS(build_shifted_path({0, 0}, {1, 1}, -1), ValidationError);
}

TEST_CASE("random paths validate and have 1-norm length") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 10000; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(4));
        const LatticePoint j = random_point(rng, d, -20, 20);
        const LatticePoint m = random_point(rng, d, -20, 20);
        const LatticePath path = build_path(j, m);
        CHECK(validate_path(path));
        Coord l1 = 0;
        for (int q = 0; q < d; ++q) l1 += std::abs(j[q] - m[q]);
        CHECK(static_cast<Coord>(path.length()) == l1);
        CHECK(path.front() == j);
        CHECK(path.back() == m);

        const int beta = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        const LatticePath shifted = build_shifted_path(j, m, beta);
        CHECK(validate_path(shifted, beta));
        CHECK(static_cast<Coord>(shifted.length()) == l1);
    }
}

TEST_CASE("validator rejects broken paths") {
    LatticePath bad;
    bad.points = {LatticePoint{0, 0}, LatticePoint{1, 1}}; // diagonal step
    CHECK(!validate_path(bad));

    LatticePath backtrack;
    backtrack.points = {LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 0}};
    CHECK(!validate_path(backtrack)); // axis used in both directions

    LatticePath out_of_order;
    out_of_order.points = {LatticePoint{0, 0}, LatticePoint{0, 1}, LatticePoint{1, 1}};
    CHECK(!validate_path(out_of_order));  // axis 2 before axis 1
    CHECK(validate_path(out_of_order, 1)); // fine under the rotated order
}

TEST_CASE("shift consistency") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(3));
        const LatticePoint j = random_point(rng, d, 0, 12);
        const LatticePoint m = random_point(rng, d, 0, 12);
        for (int beta = 0; beta < d; ++beta) {
            const LatticePath direct = build_shifted_path(j, m, beta);
            // conjugating by the rotation must reproduce the plain path
            auto rot = [&](const LatticePoint& x) {
                LatticePoint y = x;
                for (int q = 0; q < d; ++q) y[q] = x[(q + beta) % d];
                return y;
            };
            const LatticePath plain = build_path(rot(j), rot(m));
            REQUIRE(direct.points.size() == plain.points.size());
            for (std::size_t t = 0; t < direct.points.size(); ++t)
                CHECK(rot(direct.points[t]) == plain.points[t]);
        }
    }
}

TEST_CASE("census example and map oracle") {
    // d = 1, n = 1, k = 1: A_1 = {1}, A_2 = {2,3}; edge (1,2) used twice
    const CensusResult res = edge_usage_census(1, 1, 1, 0);
    CHECK(res.pair_count == 2);
    CHECK(res.max_count == 2);
    CHECK(res.bound == doctest::Approx(8.0)); // 2^{(d+1)n} 2^{kd} = 4 * 2
    bool found = false;
    for (const auto& e : res.entries) {
        if (e.from == LatticePoint{1} && e.to == LatticePoint{2}) {
            CHECK(e.count == 2);
            found = true;
        }
    }
    CHECK(found);

    for (int d : {1, 2}) {
        for (int n : {1, 2}) {
            for (int k : {1, 2}) {
                for (int beta = 0; beta < d; ++beta) {
                    const CensusResult fast = edge_usage_census(n, k, d, beta);
                    const auto oracle = census_by_paths(n, k, d, beta);
                    long long max_oracle = 0;
                    for (const auto& [edge, count] : oracle) max_oracle = std::max(max_oracle, count);
                    CHECK(fast.max_count == max_oracle);
                    CHECK(fast.entries.size() == oracle.size());
                    for (const auto& e : fast.entries) {
                        auto it = oracle.find({e.from, e.to});
                        REQUIRE(it != oracle.end());
                        CHECK(it->second == e.count);
                    }
                    CHECK(static_cast<double>(fast.max_count) <= fast.bound);
                }
            }
        }
    }
}

TEST_CASE("paths can dip below the inner annulus near the origin") {
    // j = (1,0) in A_1, m = (0,2) in A_2: the axis-ordered path passes
    // through the origin, so the strict annuli-union containment fails;
    // coordinates still stay inside [0, 2^{n+k})^d.
    const LatticePath path = build_path({1, 0}, {0, 2});
    REQUIRE(path.points.size() == 4);
    CHECK(path.points[1] == LatticePoint{0, 0});
    for (const auto& x : path.points)
        for (int q = 0; q < 2; ++q) {
            CHECK(x[q] >= 0);
            CHECK(x[q] < 4);
        }
    const CensusResult res = edge_usage_census(1, 1, 2, 0);
    CHECK(res.strayed_below > 0);
    CHECK(static_cast<double>(res.max_count) <= res.bound);
    // d = 1 paths never stray: annuli are intervals
    CHECK(edge_usage_census(2, 2, 1, 0).strayed_below == 0);
}

TEST_CASE("census over all shifts") {
    const CensusResult all = edge_usage_census(1, 1, 2, kCensusAllShifts);
    CHECK(all.per_beta_max.size() == 2);
    // summed counts respect the doubled bound
    CHECK(static_cast<double>(all.max_count) <= all.bound);
    // totals equal the sum of the per-shift censuses
    long long total_entries = 0;
    for (int beta = 0; beta < 2; ++beta) {
        const CensusResult one = edge_usage_census(1, 1, 2, beta);
        CHECK(static_cast<double>(one.max_count) <= one.bound);
        CHECK(all.per_beta_max[static_cast<std::size_t>(beta)] == one.max_count);
        total_entries += std::accumulate(one.entries.begin(), one.entries.end(), 0LL,
                                         [](long long acc, const CensusEntry& e) {
                                             return acc + e.count;
                                         });
    }
    const long long all_total = std::accumulate(all.entries.begin(), all.entries.end(), 0LL,
                                                [](long long acc, const CensusEntry& e) {
                                                    return acc + e.count;
                                                });
    CHECK(all_total == total_entries);
}

TEST_CASE("census guards") {
    CHECK_THROWS_AS(edge_usage_census(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(edge_usage_census(1, 1, 2, 5), ValidationError);
    CHECK_THROWS_AS(edge_usage_census(4, 3, 4), CapacityError);
}
