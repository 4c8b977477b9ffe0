#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "hardy/functionals.hpp"
#include "hardy/parallel.hpp"
#include "hardy/rng.hpp"
#include "hardy/testfns.hpp"

using namespace hardy;

namespace {

LatticeFunction indicator(const Domain& dom, const LatticePoint& x) {
    LatticeFunction u(dom);
    u.set(x, 1.0);
    return u;
}

LatticeFunction random_function(const Domain& dom, std::uint64_t seed) {
    LatticeFunction u(dom);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
    return u;
}

// Slow direct oracle for the local energies: loops every ordered pair of
// lattice points in the box grown by two, no shared code with local_energy.
double local_energy_oracle(const LatticeFunction& u, double p, EnergyVariant variant) {
    const Domain big = u.domain().expanded(2);
    double total = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        const LatticePoint j = big.point_at(i);
        for (std::size_t l = 0; l < big.size(); ++l) {
            const LatticePoint k = big.point_at(l);
            if (!are_neighbors(j.span(), k.span())) continue;
            const Coord rj = norm_inf(j), rk = norm_inf(k);
            double w = 1.0;
            switch (variant.kind) {
                case EnergyKind::LocalExcludeOrigin:
                    if (rj == 0 || rk == 0) continue;
                    break;
                case EnergyKind::LocalIncludeOrigin: break;
                case EnergyKind::LocalWeighted:
                    if (rj == 0) continue;
                    w = std::pow(static_cast<double>(rj), -variant.eps);
                    break;
                case EnergyKind::LocalWeightedMax:
                    w = std::pow(static_cast<double>(std::max(rj, rk)), -variant.eps);
                    break;
                default: continue;
            }
            total += w * std::pow(std::abs(u.at_point(j.span()) - u.at_point(k.span())), p);
        }
    }
    return total;
}

// Direct all-pairs oracle over the enlarged box.
double fractional_energy_oracle(const LatticeFunction& u, double s, double p,
                                EnergyVariant variant, Coord margin) {
    const Domain big = u.domain().expanded(margin);
    const double expo = s * p + big.dim() + variant.eps;
    double total = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        const LatticePoint j = big.point_at(i);
        if (variant.kind == EnergyKind::FracExcludeOrigin && norm_inf(j) == 0) continue;
        for (std::size_t l = 0; l < big.size(); ++l) {
            if (i == l) continue;
            const LatticePoint m = big.point_at(l);
            if (variant.kind == EnergyKind::FracExcludeOrigin && norm_inf(m) == 0) continue;
            Coord dist = 0;
            for (int q = 0; q < big.dim(); ++q)
                dist = std::max(dist, std::abs(j[q] - m[q]));
            const double diff = u.at_point(j.span()) - u.at_point(m.span());
            if (diff != 0.0)
                total += std::pow(std::abs(diff), p) * std::pow(static_cast<double>(dist), -expo);
        }
    }
    return total;
}

// Triple-loop oracle for the annuli pairing, materializing every annulus.
double annuli_energy_oracle(const LatticeFunction& u, double s, double p, int K) {
    const int d = u.domain().dim();
    const double sp = s * p;
    double total = 0.0;
    for (int n = 1; (Coord{1} << (n - 1)) <= u.domain().radius(); ++n) {
        const double w = std::exp2(-static_cast<double>(n + K) * (d + sp));
        for (const auto& j : annulus_points(n, d)) {
            for (const auto& m : annulus_points(n + K, d)) {
                const double diff = u.at_point(j.span()) - u.at_point(m.span());
                if (diff != 0.0) total += std::pow(std::abs(diff), p) * w;
            }
        }
    }
    return total;
}

} // namespace

TEST_CASE("pow_abs") {
    CHECK(pow_abs(0.0, 0.5) == 0.0);
    CHECK(pow_abs(-2.0, 2.0) == doctest::Approx(4.0));
    CHECK(pow_abs(4.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("weighted_lhs examples") {
    const Domain d2(LatticeKind::NonNegative, 2, 6);
    CHECK(weighted_lhs(indicator(d2, {1, 0}), 2.0, 3.7) == doctest::Approx(1.0));

    // indicator of the max-norm ball of radius 4 in d = 2, t = 1:
    // sum over shells k = 1..4 of (2k+1)/k = 121/12
    const LatticeFunction u4 = materialize({TestFamilyKind::IndicatorUn, 4}, d2);
    for (double p : {0.5, 1.0, 2.0})
        CHECK(weighted_lhs(u4, p, 1.0) == doctest::Approx(121.0 / 12.0).epsilon(1e-12));

    CHECK(weighted_lhs(LatticeFunction(d2), 2.0, 1.0) == 0.0);
}

TEST_CASE("weighted_lhs_range splits the full sum") {
    const Domain dom(LatticeKind::NonNegative, 2, 9);
    const LatticeFunction u = random_function(dom, 77);
    const double full = weighted_lhs(u, 1.5, 0.7);
    const double low = weighted_lhs_range(u, 1.5, 0.7, 1, 4);
    const double high = weighted_lhs_range(u, 1.5, 0.7, 4);
    CHECK(full == doctest::Approx(low + high).epsilon(1e-12));
}

TEST_CASE("local energy examples") {
    const Domain d1(LatticeKind::NonNegative, 1, 3);
    const LatticeFunction u = indicator(d1, {1});
    CHECK(local_energy(u, 2.0, EnergyVariant::local_include_origin()) == doctest::Approx(4.0));
    CHECK(local_energy(u, 2.0, EnergyVariant::local_exclude_origin()) == doctest::Approx(2.0));

    // constant 1 on [0,2] in d = 1: only the ordered boundary pairs (2,3),(3,2)
    const Domain d13(LatticeKind::NonNegative, 1, 2);
    LatticeFunction ones(d13);
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
    CHECK(local_energy(ones, 2.0, EnergyVariant::local_include_origin()) == doctest::Approx(2.0));
}

TEST_CASE("local energy against the pair-loop oracle") {
    for (int d : {1, 2}) {
        const Domain dom(LatticeKind::NonNegative, d, 4);
        const Domain fdom(LatticeKind::Full, d, 3);
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            for (double p : {0.5, 1.0, 2.0, 3.0}) {
                for (EnergyVariant v :
                     {EnergyVariant::local_exclude_origin(), EnergyVariant::local_include_origin(),
                      EnergyVariant::local_weighted(0.5), EnergyVariant::local_weighted_max(0.5)}) {
                    const LatticeFunction u = random_function(dom, seed);
                    CHECK(local_energy(u, p, v) ==
                          doctest::Approx(local_energy_oracle(u, p, v)).epsilon(1e-11));
                    const LatticeFunction w = random_function(fdom, seed + 10);
                    CHECK(local_energy(w, p, v) ==
                          doctest::Approx(local_energy_oracle(w, p, v)).epsilon(1e-11));
                }
            }
        }
    }
}

TEST_CASE("fractional energy analytic series") {
    // indicator of {1} in d = 1 with kernel exponent sp + d = 2:
    // full-range limit 2 (1 + pi^2/6), origin-excluded limit 2 pi^2/6
    const Domain dom(LatticeKind::NonNegative, 1, 1);
    const LatticeFunction u = indicator(dom, {1});
    const double pi2_6 = M_PI * M_PI / 6.0;
    const double full = fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), 10000);
    CHECK(full == doctest::Approx(2.0 * (1.0 + pi2_6)).epsilon(2e-4 / 5.0));
    CHECK(std::abs(full - 2.0 * (1.0 + pi2_6)) < 2e-4);
    const double excl = fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_exclude_origin(), 10000);
    CHECK(std::abs(excl - 2.0 * pi2_6) < 2e-4);

    CHECK(fractional_energy(LatticeFunction(dom), 0.5, 2.0, EnergyVariant::frac_full(), 5) == 0.0);
}

TEST_CASE("fractional energy against the all-pairs oracle") {
    for (int d : {1, 2}) {
        const Domain dom(LatticeKind::NonNegative, d, 3);
        const Domain fdom(LatticeKind::Full, d, 2);
        for (double p : {1.0, 2.0, 0.7}) {
            for (EnergyVariant v : {EnergyVariant::frac_full(), EnergyVariant::frac_exclude_origin(),
                                    EnergyVariant::frac_weighted(0.5)}) {
                const LatticeFunction u = random_function(dom, 5);
                CHECK(fractional_energy(u, 0.6, p, v, 3) ==
                      doctest::Approx(fractional_energy_oracle(u, 0.6, p, v, 3)).epsilon(1e-11));
                const LatticeFunction w = random_function(fdom, 6);
                CHECK(fractional_energy(w, 0.6, p, v, 3) ==
                      doctest::Approx(fractional_energy_oracle(w, 0.6, p, v, 3)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("annuli energy example and oracle") {
    const Domain dom(LatticeKind::NonNegative, 1, 1);
    const LatticeFunction u = indicator(dom, {1});
    // pairs j = 1 in A_1 against A_2 = {2,3}: 2 / 2^{(1+1)(1+1)} = 0.125
    CHECK(annuli_energy(u, 0.5, 2.0, 1) == doctest::Approx(0.125).epsilon(1e-13));

    CHECK(annuli_energy(LatticeFunction(dom), 0.5, 2.0, 1) == 0.0);

    for (int d : {1, 2}) {
        const Domain rdom(LatticeKind::NonNegative, d, 5);
        for (int K : {1, 2}) {
            for (double p : {1.0, 2.0, 0.5}) {
                const LatticeFunction v = random_function(rdom, 11);
                CHECK(annuli_energy(v, 0.4, p, K) ==
                      doctest::Approx(annuli_energy_oracle(v, 0.4, p, K)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("constant function kills fully interior annuli") {
    // box covering A_1..A_3 entirely in d = 2 with K = 1: pairs inside the
    // box cancel, only pairs reaching outside the box survive
    const Domain dom(LatticeKind::NonNegative, 2, 15);
    LatticeFunction ones(dom);
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
    const double direct = annuli_energy_oracle(ones, 0.5, 2.0, 1);
    CHECK(annuli_energy(ones, 0.5, 2.0, 1) == doctest::Approx(direct).epsilon(1e-11));
}

TEST_CASE("homogeneity") {
    const Domain dom(LatticeKind::NonNegative, 2, 5);
    const LatticeFunction u = random_function(dom, 3);
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
        const double lam = -1.7;
        const double scale = std::pow(std::abs(lam), p);
        const LatticeFunction v = u.scaled(lam);
        CHECK(weighted_lhs(v, p, 1.0) ==
              doctest::Approx(scale * weighted_lhs(u, p, 1.0)).epsilon(1e-12));
        CHECK(local_energy(v, p, EnergyVariant::local_include_origin()) ==
              doctest::Approx(scale * local_energy(u, p, EnergyVariant::local_include_origin()))
                  .epsilon(1e-12));
        CHECK(fractional_energy(v, 0.5, p, EnergyVariant::frac_full(), 2) ==
              doctest::Approx(scale * fractional_energy(u, 0.5, p, EnergyVariant::frac_full(), 2))
                  .epsilon(1e-12));
        CHECK(annuli_energy(v, 0.5, p, 1) ==
              doctest::Approx(scale * annuli_energy(u, 0.5, p, 1)).epsilon(1e-12));
    }
}

TEST_CASE("monotonicity in the index sets") {
    const Domain dom(LatticeKind::NonNegative, 2, 4);
    const LatticeFunction u = random_function(dom, 9);
    CHECK(local_energy(u, 2.0, EnergyVariant::local_exclude_origin()) <=
          local_energy(u, 2.0, EnergyVariant::local_include_origin()));
    double prev = 0.0;
    for (Coord margin : {0, 1, 2, 4, 8}) {
        const double val = fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), margin);
        CHECK(val >= prev);
        prev = val;
    }
    // weight monotonicity: larger t means smaller left side
    CHECK(weighted_lhs(u, 2.0, 0.5) >= weighted_lhs(u, 2.0, 1.5));
}

TEST_CASE("annuli dominated by the fractional energy") {
    for (int d : {1, 2}) {
        const Domain dom(LatticeKind::NonNegative, d, 5);
        const LatticeFunction u = random_function(dom, 21);
        for (int K : {1, 2}) {
            // margin covering A_{n_sup + K} entirely
            int n_sup = 1;
            while ((Coord{1} << n_sup) <= dom.radius()) ++n_sup;
            const Coord margin = (Coord{1} << (n_sup + K)) - 1 - dom.radius();
            const double frac =
                fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), margin);
            CHECK(annuli_energy(u, 0.5, 2.0, K) <= frac * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("permutation equivariance") {
    const Domain dom(LatticeKind::NonNegative, 3, 3);
    const LatticeFunction u = random_function(dom, 31);
    LatticeFunction v(dom);
    std::vector<Coord> x(3), y(3);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        dom.decode(i, x);
        y = {x[2], x[0], x[1]};
        v[dom.index_of(y)] = u[i];
    }
    CHECK(weighted_lhs(v, 2.0, 1.0) == doctest::Approx(weighted_lhs(u, 2.0, 1.0)).epsilon(1e-12));
    CHECK(local_energy(v, 2.0, EnergyVariant::local_include_origin()) ==
          doctest::Approx(local_energy(u, 2.0, EnergyVariant::local_include_origin()))
              .epsilon(1e-12));
    CHECK(fractional_energy(v, 0.5, 2.0, EnergyVariant::frac_full(), 2) ==
          doctest::Approx(fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), 2))
              .epsilon(1e-12));
}

TEST_CASE("thread count does not change values") {
    const Domain dom(LatticeKind::NonNegative, 2, 12);
    const LatticeFunction u = random_function(dom, 101);
    set_max_threads(1);
    const double w1 = weighted_lhs(u, 2.0, 1.0);
    const double l1 = local_energy(u, 2.0, EnergyVariant::local_include_origin());
    const double f1 = fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), 4);
    const double a1 = annuli_energy(u, 0.5, 2.0, 2);
    set_max_threads(7);
    CHECK(weighted_lhs(u, 2.0, 1.0) == w1);
    CHECK(local_energy(u, 2.0, EnergyVariant::local_include_origin()) == l1);
    CHECK(fractional_energy(u, 0.5, 2.0, EnergyVariant::frac_full(), 4) == f1);
    CHECK(annuli_energy(u, 0.5, 2.0, 2) == a1);
    set_max_threads(0);
}

TEST_CASE("validation and numeric errors") {
    const Domain dom(LatticeKind::NonNegative, 1, 3);
    LatticeFunction u(dom);
    CHECK_THROWS_AS(local_energy(u, 2.0, EnergyVariant::frac_full()), ValidationError);
    CHECK_THROWS_AS(local_energy(u, 2.0, {EnergyKind::LocalIncludeOrigin, 0.5}), ValidationError);
    CHECK_THROWS_AS(local_energy(u, 2.0, EnergyVariant::local_weighted(0.0)), ValidationError);
    CHECK_THROWS_AS(fractional_energy(u, 0.5, 2.0, EnergyVariant::local_include_origin(), 1),
                    ValidationError);
    CHECK_THROWS_AS(weighted_lhs(u, -1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(annuli_energy(u, 0.5, 2.0, 0), ValidationError);
    u[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(weighted_lhs(u, 2.0, 1.0), NumericError);
}
