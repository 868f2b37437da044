#include "univhol/cubes.hpp"
#include "univhol/density.hpp"

#include <doctest.h>

#include <random>

using namespace uh;

TEST_CASE("two-pair family") {
    DensityFamily f = build_finite_family({{1, 2}, {2, 3}});
    CHECK(f.S == 24);
    CHECK(f.prefix(0, 60) == std::vector<std::uint64_t>{12, 36, 60});
    CHECK(f.prefix(1, 72) == std::vector<std::uint64_t>{24, 48, 72});
    CHECK(f.first(0) == 12);
    CHECK(f.element(1, 2) == 72);
    CHECK(f.contains(0, 36));
    CHECK_FALSE(f.contains(1, 36));
    CHECK(24 - 12 >= 2 + 3);
    CHECK(verify_family(f, 100000, geometric_checkpoints(100, 100000)).ok);
}

TEST_CASE("single pair") {
    DensityFamily f = build_finite_family({{1, 1}});
    CHECK(f.S == 4);
    CHECK(f.prefix(0, 12) == std::vector<std::uint64_t>{4, 8, 12});
    auto trace = lower_density_estimate([&](std::uint64_t n) { return f.contains(0, n); }, 4000, {4, 400, 4000});
    for (const auto& [N, r] : trace) CHECK(r == Rat(1, 4));
}

TEST_CASE("invalid requests") {
    CHECK_THROWS_AS(build_finite_family({}), std::invalid_argument);
    CHECK_THROWS_AS(build_finite_family({{1, 0}}), std::invalid_argument);
}

TEST_CASE("random families satisfy every invariant on a prefix") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_int_distribution<std::uint64_t> nu(1, 40);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::pair<long, std::uint64_t>> pairs;
        int q = count(rng);
        for (int i = 0; i < q; ++i) pairs.push_back({i + 1, nu(rng)});
        DensityFamily f = build_finite_family(pairs);
        FamilyCheck c = verify_family(f, 100000, geometric_checkpoints(10, 100000));
        CHECK(c.ok);
        CHECK(c.min_ratio_margin >= 0);

        // brute-force cross-check of the gap condition on a shorter prefix
        std::vector<std::pair<std::uint64_t, std::size_t>> all;
        for (std::size_t a = 0; a < f.size(); ++a)
            for (auto n : f.prefix(a, 20000)) all.push_back({n, a});
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            auto [n, a] = all[i];
            auto [m, b] = all[i + 1];
            CHECK(n >= f.pairs[a].second);
            CHECK(m - n >= f.pairs[a].second + f.pairs[b].second);
        }
    }
}

TEST_CASE("density traces") {
    auto all = lower_density_estimate([](std::uint64_t) { return true; }, 1000, {1, 10, 1000});
    for (const auto& [N, r] : all) CHECK(r == 1);
    auto even = lower_density_estimate([](std::uint64_t n) { return n % 2 == 0; }, 100001, {1, 3, 1001, 100001});
    CHECK(even[0].second == 0);
    CHECK(even[1].second == Rat(1, 3));
    CHECK(even.back().second == ratio(50000, 100001));
    CHECK(min_ratio(even) == 0);

    DensityFamily f = build_finite_family({{1, 5}, {2, 7}, {3, 2}});
    for (std::size_t q = 0; q < f.size(); ++q) {
        auto tr = lower_density_estimate([&](std::uint64_t n) { return f.contains(q, n); }, 50000,
                                         geometric_checkpoints(50, 50000));
        for (const auto& [N, r] : tr) CHECK(r >= Rat(1, f.S) - ratio(2, N));
    }
}

TEST_CASE("delta-dense residue classes") {
    ResidueClasses rc = residue_classes_delta_dense({Rat(1), Rat(0)}, Rat(1, 2), Rat(1));
    CHECK(rc.k == 3);
    CHECK(rc.fractions == std::vector<Rat>{Rat(0), Rat(1, 3), Rat(2, 3)});
    CHECK(verify_delta_dense(rc));

    ResidueClasses coarse = residue_classes_delta_dense({Rat(1), Rat(0)}, Rat(2), Rat(1));
    CHECK(coarse.k == 2);
    CHECK(verify_delta_dense(coarse));

    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> num(-20, 20);
    for (int t = 0; t < 20; ++t) {
        std::vector<Rat> b{ratio(num(rng), 4), ratio(num(rng), 3), ratio(num(rng), 5), Rat(1, 7)};
        Rat delta = ratio(1 + t % 5, 6);
        ResidueClasses r = residue_classes_delta_dense(b, delta, Rat(1));
        CHECK(verify_delta_dense(r));
        std::vector<Hypercube> cubes;
        for (const auto& c : r.representatives) cubes.push_back({c, Rat(1) + delta, true});
        CHECK(check_disjoint(build_cubes(cubes)).ok);
    }
}

TEST_CASE("family json round trip") {
    DensityFamily f = build_finite_family({{1, 2}, {4, 9}});
    DensityFamily g = density_family_from_json(to_json(f));
    CHECK(g.S == f.S);
    CHECK(g.offsets == f.offsets);
    CHECK(g.pairs == f.pairs);
}
