#include "univhol/multiindex.hpp"

#include <doctest.h>

#include <random>

using namespace uh;

namespace {
MultiIndex d(std::vector<unsigned> v) { return MultiIndex::from_dense(v); }
}  // namespace

TEST_CASE("partial order") {
    CHECK(partial_leq(d({1, 0}), d({2, 1})));
    CHECK_FALSE(partial_leq(d({2, 0}), d({0, 2})));
    CHECK_FALSE(partial_leq(d({0, 2}), d({2, 0})));
    CHECK(partial_leq(d({3, 1, 4}), d({3, 1, 4})));
    CHECK(partial_leq(MultiIndex(), d({0, 0, 5})));
}

TEST_CASE("canonical sparse form") {
    CHECK(d({0, 0, 0}) == MultiIndex());
    CHECK(d({2, 0, 1}).entries() == std::vector<MultiIndex::Entry>{{1, 2}, {3, 1}});
    CHECK(d({2, 0, 1}).degree() == 3);
    CHECK(d({2, 0, 3}).factorial() == 12);
    CHECK_THROWS_AS(MultiIndex::from_entries({{2, 1}, {1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex::from_entries({{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex::from_entries({{1, 0}}), std::invalid_argument);
}

TEST_CASE("step") {
    CHECK(d({2, 1}).step(1, -1) == d({1, 1}));
    CHECK_FALSE(d({0, 1}).step(1, -1).has_value());
    CHECK(d({0}).step(3, +1) == d({0, 0, 1}));

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<unsigned> e(0, 4), pos(1, 5);
    for (int t = 0; t < 500; ++t) {
        MultiIndex k = d({e(rng), e(rng), e(rng), e(rng)});
        unsigned s = pos(rng);
        auto up = k.step(s, +1);
        REQUIRE(up);
        CHECK(up->step(s, -1) == k);
        CHECK(up->degree() == k.degree() + 1);
    }
}

TEST_CASE("prime enumeration") {
    CHECK(prime_unrank(Int(1)) == MultiIndex());
    CHECK(prime_unrank(Int(12)) == d({2, 1}));
    CHECK(prime_unrank(Int(10)) == d({1, 0, 1}));
    CHECK(prime_rank(d({2, 1})) == 12);
    CHECK(prime_rank(MultiIndex()) == 1);
    CHECK(prime_rank(d({0, 0, 0, 1})) == 7);
    CHECK(nth_prime(1) == 2);
    CHECK(nth_prime(100) == 541);

    for (long m = 1; m <= 10000; ++m) REQUIRE(prime_rank(prime_unrank(Int(m))) == m);

    // 2^64 does not fit.
    CHECK_FALSE(prime_rank_u64(d({64})).has_value());
    CHECK(prime_rank_u64(d({63})) == (std::uint64_t{1} << 63));
    // Arbitrary precision keeps going.
    CHECK(prime_rank(d({100})) == Int("1267650600228229401496703205376"));
}

TEST_CASE("deglex enumeration") {
    CHECK(deglex_rank(d({0, 0}), 2) == 1);
    CHECK(deglex_rank(d({1, 0}), 2) == 2);
    CHECK(deglex_rank(d({0, 1}), 2) == 3);
    CHECK(deglex_rank(d({2, 0}), 2) == 4);
    for (unsigned k = 0; k < 50; ++k) CHECK(deglex_rank(d({k}), 1) == k + 1);
    CHECK_THROWS_AS(deglex_rank(d({0, 0, 1}), 2), std::invalid_argument);

    for (std::uint32_t n = 1; n <= 4; ++n)
        for (long m = 1; m <= 10000; ++m) {
            MultiIndex k = deglex_unrank(Int(m), n);
            REQUIRE(k.max_position() <= n);
            REQUIRE(deglex_rank(k, n) == m);
        }
}

TEST_CASE("enumerations are monotone on comparable pairs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<unsigned> e(0, 5), bump(0, 2);
    for (int t = 0; t < 500; ++t) {
        MultiIndex lo = d({e(rng), e(rng), e(rng)});
        MultiIndex hi = lo + d({bump(rng), bump(rng), bump(rng)});
        REQUIRE(partial_leq(lo, hi));
        CHECK(deglex_rank(lo, 3) <= deglex_rank(hi, 3));
        CHECK(prime_rank(lo) <= prime_rank(hi));
    }
}

TEST_CASE("json round trip") {
    MultiIndex k = d({0, 3, 0, 1});
    CHECK(to_json(k).dump() == R"({"idx":[[2,3],[4,1]]})");
    CHECK(multiindex_from_json(to_json(k)) == k);
}
