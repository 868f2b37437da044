#include "univhol/shiftdyn.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace uh;

namespace {

MultiIndex e1(unsigned k) { return MultiIndex::unit(1, k); }

WeightTable ones(std::uint32_t n, unsigned max_degree) {
    WeightTable v(Enumeration::Deglex, n, "");
    for (long m = 1;; ++m) {
        MultiIndex k = deglex_unrank(Int(m), n);
        if (k.degree() > max_degree) break;
        v.push({k, Rat(1), {}});
    }
    return v;
}

Rat l1_sum_abs_direction(const Direction& a) {
    Rat s(0);
    for (const auto& x : a) s += modulus_bounds(x).hi;
    return s;
}

}  // namespace

TEST_CASE("weighted norms") {
    WeightTable v1 = ones(1, 10);
    CHECK(l1v_norm(CoeffVector::unit(MultiIndex()), v1).lo == 1);
    CHECK(l1v_norm(CoeffVector::unit(MultiIndex()), v1).hi == 1);

    WeightTable two(Enumeration::Custom, 1, "");
    two.push({e1(3), Rat(2), {}});
    Bounds b = l1v_norm(CoeffVector::unit(e1(3), CRat(Rat(3), Rat(4))), two);
    CHECK(b.lo == 10);
    CHECK(b.hi == 10);

    CHECK_THROWS_AS(l1v_norm(CoeffVector::unit(e1(11)), v1), std::out_of_range);

    BlockVector blk{CoeffVector::unit(MultiIndex(), CRat(Rat(3))), CoeffVector::unit(e1(1), CRat(Rat(4)))};
    Bounds bl = block_l2_norm(blk, v1);
    CHECK(bl.lo <= 5);
    CHECK(bl.hi >= 5);
    CHECK(bl.hi - bl.lo < Rat(1, 1000000));

    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 2, 45);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        CoeffVector a = test::random_coeffs(rng, 2, 7, 4);
        CoeffVector c = test::random_coeffs(rng, 2, 7, 4);
        CHECK(l1v_norm(a + c, v).lo <= l1v_norm(a, v).hi + l1v_norm(c, v).hi);
    }
}

TEST_CASE("backward shift") {
    CHECK(shift_backward(CoeffVector::unit(MultiIndex::from_dense({2, 0})), 1) ==
          CoeffVector::unit(MultiIndex::from_dense({1, 0})));
    CHECK(shift_backward(CoeffVector::unit(MultiIndex::from_dense({0, 1})), 1).is_zero());
    CHECK(shift_backward(CoeffVector::unit(MultiIndex::from_dense({0, 1})), 2) == CoeffVector::unit(MultiIndex()));
}

TEST_CASE("backward shifts contract under the order condition") {
    ExpPowerGrowth e(Rat(1), Rat(1, 2));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 2, 55);
    REQUIRE(check_order_condition(v).ok);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        CoeffVector a = test::random_coeffs(rng, 2, 8, 6);
        for (std::uint32_t s = 1; s <= 2; ++s) {
            auto leq = l1v_norm_leq(shift_backward(a, s), a, v);
            REQUIRE(leq.has_value());
            CHECK(*leq);
        }
    }
}

TEST_CASE("exponential of shifts") {
    std::mt19937_64 rng(3);
    CoeffVector a = test::random_coeffs(rng, 2, 6, 5);
    CHECK(exp_shift(Direction{CRat(0), CRat(0)}, a) == a);

    CoeffVector expected = CoeffVector::unit(e1(2));
    expected.add(e1(1), CRat(1));
    expected.add(MultiIndex(), CRat(Rat(1, 2)));
    CHECK(exp_shift(Direction{CRat(1)}, CoeffVector::unit(e1(2))) == expected);

    for (int t = 0; t < 100; ++t) {
        CoeffVector x = test::random_coeffs(rng, 2, 6, 5);
        Direction p = test::random_direction(rng, 2, false), q = test::random_direction(rng, 2, false);
        Direction pq{p[0] + q[0], p[1] + q[1]};
        CHECK(exp_shift(p, exp_shift(q, x)) == exp_shift(pq, x));
    }
}

TEST_CASE("exponential operator bound") {
    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 2, 45);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        CoeffVector x = test::random_coeffs(rng, 2, 7, 5);
        Direction a = test::random_direction(rng, 2, false);
        Bounds lhs = l1v_norm(exp_shift(a, x), v);
        Bounds factor = exp_bounds(l1_sum_abs_direction(a));
        CHECK(lhs.hi <= factor.hi * l1v_norm(x, v).hi);
    }
}

TEST_CASE("change of coordinates") {
    LinearMap id = change_of_coordinates_map(Direction{CRat(1), CRat(0)}, 5, 2);
    for (const auto& [k, col] : id.columns()) CHECK(col == CoeffVector::unit(k));

    // n = 1, a = 2: F B = 2 B F forces F e_k = 2^{-k} e_k.
    LinearMap F = change_of_coordinates_map(Direction{CRat(2)}, 8, 1);
    for (unsigned k = 0; k <= 8; ++k)
        CHECK(F.column(e1(k)) == CoeffVector::unit(e1(k), CRat(Rat(1) / rat_pow(Rat(2), k))));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        CoeffVector x = test::random_coeffs(rng, 1, 8, 4);
        CHECK(F.apply(shift_backward(x, 1)) == apply_direction(Direction{CRat(2)}, F.apply(x)));
    }

    Direction a{CRat(1), CRat(1)};
    LinearMap G = change_of_coordinates_map(a, 8, 2);
    for (int t = 0; t < 50; ++t) {
        CoeffVector x = test::random_coeffs(rng, 2, 8, 5);
        CHECK(G.apply(shift_backward(x, 1)) == apply_direction(a, G.apply(x)));
    }

    CoordinateChange cc(Direction{CRat(Rat(3), Rat(1)), CRat(Rat(-1, 2))});
    for (int t = 0; t < 20; ++t) {
        CoeffVector x = test::random_coeffs(rng, 2, 6, 4);
        CHECK(cc.inverse().apply(cc.forward().apply(x)) == x);
    }

    CHECK_THROWS_AS(change_of_coordinates_map(Direction{CRat(0), CRat(1)}, 3, 2), std::invalid_argument);
}

TEST_CASE("transitivity witness, trivial pair") {
    WeightTable v = ones(1, 30);
    WitnessResult r = transitivity_witness({CoeffVector()}, {CoeffVector()}, Direction{CRat(1)}, v, Rat(1, 10));
    REQUIRE(r.found);
    CHECK(r.n == 1);
    CHECK(r.w == BlockVector{CoeffVector()});
}

TEST_CASE("hand-computed orbit of a correction block") {
    // w = (2/n^2) e_2 with n = 100: e^{nB} w = e_0 + (2/n) e_1 + (2/n^2) e_2.
    WeightTable v = ones(1, 5);
    Rat n(100);
    CoeffVector w = CoeffVector::unit(e1(2), CRat(Rat(2) / (n * n)));
    CoeffVector image = exp_shift(Direction{CRat(n)}, w);
    Bounds res = l1v_norm(image - CoeffVector::unit(MultiIndex()), v);
    CHECK(res.lo == Rat(101, 5000));
    CHECK(res.hi == Rat(101, 5000));
    CHECK(l1v_norm(w, v).hi == Rat(1, 5000));
}

TEST_CASE("random witnesses are found and re-verified") {
    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 1, 90);
    std::mt19937_64 rng(6);
    Rat eps(1, 1000000);
    for (int t = 0; t < 5; ++t) {
        BlockVector u{test::random_coeffs(rng, 1, 4, 3)};
        BlockVector target{test::random_coeffs(rng, 1, 4, 3)};
        Direction a{test::random_crat(rng, 3, 2)};
        if (a[0].is_zero()) a[0] = CRat(1);
        WitnessResult r = transitivity_witness(u, target, a, v, eps);
        REQUIRE(r.found);
        Direction na = scale(a, CRat(Rat(r.n)));
        CHECK(block_l2_norm(r.w - u, v).hi < eps);
        CHECK(block_l2_norm(exp_shift(na, r.w) - target, v).hi < eps);
    }
}

TEST_CASE("witness search reports failure within a starved budget") {
    WeightTable v = ones(1, 40);
    BlockVector target{CoeffVector::unit(MultiIndex())};
    WitnessBudget tiny{Int(10), 3, Int(1)};
    WitnessResult r = transitivity_witness({CoeffVector()}, target, Direction{CRat(1)}, v, Rat(1, 1000000), tiny);
    CHECK_FALSE(r.found);
    CHECK(r.best_error > 0);
}
