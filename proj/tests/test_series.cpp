#include "univhol/series.hpp"
#include "univhol/shiftdyn.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace uh;

namespace {

EntireMapApprox scalar(std::uint32_t n, CoeffVector c) { return {n, {std::move(c)}, "test"}; }

Point shifted(const Point& z, const Direction& a) {
    Point w = z;
    for (std::size_t i = 0; i < a.size(); ++i) w[i] += a[i];
    return w;
}

}  // namespace

TEST_CASE("evaluation") {
    CoeffVector c = CoeffVector::unit(MultiIndex(), CRat(Rat(2), Rat(-3)));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) CHECK(eval(c, test::random_point(rng, 2)) == CRat(Rat(2), Rat(-3)));
    CHECK(eval(CoeffVector::unit(MultiIndex::unit(1, 2)), Point{CRat(3)}) == CRat(Rat(9, 2)));
    EntireMapApprox f{2, {CoeffVector::unit(MultiIndex::from_dense({1, 1})), CoeffVector::unit(MultiIndex::unit(2))}, ""};
    auto v = eval(f, Point{CRat(2), CRat(Rat(0), Rat(5))});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == CRat(Rat(0), Rat(10)));
    CHECK(v[1] == CRat(Rat(0), Rat(5)));
}

TEST_CASE("translation identity") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        std::uint32_t n = 1 + t % 2;
        CoeffVector a = test::random_coeffs(rng, n, 6, 5);
        Direction d = test::random_direction(rng, n, false);
        Point z = test::random_point(rng, n);
        CHECK(eval(exp_shift(d, a), z) == eval(a, shifted(z, d)));
    }
}

TEST_CASE("backward shift is differentiation") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        CoeffVector a = test::random_coeffs(rng, 3, 7, 6);
        for (std::uint32_t s = 1; s <= 3; ++s) CHECK(test::plain(shift_backward(a, s)) == test::plain_derivative(test::plain(a), s));
    }
}

TEST_CASE("slow growth certificate") {
    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 1, 30);

    GrowthCertificate zero = slow_growth_certificate(scalar(1, CoeffVector()), v, e);
    CHECK(zero.ok);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
        CoeffVector a = test::random_coeffs(rng, 1, 25, 6);
        Rat nrm = l1v_norm(a, v).hi;
        a *= CRat(Rat(1) / nrm);
        EntireMapApprox f = scalar(1, a);
        GrowthCertificate c = slow_growth_certificate(f, v, e);
        CHECK(c.ok);
        CHECK(c.alpha_norm.hi <= Rat(1) + Rat(1, 1000000));
        GrowthSampleReport rep = sample_growth_bound(f, e, Rat(1), 2000, 100 + t, Rat(40));
        CHECK(rep.samples == 2000);
        CHECK(rep.violations == 0);
    }

    // Lowering one radius breaks the outer branch at that index.
    WeightTable bad(Enumeration::Deglex, 1, e.spec());
    for (const auto& en : v.entries()) {
        WeightEntry w = en;
        if (en.idx == MultiIndex::unit(1, 3)) w.radius = Rat(1, 100);
        bad.push(w);
    }
    GrowthCertificate c = slow_growth_certificate(scalar(1, CoeffVector::unit(MultiIndex::unit(1, 3))), bad, e);
    CHECK_FALSE(c.ok);
    REQUIRE(c.failing_index);
    CHECK(*c.failing_index == MultiIndex::unit(1, 3));
    CHECK(c.failing_branch == "outer");

    ExpPowerGrowth other(Rat(2), Rat(1));
    CHECK_THROWS_AS(slow_growth_certificate(scalar(1, CoeffVector()), v, other), std::invalid_argument);
}

TEST_CASE("compact-open distance") {
    std::mt19937_64 rng(5);
    EntireMapApprox f = scalar(2, test::random_coeffs(rng, 2, 4, 4));
    auto radii = default_radii(6);
    CHECK(compact_open_distance(f, f, radii, 100, 1).value == 0);

    EntireMapApprox g = f;
    g.components[0].add(MultiIndex(), CRat(Rat(3, 2)));
    DistanceEstimate d = compact_open_distance(f, g, radii, 50, 1);
    CHECK(d.value == doctest::Approx(1 - std::ldexp(1.0, -6)));

    EntireMapApprox h = scalar(2, CoeffVector::unit(MultiIndex::from_dense({1, 1}), CRat(Rat(1, 20))));
    EntireMapApprox zero = scalar(2, CoeffVector());
    double prev = 0;
    for (std::size_t s = 16; s <= 1024; s *= 2) {
        double cur = compact_open_distance(h, zero, radii, s, 9).value;
        CHECK(cur >= prev);
        prev = cur;
    }
    // symmetry and triangle inequality on sampled triples (same sample points)
    EntireMapApprox k = scalar(2, test::random_coeffs(rng, 2, 3, 3));
    double fh = compact_open_distance(f, h, radii, 200, 3).value;
    double hf = compact_open_distance(h, f, radii, 200, 3).value;
    CHECK(fh == doctest::Approx(hf));
    double fk = compact_open_distance(f, k, radii, 200, 3).value;
    double kh = compact_open_distance(k, h, radii, 200, 3).value;
    CHECK(fh <= fk + kh + 1e-12);
}

TEST_CASE("diagonal restriction") {
    std::mt19937_64 rng(6);
    EntireMapApprox F = scalar(1, test::random_coeffs(rng, 1, 6, 4));
    EntireMapApprox same = diagonal_restriction(F, Point{CRat(1)}, 1);
    CHECK(same.components[0] == F.components[0]);

    // F = z1 z2 along (1, 1): f(z) = z^2 = 2 * z^2/2!.
    EntireMapApprox P = scalar(2, CoeffVector::unit(MultiIndex::from_dense({1, 1})));
    EntireMapApprox fa = diagonal_restriction(P, Point{CRat(1), CRat(1)}, 1);
    CHECK(fa.components[0] == CoeffVector::unit(MultiIndex::unit(1, 2), CRat(2)));

    CHECK_THROWS_AS(diagonal_restriction(P, Point{CRat(1), CRat(2)}, 1), std::invalid_argument);

    // f_a(z) = F(a z / a_j): exact agreement at random points.
    for (int t = 0; t < 50; ++t) {
        EntireMapApprox G = scalar(2, test::random_coeffs(rng, 2, 5, 5));
        Point a = test::random_point(rng, 2);
        std::uint32_t j = a[0].norm2() >= a[1].norm2() ? 1 : 2;
        if (a[j - 1].is_zero()) continue;
        EntireMapApprox g = diagonal_restriction(G, a, j);
        CHECK(g.components[0].max_degree() <= G.components[0].max_degree());
        CRat z = test::random_crat(rng);
        Point w{a[0] / a[j - 1] * z, a[1] / a[j - 1] * z};
        CHECK(eval(g, Point{z})[0] == eval(G, w)[0]);
    }
}

TEST_CASE("growth transfers to diagonal restrictions") {
    // F with ||F(z)|| <= phi(|z|) for phi = e^r gives |f_a(z)| <= phi(sqrt(2) |z|) along a unit direction.
    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 2, 28);
    std::mt19937_64 rng(7);
    CoeffVector a = test::random_coeffs(rng, 2, 5, 5);
    a *= CRat(Rat(1) / l1v_norm(a, v).hi);
    EntireMapApprox F = scalar(2, a);
    REQUIRE(slow_growth_certificate(F, v, e).ok);
    EntireMapApprox f = diagonal_restriction(F, Point{CRat(Rat(4, 5)), CRat(Rat(3, 5))}, 1);
    // |f(z)| = |F(z, 3/4 z)| and |(z, 3/4 z)| = 5/4 |z| <= sqrt(2) |z|.
    ExpPowerGrowth scaled(Rat(5, 4), Rat(1));
    GrowthSampleReport rep = sample_growth_bound(f, scaled, Rat(1), 2000, 11, Rat(30));
    CHECK(rep.violations == 0);
}

TEST_CASE("map json round trip") {
    std::mt19937_64 rng(8);
    EntireMapApprox f{2, {test::random_coeffs(rng, 2, 4, 4), test::random_coeffs(rng, 2, 4, 4)}, "round trip"};
    EntireMapApprox g = map_from_json(to_json(f));
    CHECK(g.dim == 2);
    CHECK(g.components == f.components);
    CHECK(to_json(g) == to_json(f));
}
