#pragma once

#include "univhol/coeffs.hpp"
#include "univhol/series.hpp"
#include "univhol/shiftdyn.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace uh::test {

inline Rat random_rat(std::mt19937_64& rng, long num = 9, long den = 8) {
    std::uniform_int_distribution<long> p(-num, num), q(1, den);
    return ratio(p(rng), q(rng));
}

inline CRat random_crat(std::mt19937_64& rng, long num = 9, long den = 8) {
    return {random_rat(rng, num, den), random_rat(rng, num, den)};
}

inline MultiIndex random_index(std::mt19937_64& rng, std::uint32_t n, unsigned max_degree) {
    std::uniform_int_distribution<unsigned> e(0, max_degree);
    std::vector<unsigned> dense(n);
    unsigned left = max_degree;
    for (auto& x : dense) {
        x = std::min(left, e(rng) / n);
        left -= x;
    }
    return MultiIndex::from_dense(dense);
}

inline CoeffVector random_coeffs(std::mt19937_64& rng, std::uint32_t n, unsigned max_degree, std::size_t terms,
                                 bool real = false) {
    CoeffVector a;
    for (std::size_t i = 0; i < terms; ++i)
        a.add(random_index(rng, n, max_degree), real ? CRat(random_rat(rng)) : random_crat(rng));
    return a;
}

inline Point random_point(std::mt19937_64& rng, std::uint32_t n) {
    Point z;
    for (std::uint32_t i = 0; i < n; ++i) z.push_back(random_crat(rng, 5, 4));
    return z;
}

inline Direction random_direction(std::mt19937_64& rng, std::uint32_t n, bool nonzero_first = true) {
    Direction a;
    for (std::uint32_t i = 0; i < n; ++i) a.push_back(random_crat(rng, 3, 2));
    while (nonzero_first && a[0].is_zero()) a[0] = random_crat(rng, 3, 2);
    return a;
}

// Plain monomial coefficients c_K = alpha_K / K!.
inline std::map<MultiIndex, CRat> plain(const CoeffVector& a) {
    std::map<MultiIndex, CRat> out;
    for (const auto& [k, c] : a.terms()) out[k] = c * ratio(1, k.factorial());
    return out;
}

// d/dz_s on plain coefficients.
inline std::map<MultiIndex, CRat> plain_derivative(const std::map<MultiIndex, CRat>& p, std::uint32_t s) {
    std::map<MultiIndex, CRat> out;
    for (const auto& [k, c] : p) {
        std::uint32_t e = k.exponent(s);
        if (e == 0) continue;
        out[*k.step(s, -1)] += c * Rat(e);
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

}  // namespace uh::test
