#pragma once

#include "univhol/arith.hpp"
#include "univhol/weights.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace uh {

using Exponents = std::vector<unsigned>;

// Real polynomial in n variables with rational coefficients (dense exponent keys).
struct RPoly {
    std::uint32_t n = 0;
    std::map<Exponents, Rat> c;

    static RPoly constant(std::uint32_t n, const Rat& a);
    static RPoly variable(std::uint32_t n, std::uint32_t i);  // x_i, 1-based

    bool is_zero() const { return c.empty(); }
    // -1 for the zero polynomial
    long degree() const;
    bool is_homogeneous() const;
    RPoly derivative(std::uint32_t l) const;  // d/dx_l, 1-based
    RPoly laplacian() const;
    Rat eval(const std::vector<Rat>& x) const;
    // P(q_1(x), ..., q_n(x))
    RPoly compose(const std::vector<RPoly>& q) const;

    RPoly operator+(const RPoly& o) const;
    RPoly operator-(const RPoly& o) const;
    RPoly operator*(const RPoly& o) const;
    RPoly operator*(const Rat& a) const;
    bool operator==(const RPoly& o) const { return n == o.n && c == o.c; }
};

// Monomials of degree d in n variables, in a fixed (lexicographically decreasing) order.
std::vector<Exponents> monomials(std::uint32_t n, unsigned d);
// dim of harmonic homogeneous polynomials of degree d: C(d+n-1, n-1) - C(d+n-3, n-1).
Int harmonic_dimension(std::uint32_t n, unsigned d);

// (i, j): chain position i >= 1, chain id j >= 1.
using HIndex = std::pair<unsigned, unsigned>;

struct HarmonicElement {
    unsigned i = 1, j = 1;
    unsigned degree = 0;
    RPoly P;
};

struct HarmonicChainBasis {
    std::uint32_t n = 2;
    unsigned D = 0;
    std::vector<HarmonicElement> elements;  // by degree, then chain id
    std::vector<unsigned> chain_start;      // start degree of chain j at position j-1
    std::map<HIndex, std::size_t> index;

    const HarmonicElement& at(unsigned i, unsigned j) const { return elements.at(index.at({i, j})); }
    bool contains(unsigned i, unsigned j) const { return index.count({i, j}) != 0; }
    // kappa(i, j) = degree + 1
    unsigned kappa(unsigned i, unsigned j) const { return at(i, j).degree + 1; }
    std::vector<std::size_t> block(unsigned d) const;
};

// Chains extended by solving d/dx_1 H = h over harmonic spaces; new chains start from
// the kernel of d/dx_1. Exact rational arithmetic; n >= 2.
HarmonicChainBasis build_chain_basis(std::uint32_t n, unsigned D);

struct BasisCheck {
    bool ok = true;
    std::string violation;
};
// Laplacian zero, chain relation, homogeneity and per-degree rank.
BasisCheck check_basis(const HarmonicChainBasis& b);

using HVector = std::map<HIndex, Rat>;

// B_l = phi^-1 o d/dx_l o phi in the chain basis.
struct HarmonicShiftMatrix {
    unsigned l = 1;
    std::map<HIndex, HVector> columns;  // image of e_{i,j}
};
HarmonicShiftMatrix shift_matrix(const HarmonicChainBasis& b, unsigned l);
HVector apply(const HarmonicShiftMatrix& B, const HVector& a);

// Weight table indexed by MultiIndex (i, j) = exponents at positions 1, 2.
MultiIndex chain_key(unsigned i, unsigned j);
WeightTable build_harmonic_weight(const HarmonicChainBasis& b, const std::vector<HarmonicShiftMatrix>& B,
                                  const GrowthFunction& phi);
// sum |a_{i,j}| v_{i,j}
Rat hnorm(const HVector& a, const WeightTable& v);
// Checks v_{i,j} >= max_l sum |a^{l,i,j}_{s,t}| v_{s,t} for every column.
bool check_harmonic_law(const std::vector<HarmonicShiftMatrix>& B, const WeightTable& v);

RPoly realize(const HarmonicChainBasis& b, const HVector& a);
// Upper bound of sup over the unit sphere of |P| (any polynomial, homogeneous parts summed).
Rat sphere_sup_upper(const RPoly& P);

struct HarmonicGrowthReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_ratio = 0;  // |phi_x(alpha)(x)| / phi(|x|)
};
// Random alpha with norm <= 1 and random x; certified comparison of |phi_x(alpha)(x)| with phi(|x|).
HarmonicGrowthReport harmonic_growth_sample(const HarmonicChainBasis& b, const WeightTable& v,
                                            const GrowthFunction& phi, std::size_t vectors, std::size_t points,
                                            std::uint64_t seed);

nlohmann::json to_json(const RPoly& p);
nlohmann::json to_json(const HarmonicChainBasis& b);
nlohmann::json to_json(const HarmonicShiftMatrix& B);

}  // namespace uh
