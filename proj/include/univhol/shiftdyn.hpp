#pragma once

#include "univhol/arith.hpp"
#include "univhol/coeffs.hpp"
#include "univhol/weights.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace uh {

// Finitely supported direction a = (a_1, a_2, ...); entry i is the coefficient at position i+1.
using Direction = std::vector<CRat>;

// sum_K v_K |alpha_K| with outward-rounded moduli. Throws std::out_of_range beyond the horizon.
Bounds l1v_norm(const CoeffVector& alpha, const WeightTable& v);
Bounds block_l2_norm(const BlockVector& a, const WeightTable& v);

// Decides ||alpha||_v <= ||beta||_v. Exact when the comparison reduces to a nonnegative
// combination of shared moduli; otherwise by enclosures. nullopt if undecided.
std::optional<bool> l1v_norm_leq(const CoeffVector& alpha, const CoeffVector& beta, const WeightTable& v);

// (B_s alpha)_K = alpha_{K + e_s}.
CoeffVector shift_backward(const CoeffVector& alpha, std::uint32_t s);
// (sum_i a_i B_i) alpha.
CoeffVector apply_direction(const Direction& a, const CoeffVector& alpha);
// exp(sum_i a_i B_i) alpha, exact (the operator is nilpotent on finite support).
CoeffVector exp_shift(const Direction& a, const CoeffVector& alpha);
BlockVector exp_shift(const Direction& a, const BlockVector& alpha);
Direction scale(const Direction& a, const CRat& s);

// Coefficient-space map induced by the linear substitution u = L z of variables: column K
// holds the coefficients (basis Z^J/J!) of prod_i (sum_j L_ij z_j)^{k_i} / K!.
// Columns are computed on demand and cached.
class SubstitutionMap {
public:
    // rows[i][j] = L_{i+1, j+1}; missing rows/entries act as the identity.
    explicit SubstitutionMap(std::vector<std::vector<CRat>> rows);
    const CoeffVector& column(const MultiIndex& k) const;
    CoeffVector apply(const CoeffVector& alpha) const;
    LinearMap materialize(unsigned long max_degree, std::uint32_t n) const;

private:
    std::vector<std::vector<CRat>> rows_;
    mutable std::map<MultiIndex, CoeffVector> cache_;
};

// Coordinate change z_1 = a_1 u_1, z_i = a_i u_1 + u_i. forward() is F with
// F B_1 = (sum a_i B_i) F; inverse() is F^{-1}.
class CoordinateChange {
public:
    explicit CoordinateChange(Direction a);
    const SubstitutionMap& forward() const { return forward_; }
    const SubstitutionMap& inverse() const { return inverse_; }
    const Direction& direction() const { return a_; }

private:
    Direction a_;
    SubstitutionMap forward_;
    SubstitutionMap inverse_;
};

// All columns with |K| <= max_degree over positions 1..n. Rejects a_1 = 0.
LinearMap change_of_coordinates_map(const Direction& a, unsigned long max_degree, std::uint32_t n);

struct WitnessBudget {
    Int max_iterations = Int(1000000);
    unsigned max_offset = 60;
    Int min_iterations = Int(1);  // iteration counts below this are not tried
};

struct WitnessResult {
    bool found = false;
    Int n;                    // iteration count
    BlockVector w;
    Bounds distance;          // ||w - u||
    Bounds residual;          // ||T^n w - vtarget||
    unsigned offset = 0;      // lowest first-position exponent of the correction
    Rat best_error;           // max(distance.hi, residual.hi) of the best attempt
    unsigned attempts = 0;
};

// Searches n and w with ||w - u|| < eps and ||exp(n sum a_i B_i) w - vtarget|| < eps
// (block l2 of l1(v)); every returned witness is re-verified by exact evaluation.
WitnessResult transitivity_witness(const BlockVector& u, const BlockVector& vtarget, const Direction& a,
                                   const WeightTable& v, const Rat& eps, const WitnessBudget& budget = {});

}  // namespace uh
