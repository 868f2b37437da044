#pragma once

#include "univhol/arith.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace uh {

// A_q = {n = offset_q (mod S), n >= nu_q}, one set per requested pair (l_q, nu_q).
struct DensityFamily {
    std::vector<std::pair<long, std::uint64_t>> pairs;
    std::uint64_t S = 0;
    std::vector<std::uint64_t> offsets;

    std::size_t size() const { return pairs.size(); }
    bool contains(std::size_t q, std::uint64_t n) const;
    // Elements of A_q in increasing order, idx 0-based.
    std::uint64_t element(std::size_t q, std::uint64_t idx) const;
    std::uint64_t first(std::size_t q) const;
    // Elements of A_q that are <= T.
    std::vector<std::uint64_t> prefix(std::size_t q, std::uint64_t T) const;
};

// Stride S = 4VQ and offsets 4Vq (V = max nu, Q = number of pairs). Throws std::invalid_argument
// on an empty list, nu = 0 or overflow.
DensityFamily build_finite_family(const std::vector<std::pair<long, std::uint64_t>>& pairs);

struct FamilyCheck {
    bool ok = true;
    std::string violation;
    Rat min_ratio_margin;  // min over q and checkpoints of ratio - (1/S - 2/N)
};

// Exhaustive check on [1, T] of: disjointness, n >= nu_q, |n - m| >= nu_q + nu_p, and
// prefix density >= 1/S - 2/N at every checkpoint N.
FamilyCheck verify_family(const DensityFamily& fam, std::uint64_t T, const std::vector<std::uint64_t>& checkpoints);

// Running ratios #{n <= N : n in A} / N at the checkpoints (exact).
std::vector<std::pair<std::uint64_t, Rat>> lower_density_estimate(const std::function<bool(std::uint64_t)>& member,
                                                                  std::uint64_t T,
                                                                  const std::vector<std::uint64_t>& checkpoints);
// Smallest ratio in a trace (the reported liminf proxy).
Rat min_ratio(const std::vector<std::pair<std::uint64_t, Rat>>& trace);
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t T);

// Classes i/k b + Z b, i = 0..k-1, k = ceil(|b|/delta) + 1 (max-norm), with representatives
// (i/k + i M) b spaced so the cubes Q(c_i, r + delta) are pairwise disjoint.
struct ResidueClasses {
    std::vector<Rat> b;
    Rat delta, r;
    unsigned long k = 0;
    Int M;
    std::vector<Rat> fractions;               // i/k
    std::vector<std::vector<Rat>> representatives;
};

ResidueClasses residue_classes_delta_dense(const std::vector<Rat>& b, const Rat& delta, const Rat& r);
// Every point of R b lies within max-norm delta of some class (exact gap check).
bool verify_delta_dense(const ResidueClasses& rc);
Rat max_norm(const std::vector<Rat>& v);

nlohmann::json to_json(const DensityFamily& f);
DensityFamily density_family_from_json(const nlohmann::json& j);

}  // namespace uh
