#pragma once

#include "univhol/arith.hpp"

#include <json.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace uh {

// Finitely supported exponent tuple. Positions are 1-based; only nonzero
// exponents are stored, sorted by position.
class MultiIndex {
public:
    using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (position, exponent)

    MultiIndex() = default;
    // Dense form: dense[i] is the exponent at position i+1.
    static MultiIndex from_dense(const std::vector<unsigned>& dense);
    // Sparse form; throws std::invalid_argument on zero positions/exponents or unsorted input.
    static MultiIndex from_entries(std::vector<Entry> entries);
    static MultiIndex unit(std::uint32_t pos, std::uint32_t exp = 1);

    const std::vector<Entry>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }
    unsigned long degree() const;
    std::uint32_t exponent(std::uint32_t pos) const;
    // Largest position carrying a nonzero exponent (0 for the zero index).
    std::uint32_t max_position() const { return entries_.empty() ? 0 : entries_.back().first; }
    std::vector<unsigned> dense(std::uint32_t n) const;
    Int factorial() const;

    // K with the s-th slot moved by dir (+1 or -1); nullopt when it would go negative.
    std::optional<MultiIndex> step(std::uint32_t s, int dir) const;
    MultiIndex with_exponent(std::uint32_t pos, std::uint32_t exp) const;
    MultiIndex operator+(const MultiIndex& o) const;

    std::string str() const;

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

private:
    std::vector<Entry> entries_;
};

// Componentwise K <= K2.
bool partial_leq(const MultiIndex& k, const MultiIndex& k2);

// Prime enumeration: m = prod p_i^{k_i}.
MultiIndex prime_unrank(const Int& m);
Int prime_rank(const MultiIndex& k);
// Fixed-width variant; nullopt on overflow of 64 bits.
std::optional<std::uint64_t> prime_rank_u64(const MultiIndex& k);
// i-th prime, 1-based (p_1 = 2).
std::uint64_t nth_prime(std::uint64_t i);

// Degree-lexicographic enumeration of Z^n_{>=0}, 1-based; within a degree block
// larger leading exponents come first.
Int deglex_rank(const MultiIndex& k, std::uint32_t n);
MultiIndex deglex_unrank(const Int& m, std::uint32_t n);

nlohmann::json to_json(const MultiIndex& k);
MultiIndex multiindex_from_json(const nlohmann::json& j);

}  // namespace uh
