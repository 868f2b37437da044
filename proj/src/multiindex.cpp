#include "univhol/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace uh {

MultiIndex MultiIndex::from_dense(const std::vector<unsigned>& dense) {
    MultiIndex k;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i]) k.entries_.emplace_back(static_cast<std::uint32_t>(i + 1), dense[i]);
    return k;
}

MultiIndex MultiIndex::from_entries(std::vector<Entry> entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first == 0) throw std::invalid_argument("multi-index positions are 1-based");
        if (entries[i].second == 0) throw std::invalid_argument("multi-index stores no zero exponents");
        if (i && entries[i - 1].first >= entries[i].first)
            throw std::invalid_argument("multi-index positions must be strictly increasing");
    }
    MultiIndex k;
    k.entries_ = std::move(entries);
    return k;
}

MultiIndex MultiIndex::unit(std::uint32_t pos, std::uint32_t exp) {
    return exp ? from_entries({{pos, exp}}) : MultiIndex{};
}

unsigned long MultiIndex::degree() const {
    unsigned long d = 0;
    for (const auto& [p, e] : entries_) d += e;
    return d;
}

std::uint32_t MultiIndex::exponent(std::uint32_t pos) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{pos, 0});
    return (it != entries_.end() && it->first == pos) ? it->second : 0;
}

std::vector<unsigned> MultiIndex::dense(std::uint32_t n) const {
    if (max_position() > n) throw std::invalid_argument("multi-index " + str() + " exceeds dimension");
    std::vector<unsigned> d(n, 0);
    for (const auto& [p, e] : entries_) d[p - 1] = e;
    return d;
}

Int MultiIndex::factorial() const {
    Int f = 1;
    for (const auto& [p, e] : entries_) f *= uh::factorial(e);
    return f;
}

MultiIndex MultiIndex::with_exponent(std::uint32_t pos, std::uint32_t exp) const {
    if (pos == 0) throw std::invalid_argument("multi-index positions are 1-based");
    MultiIndex k = *this;
    auto it = std::lower_bound(k.entries_.begin(), k.entries_.end(), Entry{pos, 0});
    if (it != k.entries_.end() && it->first == pos) {
        if (exp) it->second = exp;
        else k.entries_.erase(it);
    } else if (exp) {
        k.entries_.insert(it, Entry{pos, exp});
    }
    return k;
}

std::optional<MultiIndex> MultiIndex::step(std::uint32_t s, int dir) const {
    if (s == 0) throw std::invalid_argument("step position must be >= 1");
    std::uint32_t e = exponent(s);
    if (dir < 0) {
        if (e == 0) return std::nullopt;
        return with_exponent(s, e - 1);
    }
    return with_exponent(s, e + 1);
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (const auto& [p, e] : o.entries_) r = r.with_exponent(p, r.exponent(p) + e);
    return r;
}

std::string MultiIndex::str() const {
    std::string s = "(";
    std::uint32_t n = max_position();
    for (std::uint32_t p = 1; p <= n; ++p) {
        if (p > 1) s += ",";
        s += std::to_string(exponent(p));
    }
    return s + ")";
}

bool partial_leq(const MultiIndex& k, const MultiIndex& k2) {
    for (const auto& [p, e] : k.entries())
        if (e > k2.exponent(p)) return false;
    return true;
}

namespace {

struct PrimeTable {
    std::mutex mu;
    std::vector<std::uint64_t> primes;
    std::unordered_map<std::uint64_t, std::uint64_t> index;
    std::uint64_t limit = 0;

    void grow(std::uint64_t new_limit) {
        std::vector<bool> composite(new_limit + 1, false);
        primes.clear();
        index.clear();
        for (std::uint64_t i = 2; i <= new_limit; ++i) {
            if (composite[i]) continue;
            index.emplace(i, primes.size() + 1);
            primes.push_back(i);
            for (std::uint64_t j = i * i; j <= new_limit; j += i) composite[j] = true;
        }
        limit = new_limit;
    }
};

PrimeTable& table() {
    static PrimeTable t;
    return t;
}

constexpr std::uint64_t kSieveCap = 50'000'000;

}  // namespace

std::uint64_t nth_prime(std::uint64_t i) {
    if (i == 0) throw std::invalid_argument("primes are indexed from 1");
    auto& t = table();
    std::lock_guard lock(t.mu);
    while (t.primes.size() < i) {
        std::uint64_t next = std::max<std::uint64_t>(1024, t.limit * 2);
        if (next > kSieveCap) throw std::out_of_range("prime index beyond sieve capacity");
        t.grow(next);
    }
    return t.primes[i - 1];
}

MultiIndex prime_unrank(const Int& m) {
    if (m < 1) throw std::invalid_argument("prime_unrank needs m >= 1");
    Int rest = m;
    std::vector<MultiIndex::Entry> entries;
    for (std::uint64_t i = 1; rest > 1; ++i) {
        std::uint64_t p = nth_prime(i);
        Int pp(static_cast<unsigned long>(p));
        if (pp * pp > rest) {
            // rest is prime: find its index
            if (!rest.fits_ulong_p() || rest.get_ui() > kSieveCap)
                throw std::out_of_range("prime factor beyond sieve capacity");
            std::uint64_t q = rest.get_ui();
            std::uint64_t j = i;
            while (nth_prime(j) < q) ++j;
            entries.emplace_back(static_cast<std::uint32_t>(j), 1);
            break;
        }
        std::uint32_t e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        if (e) entries.emplace_back(static_cast<std::uint32_t>(i), e);
    }
    return MultiIndex::from_entries(std::move(entries));
}

Int prime_rank(const MultiIndex& k) {
    Int r = 1;
    for (const auto& [pos, e] : k.entries()) {
        Int pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), nth_prime(pos), e);
        r *= pe;
    }
    return r;
}

std::optional<std::uint64_t> prime_rank_u64(const MultiIndex& k) {
    std::uint64_t r = 1;
    for (const auto& [pos, e] : k.entries()) {
        std::uint64_t p = nth_prime(pos);
        for (std::uint32_t i = 0; i < e; ++i) {
            if (r > std::numeric_limits<std::uint64_t>::max() / p) return std::nullopt;
            r *= p;
        }
    }
    return r;
}

Int deglex_rank(const MultiIndex& k, std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("dimension must be >= 1");
    if (k.max_position() > n)
        throw std::invalid_argument("multi-index " + k.str() + " has support outside 1.." + std::to_string(n));
    unsigned long d = k.degree();
    Int rank = d == 0 ? Int(0) : binomial(d - 1 + n, n);
    unsigned long r = d;
    for (std::uint32_t i = 1; i < n; ++i) {
        unsigned long ki = k.exponent(i);
        unsigned long m = n - i;
        if (r > ki) rank += binomial(r - ki - 1 + m, m);
        r -= ki;
    }
    return rank + 1;
}

MultiIndex deglex_unrank(const Int& m, std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("dimension must be >= 1");
    if (m < 1) throw std::invalid_argument("deglex_unrank needs m >= 1");
    unsigned long d = 0;
    while (binomial(d + n, n) < m) ++d;
    Int pos = m - 1 - (d == 0 ? Int(0) : binomial(d - 1 + n, n));
    std::vector<unsigned> dense(n, 0);
    unsigned long r = d;
    for (std::uint32_t i = 1; i < n; ++i) {
        unsigned long mm = n - i;
        for (unsigned long t = r;; --t) {
            Int block = binomial(r - t + mm - 1, mm - 1);
            if (pos < block) {
                dense[i - 1] = static_cast<unsigned>(t);
                break;
            }
            pos -= block;
        }
        r -= dense[i - 1];
    }
    dense[n - 1] = static_cast<unsigned>(r);
    return MultiIndex::from_dense(dense);
}

nlohmann::json to_json(const MultiIndex& k) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, e] : k.entries()) arr.push_back({p, e});
    return {{"idx", arr}};
}

MultiIndex multiindex_from_json(const nlohmann::json& j) {
    const auto& arr = j.contains("idx") ? j.at("idx") : j;
    std::vector<MultiIndex::Entry> entries;
    for (const auto& e : arr) entries.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
    return MultiIndex::from_entries(std::move(entries));
}

}  // namespace uh
