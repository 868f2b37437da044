#include "univhol/density.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace uh {

bool DensityFamily::contains(std::size_t q, std::uint64_t n) const {
    return n >= pairs.at(q).second && n % S == offsets.at(q) % S;
}

std::uint64_t DensityFamily::first(std::size_t q) const {
    const std::uint64_t nu = pairs.at(q).second;
    const std::uint64_t off = offsets.at(q) % S;
    if (off >= nu) return off;
    std::uint64_t steps = (nu - off + S - 1) / S;
    return off + steps * S;
}

std::uint64_t DensityFamily::element(std::size_t q, std::uint64_t idx) const {
    std::uint64_t f = first(q);
    if (idx > (std::numeric_limits<std::uint64_t>::max() - f) / S) throw std::overflow_error("element index too large");
    return f + idx * S;
}

std::vector<std::uint64_t> DensityFamily::prefix(std::size_t q, std::uint64_t T) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = first(q); n <= T; n += S) out.push_back(n);
    return out;
}

DensityFamily build_finite_family(const std::vector<std::pair<long, std::uint64_t>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("density family needs at least one pair");
    std::uint64_t V = 0;
    for (const auto& [l, nu] : pairs) {
        if (nu == 0) throw std::invalid_argument("nu must be a positive integer");
        V = std::max(V, nu);
    }
    const std::uint64_t Q = pairs.size();
    if (V > std::numeric_limits<std::uint64_t>::max() / 8 / Q) throw std::invalid_argument("stride overflows 64 bits");
    DensityFamily f;
    f.pairs = pairs;
    f.S = 4 * V * Q;
    for (std::uint64_t q = 1; q <= Q; ++q) f.offsets.push_back(4 * V * q);
    return f;
}

FamilyCheck verify_family(const DensityFamily& fam, std::uint64_t T, const std::vector<std::uint64_t>& checkpoints) {
    FamilyCheck rep;
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.violation = std::move(why);
        return rep;
    };
    std::vector<std::int32_t> owner(T + 1, -1);
    std::uint64_t V = 0;
    for (std::size_t q = 0; q < fam.size(); ++q) {
        V = std::max(V, fam.pairs[q].second);
        for (std::uint64_t n = 1; n <= T; ++n) {
            if (!fam.contains(q, n)) continue;
            if (owner[n] >= 0)
                return fail("n = " + std::to_string(n) + " lies in A_" + std::to_string(owner[n] + 1) + " and A_" +
                            std::to_string(q + 1));
            if (n < fam.pairs[q].second) return fail("n = " + std::to_string(n) + " is below nu");
            owner[n] = static_cast<std::int32_t>(q);
        }
    }
    // only pairs closer than 2V can violate |n - m| >= nu_q + nu_p
    std::deque<std::uint64_t> recent;
    for (std::uint64_t n = 1; n <= T; ++n) {
        if (owner[n] < 0) continue;
        while (!recent.empty() && n - recent.front() >= 2 * V) recent.pop_front();
        for (std::uint64_t m : recent) {
            std::uint64_t need = fam.pairs[owner[n]].second + fam.pairs[owner[m]].second;
            if (n - m < need)
                return fail("elements " + std::to_string(m) + " and " + std::to_string(n) + " are closer than " +
                            std::to_string(need));
        }
        recent.push_back(n);
    }
    bool first = true;
    for (std::size_t q = 0; q < fam.size(); ++q) {
        std::uint64_t count = 0, n = 0;
        for (std::uint64_t N : checkpoints) {
            if (N == 0 || N > T) continue;
            for (; n < N;) {
                ++n;
                if (owner[n] == static_cast<std::int32_t>(q)) ++count;
            }
            Rat share = ratio(static_cast<unsigned long>(count), static_cast<unsigned long>(N));
            Rat margin = share - (Rat(1, static_cast<unsigned long>(fam.S)) - ratio(2, static_cast<unsigned long>(N)));
            if (first || margin < rep.min_ratio_margin) rep.min_ratio_margin = margin;
            first = false;
            if (sgn(margin) < 0)
                return fail("prefix density of A_" + std::to_string(q + 1) + " at N = " + std::to_string(N) +
                            " is below 1/S - 2/N");
        }
    }
    return rep;
}

std::vector<std::pair<std::uint64_t, Rat>> lower_density_estimate(const std::function<bool(std::uint64_t)>& member,
                                                                  std::uint64_t T,
                                                                  const std::vector<std::uint64_t>& checkpoints) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    std::vector<std::uint64_t> cps = checkpoints;
    std::sort(cps.begin(), cps.end());
    std::vector<std::pair<std::uint64_t, Rat>> out;
    std::uint64_t count = 0, n = 0;
    for (std::uint64_t N : cps) {
        if (N == 0 || N > T) continue;
        for (; n < N;)
            if (member(++n)) ++count;
        out.emplace_back(N, ratio(static_cast<unsigned long>(count), static_cast<unsigned long>(N)));
    }
    return out;
}

Rat min_ratio(const std::vector<std::pair<std::uint64_t, Rat>>& trace) {
    if (trace.empty()) throw std::invalid_argument("empty density trace");
    Rat m = trace.front().second;
    for (const auto& [N, r] : trace) m = std::min(m, r);
    return m;
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t first, std::uint64_t T) {
    std::vector<std::uint64_t> cps;
    for (std::uint64_t N = std::max<std::uint64_t>(first, 1); N <= T; N = N + N / 2 + 1) cps.push_back(N);
    if (cps.empty() || cps.back() != T) cps.push_back(T);
    return cps;
}

Rat max_norm(const std::vector<Rat>& v) {
    Rat m = 0;
    for (const auto& x : v) m = std::max(m, abs(x));
    return m;
}

ResidueClasses residue_classes_delta_dense(const std::vector<Rat>& b, const Rat& delta, const Rat& r) {
    const Rat nb = max_norm(b);
    if (sgn(nb) == 0) throw std::invalid_argument("b must be nonzero");
    if (sgn(delta) <= 0) throw std::invalid_argument("delta must be positive");
    if (sgn(r) < 0) throw std::invalid_argument("r must be nonnegative");
    ResidueClasses rc;
    rc.b = b;
    rc.delta = delta;
    rc.r = r;
    rc.k = Int(ceil_rat(nb / delta) + 1).get_ui();
    rc.M = ceil_rat(2 * (r + delta) / nb) + 1;
    for (unsigned long i = 0; i < rc.k; ++i) {
        Rat f = ratio(static_cast<long>(i), static_cast<long>(rc.k));
        rc.fractions.push_back(f);
        Rat coef = f + Rat(rc.M) * Rat(static_cast<long>(i));
        std::vector<Rat> c;
        for (const auto& x : b) c.push_back(coef * x);
        rc.representatives.push_back(std::move(c));
    }
    return rc;
}

bool verify_delta_dense(const ResidueClasses& rc) {
    if (rc.fractions.empty()) return false;
    // class of each representative, as a fraction of b mod 1
    std::vector<Rat> fr;
    for (std::size_t i = 0; i < rc.representatives.size(); ++i) {
        const auto& c = rc.representatives[i];
        std::size_t pivot = 0;
        while (sgn(rc.b[pivot]) == 0) ++pivot;
        Rat t = c[pivot] / rc.b[pivot];
        for (std::size_t d = 0; d < c.size(); ++d)
            if (c[d] != t * rc.b[d]) return false;  // representative off the line R b
        fr.push_back(t - Rat(floor_rat(t)));
    }
    std::sort(fr.begin(), fr.end());
    Rat gap = fr.front() + 1 - fr.back();
    for (std::size_t i = 1; i < fr.size(); ++i) gap = std::max(gap, Rat(fr[i] - fr[i - 1]));
    return gap * max_norm(rc.b) / 2 <= rc.delta;
}

nlohmann::json to_json(const DensityFamily& f) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [l, nu] : f.pairs) pairs.push_back({l, nu});
    return {{"pairs", pairs}, {"S", f.S}, {"offsets", f.offsets}};
}

DensityFamily density_family_from_json(const nlohmann::json& j) {
    std::vector<std::pair<long, std::uint64_t>> pairs;
    for (const auto& p : j.at("pairs")) pairs.emplace_back(p.at(0).get<long>(), p.at(1).get<std::uint64_t>());
    DensityFamily f = build_finite_family(pairs);
    if (j.contains("S") && j.at("S").get<std::uint64_t>() != f.S) throw std::invalid_argument("stride does not match pairs");
    return f;
}

}  // namespace uh
