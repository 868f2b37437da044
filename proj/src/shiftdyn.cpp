#include "univhol/shiftdyn.hpp"

#include <algorithm>
#include <stdexcept>

namespace uh {

Bounds l1v_norm(const CoeffVector& alpha, const WeightTable& v) {
    Bounds s{Rat(0), Rat(0)};
    for (const auto& [k, c] : alpha.terms()) {
        const Rat& w = v.weight(k);
        Bounds m = modulus_bounds(c);
        s.lo += w * m.lo;
        s.hi += w * m.hi;
    }
    return s;
}

Bounds block_l2_norm(const BlockVector& a, const WeightTable& v) {
    if (a.size() == 1) return l1v_norm(a[0], v);
    Rat lo2 = 0, hi2 = 0;
    for (const auto& comp : a) {
        Bounds b = l1v_norm(comp, v);
        lo2 += b.lo * b.lo;
        hi2 += b.hi * b.hi;
    }
    return {sqrt_bounds(lo2).lo, sqrt_bounds(hi2).hi};
}

std::optional<bool> l1v_norm_leq(const CoeffVector& alpha, const CoeffVector& beta, const WeightTable& v) {
    // group terms by |c|^2: equal squared moduli give equal moduli exactly
    std::map<Rat, Rat> diff;  // coefficient of sqrt(g) in ||beta|| - ||alpha||
    for (const auto& [k, c] : beta.terms()) diff[c.norm2()] += v.weight(k);
    for (const auto& [k, c] : alpha.terms()) diff[c.norm2()] -= v.weight(k);
    bool any_neg = false, any_pos = false;
    for (const auto& [g, w] : diff) {
        if (sgn(w) < 0) any_neg = true;
        if (sgn(w) > 0) any_pos = true;
    }
    if (!any_neg) return true;
    if (!any_pos) return false;
    Rat lo = 0, hi = 0;
    for (const auto& [g, w] : diff) {
        Bounds r = sqrt_bounds(g);
        lo += sgn(w) > 0 ? Rat(w * r.lo) : Rat(w * r.hi);
        hi += sgn(w) > 0 ? Rat(w * r.hi) : Rat(w * r.lo);
    }
    if (sgn(lo) >= 0) return true;
    if (sgn(hi) < 0) return false;
    return std::nullopt;
}

CoeffVector shift_backward(const CoeffVector& alpha, std::uint32_t s) {
    CoeffVector out;
    for (const auto& [k, c] : alpha.terms())
        if (auto prev = k.step(s, -1)) out.add(*prev, c);
    return out;
}

CoeffVector apply_direction(const Direction& a, const CoeffVector& alpha) {
    CoeffVector out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        const auto s = static_cast<std::uint32_t>(i + 1);
        for (const auto& [k, c] : alpha.terms())
            if (auto prev = k.step(s, -1)) out.add(*prev, a[i] * c);
    }
    return out;
}

CoeffVector exp_shift(const Direction& a, const CoeffVector& alpha) {
    CoeffVector result = alpha, term = alpha;
    for (long t = 1; !term.is_zero(); ++t) {
        term = apply_direction(a, term);
        term *= CRat(Rat(1, t));
        result += term;
    }
    return result;
}

BlockVector exp_shift(const Direction& a, const BlockVector& alpha) {
    BlockVector out;
    out.reserve(alpha.size());
    for (const auto& c : alpha) out.push_back(exp_shift(a, c));
    return out;
}

Direction scale(const Direction& a, const CRat& s) {
    Direction out = a;
    for (auto& x : out) x = x * s;
    return out;
}

SubstitutionMap::SubstitutionMap(std::vector<std::vector<CRat>> rows) : rows_(std::move(rows)) {}

const CoeffVector& SubstitutionMap::column(const MultiIndex& k) const {
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    // plain monomial coefficients of prod_i (row_i . z)^{k_i}
    std::map<MultiIndex, CRat> poly{{MultiIndex{}, CRat(1)}};
    for (const auto& [pos, e] : k.entries()) {
        std::vector<std::pair<std::uint32_t, CRat>> form;
        if (pos <= rows_.size()) {
            const auto& row = rows_[pos - 1];
            for (std::size_t j = 0; j < row.size(); ++j)
                if (!row[j].is_zero()) form.emplace_back(static_cast<std::uint32_t>(j + 1), row[j]);
        } else {
            form.emplace_back(pos, CRat(1));
        }
        for (std::uint32_t rep = 0; rep < e; ++rep) {
            std::map<MultiIndex, CRat> next;
            for (const auto& [mono, c] : poly)
                for (const auto& [j, lj] : form) {
                    MultiIndex m2 = mono.with_exponent(j, mono.exponent(j) + 1);
                    auto& slot = next[m2];
                    slot += c * lj;
                }
            poly.swap(next);
        }
    }
    CoeffVector col;
    Rat inv_kfact(Int(1), k.factorial());
    for (const auto& [mono, c] : poly) col.add(mono, c * (Rat(mono.factorial()) * inv_kfact));
    return cache_.emplace(k, std::move(col)).first->second;
}

CoeffVector SubstitutionMap::apply(const CoeffVector& alpha) const {
    CoeffVector out;
    for (const auto& [k, c] : alpha.terms())
        for (const auto& [j, a] : column(k).terms()) out.add(j, a * c);
    return out;
}

LinearMap SubstitutionMap::materialize(unsigned long max_degree, std::uint32_t n) const {
    LinearMap F;
    Int count = binomial(max_degree + n, n);
    for (Int m = 1; m <= count; ++m) {
        MultiIndex k = deglex_unrank(m, n);
        F.set_column(k, column(k));
    }
    return F;
}

namespace {

std::vector<std::vector<CRat>> forward_rows(const Direction& a) {
    // u_1 = z_1 / a_1, u_i = z_i - (a_i / a_1) z_1
    std::vector<std::vector<CRat>> rows(a.size(), std::vector<CRat>(a.size()));
    CRat inv = CRat(1) / a[0];
    rows[0][0] = inv;
    for (std::size_t i = 1; i < a.size(); ++i) {
        rows[i][0] = -(a[i] * inv);
        rows[i][i] = CRat(1);
    }
    return rows;
}

std::vector<std::vector<CRat>> inverse_rows(const Direction& a) {
    // z_1 = a_1 u_1, z_i = a_i u_1 + u_i
    std::vector<std::vector<CRat>> rows(a.size(), std::vector<CRat>(a.size()));
    rows[0][0] = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        rows[i][0] = a[i];
        rows[i][i] = CRat(1);
    }
    return rows;
}

const Direction& checked(const Direction& a) {
    if (a.empty() || a[0].is_zero())
        throw std::invalid_argument("coordinate change needs a_1 != 0 (permute coordinates first)");
    return a;
}

}  // namespace

CoordinateChange::CoordinateChange(Direction a)
    : a_(std::move(checked(a))), forward_(forward_rows(a_)), inverse_(inverse_rows(a_)) {}

LinearMap change_of_coordinates_map(const Direction& a, unsigned long max_degree, std::uint32_t n) {
    CoordinateChange cc(a);
    return cc.forward().materialize(max_degree, std::max<std::uint32_t>(n, static_cast<std::uint32_t>(a.size())));
}

namespace {

// Correction on one line (fixed exponents away from position 1): coefficients c_p,
// p in [P0, 2 P0), whose image under exp(n B_1) matches d exactly on [0, P0).
std::vector<CRat> line_correction(const std::vector<CRat>& d, const Int& n, unsigned P0) {
    // plain Taylor coefficients D_i = d_i / i!
    std::vector<CRat> D(P0);
    for (std::size_t i = 0; i < d.size() && i < P0; ++i) D[i] = d[i] * Rat(Int(1), factorial(i));
    const Rat nr(n);
    // S(z) = (1 + z/n)^{-P0} truncated
    std::vector<Rat> S(P0);
    for (unsigned t = 0; t < P0; ++t) {
        Rat coef = Rat(binomial(P0 + t - 1, t)) / rat_pow(nr, t);
        S[t] = (t % 2) ? Rat(-coef) : coef;
    }
    const Rat scale = Rat(1) / rat_pow(nr, P0);
    std::vector<CRat> G(P0);
    for (unsigned i = 0; i < P0; ++i) {
        if (D[i].is_zero()) continue;
        for (unsigned t = 0; i + t < P0; ++t) G[i + t] += D[i] * S[t];
    }
    for (auto& g : G) g *= scale;
    // H_r = sum_{q >= r} G_q C(q, r) (-n)^{q-r}; c_{P0 + r} = (P0 + r)! H_r
    std::vector<Rat> negpow(P0);
    negpow[0] = 1;
    for (unsigned i = 1; i < P0; ++i) negpow[i] = negpow[i - 1] * (-nr);
    std::vector<CRat> c(P0);
    for (unsigned r = 0; r < P0; ++r) {
        CRat h;
        for (unsigned q = r; q < P0; ++q)
            if (!G[q].is_zero()) h += G[q] * (Rat(binomial(q, r)) * negpow[q - r]);
        c[r] = h * Rat(factorial(P0 + r));
    }
    return c;
}

CoeffVector correction(const CoeffVector& d, const Int& n, unsigned P0) {
    std::map<MultiIndex, std::vector<CRat>> lines;
    for (const auto& [k, c] : d.terms()) {
        auto& line = lines[k.with_exponent(1, 0)];
        std::uint32_t p = k.exponent(1);
        if (line.size() <= p) line.resize(p + 1);
        line[p] = c;
    }
    CoeffVector out;
    for (const auto& [tail, line] : lines) {
        std::vector<CRat> c = line_correction(line, n, P0);
        for (unsigned r = 0; r < P0; ++r) out.add(tail.with_exponent(1, P0 + r), c[r]);
    }
    return out;
}

}  // namespace

WitnessResult transitivity_witness(const BlockVector& u, const BlockVector& vtarget, const Direction& a,
                                   const WeightTable& v, const Rat& eps, const WitnessBudget& budget) {
    if (sgn(eps) <= 0) throw std::invalid_argument("witness tolerance must be positive");
    if (u.size() != vtarget.size() || u.empty()) throw std::invalid_argument("u and vtarget must have equal block length");
    WitnessResult res;
    bool have_best = false;
    std::optional<Rat> last_err;  // error of the latest attempt, empty if it left the horizon

    auto attempt = [&](const Int& n, BlockVector w, unsigned offset) -> bool {
        ++res.attempts;
        last_err.reset();
        Bounds dist, resid;
        try {
            dist = block_l2_norm(w - u, v);
            resid = block_l2_norm(exp_shift(scale(a, CRat(Rat(n))), w) - vtarget, v);
        } catch (const std::out_of_range&) {
            return false;  // correction left the weight horizon
        }
        Rat err = std::max(dist.hi, resid.hi);
        last_err = err;
        if (!have_best || err < res.best_error) {
            have_best = true;
            res.best_error = err;
            res.n = n;
            res.w = w;
            res.distance = dist;
            res.residual = resid;
            res.offset = offset;
        }
        if (dist.hi < eps && resid.hi < eps) {
            res.found = true;
            res.n = n;
            res.w = std::move(w);
            res.distance = dist;
            res.residual = resid;
            res.offset = offset;
            return true;
        }
        return false;
    };

    if (budget.min_iterations <= 1 && attempt(Int(1), u, 0)) return res;
    bool zero_dir = std::all_of(a.begin(), a.end(), [](const CRat& x) { return x.is_zero(); });
    if (zero_dir) return res;
    CoordinateChange cc(a);
    BlockVector up, tp;
    for (std::size_t c = 0; c < u.size(); ++c) {
        up.push_back(cc.inverse().apply(u[c]));
        tp.push_back(cc.inverse().apply(vtarget[c]));
    }
    for (Int n = 10; n <= budget.max_iterations; n *= 10) {
        if (n < budget.min_iterations) continue;
        const Direction first{CRat(Rat(n))};
        BlockVector d;
        unsigned J = 0;
        for (std::size_t c = 0; c < u.size(); ++c) {
            d.push_back(tp[c] - exp_shift(first, up[c]));
            for (const auto& [k, x] : d.back().terms()) J = std::max<unsigned>(J, k.exponent(1));
        }
        Rat prev_err;
        int worse = 0;
        bool have_prev = false;
        for (unsigned P0 = J + 1; P0 <= budget.max_offset; ++P0) {
            BlockVector w;
            for (std::size_t c = 0; c < u.size(); ++c) w.push_back(cc.forward().apply(up[c] + correction(d[c], n, P0)));
            if (attempt(n, std::move(w), P0)) return res;
            if (!last_err) break;
            Rat err = *last_err;
            if (have_prev && !(err < prev_err)) {
                if (++worse >= 3) break;
            } else {
                worse = 0;
            }
            prev_err = err;
            have_prev = true;
        }
    }
    return res;
}

}  // namespace uh
