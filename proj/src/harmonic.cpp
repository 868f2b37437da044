#include "univhol/harmonic.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>

namespace uh {

RPoly RPoly::constant(std::uint32_t n, const Rat& a) {
    RPoly p;
    p.n = n;
    if (sgn(a) != 0) p.c[Exponents(n, 0)] = a;
    return p;
}

RPoly RPoly::variable(std::uint32_t n, std::uint32_t i) {
    if (i == 0 || i > n) throw std::invalid_argument("variable index out of range");
    RPoly p;
    p.n = n;
    Exponents e(n, 0);
    e[i - 1] = 1;
    p.c[e] = 1;
    return p;
}

namespace {

unsigned total(const Exponents& e) {
    unsigned s = 0;
    for (unsigned x : e) s += x;
    return s;
}

void accumulate(std::map<Exponents, Rat>& c, const Exponents& e, const Rat& a) {
    auto [it, fresh] = c.try_emplace(e, a);
    if (!fresh) {
        it->second += a;
        if (sgn(it->second) == 0) c.erase(it);
    } else if (sgn(a) == 0) {
        c.erase(it);
    }
}

}  // namespace

long RPoly::degree() const {
    long d = -1;
    for (const auto& [e, a] : c) d = std::max<long>(d, total(e));
    return d;
}

bool RPoly::is_homogeneous() const {
    if (c.empty()) return true;
    unsigned d = total(c.begin()->first);
    return std::all_of(c.begin(), c.end(), [&](const auto& t) { return total(t.first) == d; });
}

RPoly RPoly::derivative(std::uint32_t l) const {
    if (l == 0 || l > n) throw std::invalid_argument("derivative index out of range");
    RPoly out;
    out.n = n;
    for (const auto& [e, a] : c) {
        if (e[l - 1] == 0) continue;
        Exponents f = e;
        --f[l - 1];
        accumulate(out.c, f, a * e[l - 1]);
    }
    return out;
}

RPoly RPoly::laplacian() const {
    RPoly out;
    out.n = n;
    for (std::uint32_t l = 1; l <= n; ++l) out = out + derivative(l).derivative(l);
    return out;
}

Rat RPoly::eval(const std::vector<Rat>& x) const {
    if (x.size() != n) throw std::invalid_argument("point dimension mismatch");
    Rat s = 0;
    for (const auto& [e, a] : c) {
        Rat t = a;
        for (std::uint32_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

RPoly RPoly::compose(const std::vector<RPoly>& q) const {
    if (q.size() != n) throw std::invalid_argument("one substitution per variable expected");
    const std::uint32_t m = q.empty() ? 0 : q[0].n;
    RPoly out = constant(m, 0);
    for (const auto& [e, a] : c) {
        RPoly t = constant(m, a);
        for (std::uint32_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t = t * q[i];
        out = out + t;
    }
    return out;
}

RPoly RPoly::operator+(const RPoly& o) const {
    RPoly out = *this;
    out.n = std::max(n, o.n);
    for (const auto& [e, a] : o.c) accumulate(out.c, e, a);
    return out;
}

RPoly RPoly::operator-(const RPoly& o) const { return *this + o * Rat(-1); }

RPoly RPoly::operator*(const RPoly& o) const {
    if (n != o.n) throw std::invalid_argument("polynomials in different variable counts");
    RPoly out;
    out.n = n;
    for (const auto& [e, a] : c)
        for (const auto& [f, b] : o.c) {
            Exponents g(n);
            for (std::uint32_t i = 0; i < n; ++i) g[i] = e[i] + f[i];
            accumulate(out.c, g, a * b);
        }
    return out;
}

RPoly RPoly::operator*(const Rat& a) const {
    RPoly out;
    out.n = n;
    if (sgn(a) == 0) return out;
    for (const auto& [e, b] : c) out.c[e] = b * a;
    return out;
}

std::vector<Exponents> monomials(std::uint32_t n, unsigned d) {
    std::vector<Exponents> out;
    if (n == 0) return out;
    Exponents e(n, 0);
    // recursive fill, first variable takes the largest share first
    auto rec = [&](auto&& self, std::uint32_t pos, unsigned left) -> void {
        if (pos + 1 == n) {
            e[pos] = left;
            out.push_back(e);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, d);
    return out;
}

Int harmonic_dimension(std::uint32_t n, unsigned d) {
    Int a = binomial(d + n - 1, n - 1);
    Int b = d >= 2 ? binomial(d + n - 3, n - 1) : Int(0);
    return a - b;
}

std::vector<std::size_t> HarmonicChainBasis::block(unsigned d) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].degree == d) out.push_back(i);
    return out;
}

namespace {

using Mat = std::vector<std::vector<Rat>>;
using Vec = std::vector<Rat>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& A, std::size_t cols) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < A.size(); ++c) {
        std::size_t p = r;
        while (p < A.size() && sgn(A[p][c]) == 0) ++p;
        if (p == A.size()) continue;
        std::swap(A[p], A[r]);
        Rat inv = 1 / A[r][c];
        for (auto& x : A[r]) x *= inv;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == r || sgn(A[i][c]) == 0) continue;
            Rat f = A[i][c];
            for (std::size_t k = c; k < A[i].size(); ++k) A[i][k] -= f * A[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

Mat nullspace(Mat A, std::size_t cols) {
    auto piv = rref(A, cols);
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    Mat out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        Vec v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -A[r][f];
        out.push_back(std::move(v));
    }
    return out;
}

// Particular solution of A y = b with free variables set to 0.
std::optional<Vec> solve(const Mat& A, const Vec& b, std::size_t cols) {
    Mat M = A;
    for (std::size_t i = 0; i < M.size(); ++i) M[i].push_back(b[i]);
    auto piv = rref(M, cols + 1);
    if (!piv.empty() && piv.back() == cols) return std::nullopt;
    Vec y(cols, Rat(0));
    for (std::size_t r = 0; r < piv.size(); ++r) y[piv[r]] = M[r][cols];
    return y;
}

std::size_t rank_of(Mat A, std::size_t cols) { return rref(A, cols).size(); }

struct MonomialSpace {
    std::vector<Exponents> mons;
    std::map<Exponents, std::size_t> pos;
};

MonomialSpace space(std::uint32_t n, unsigned d) {
    MonomialSpace s;
    s.mons = monomials(n, d);
    for (std::size_t i = 0; i < s.mons.size(); ++i) s.pos[s.mons[i]] = i;
    return s;
}

Vec coords(const RPoly& p, const MonomialSpace& s) {
    Vec v(s.mons.size(), Rat(0));
    for (const auto& [e, a] : p.c) v.at(s.pos.at(e)) = a;
    return v;
}

RPoly poly_of(std::uint32_t n, const Vec& v, const MonomialSpace& s) {
    RPoly p;
    p.n = n;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) p.c[s.mons[i]] = v[i];
    return p;
}

// Matrix of a linear operator (polynomial -> polynomial) from degree d to degree d - k.
Mat operator_matrix(std::uint32_t n, const MonomialSpace& from, const MonomialSpace& to,
                    const std::function<RPoly(const RPoly&)>& op) {
    Mat A(to.mons.size(), Vec(from.mons.size(), Rat(0)));
    for (std::size_t c = 0; c < from.mons.size(); ++c) {
        RPoly m;
        m.n = n;
        m.c[from.mons[c]] = 1;
        for (const auto& [e, a] : op(m).c) A[to.pos.at(e)][c] = a;
    }
    return A;
}

Mat multiply(const Mat& A, const Mat& B, std::size_t inner, std::size_t cols) {
    Mat C(A.size(), Vec(cols, Rat(0)));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (sgn(A[i][k]) == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

}  // namespace

HarmonicChainBasis build_chain_basis(std::uint32_t n, unsigned D) {
    if (n < 2) throw std::invalid_argument("harmonic bases need n >= 2");
    HarmonicChainBasis b;
    b.n = n;
    b.D = D;
    std::vector<std::size_t> prev_block;  // element indices of degree d - 1
    for (unsigned d = 0; d <= D; ++d) {
        MonomialSpace sd = space(n, d);
        const std::size_t md = sd.mons.size();
        // harmonic space H_d as columns Hb (monomial coordinates)
        Mat basis_vecs;
        if (d < 2) {
            for (std::size_t i = 0; i < md; ++i) {
                Vec v(md, Rat(0));
                v[i] = 1;
                basis_vecs.push_back(v);
            }
        } else {
            MonomialSpace s2 = space(n, d - 2);
            basis_vecs = nullspace(operator_matrix(n, sd, s2, [](const RPoly& p) { return p.laplacian(); }), md);
        }
        if (Int(static_cast<unsigned long>(basis_vecs.size())) != harmonic_dimension(n, d))
            throw std::logic_error("harmonic space has unexpected dimension at degree " + std::to_string(d));
        const std::size_t h = basis_vecs.size();
        Mat Hb(md, Vec(h, Rat(0)));
        for (std::size_t c = 0; c < h; ++c)
            for (std::size_t r = 0; r < md; ++r) Hb[r][c] = basis_vecs[c][r];
        std::vector<HarmonicElement> block;
        Mat D1Hb;
        MonomialSpace sm;
        if (d > 0) {
            sm = space(n, d - 1);
            Mat D1 = operator_matrix(n, sd, sm, [](const RPoly& p) { return p.derivative(1); });
            D1Hb = multiply(D1, Hb, md, h);
            // extend every chain by a preimage under d/dx_1
            for (std::size_t idx : prev_block) {
                const HarmonicElement& e = b.elements[idx];
                auto y = solve(D1Hb, coords(e.P, sm), h);
                if (!y) throw std::logic_error("d/dx_1 is not onto the harmonic space of degree " + std::to_string(d - 1));
                Vec v(md, Rat(0));
                for (std::size_t c = 0; c < h; ++c)
                    if (sgn((*y)[c]) != 0)
                        for (std::size_t r = 0; r < md; ++r) v[r] += (*y)[c] * Hb[r][c];
                block.push_back({e.i + 1, e.j, d, poly_of(n, v, sd)});
            }
        }
        // new chains from the kernel of d/dx_1 on H_d
        Mat ker = d == 0 ? Mat{Vec{Rat(1)}} : nullspace(D1Hb, h);
        for (const auto& y : ker) {
            Vec v(md, Rat(0));
            for (std::size_t c = 0; c < h; ++c)
                if (sgn(y[c]) != 0)
                    for (std::size_t r = 0; r < md; ++r) v[r] += y[c] * Hb[r][c];
            b.chain_start.push_back(d);
            block.push_back({1, static_cast<unsigned>(b.chain_start.size()), d, poly_of(n, v, sd)});
        }
        if (block.size() != h) throw std::logic_error("chain block size differs from the harmonic dimension");
        prev_block.clear();
        for (auto& e : block) {
            b.index[{e.i, e.j}] = b.elements.size();
            prev_block.push_back(b.elements.size());
            b.elements.push_back(std::move(e));
        }
    }
    return b;
}

BasisCheck check_basis(const HarmonicChainBasis& b) {
    auto fail = [](std::string why) { return BasisCheck{false, std::move(why)}; };
    for (const auto& e : b.elements) {
        const std::string name = "P(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
        if (e.P.is_zero()) return fail(name + " is zero");
        if (!e.P.is_homogeneous() || e.P.degree() != static_cast<long>(e.degree)) return fail(name + " is not homogeneous of its degree");
        if (!e.P.laplacian().is_zero()) return fail(name + " is not harmonic");
        RPoly d1 = e.P.derivative(1);
        if (e.i == 1) {
            if (!d1.is_zero()) return fail(name + " starts a chain but d/dx_1 does not vanish");
        } else if (!b.contains(e.i - 1, e.j) || !(d1 == b.at(e.i - 1, e.j).P)) {
            return fail("d/dx_1 " + name + " differs from its predecessor");
        }
    }
    for (unsigned d = 0; d <= b.D; ++d) {
        auto blk = b.block(d);
        MonomialSpace s = space(b.n, d);
        Mat rows;
        for (auto idx : blk) rows.push_back(coords(b.elements[idx].P, s));
        Int dim = harmonic_dimension(b.n, d);
        if (Int(static_cast<unsigned long>(blk.size())) != dim ||
            Int(static_cast<unsigned long>(rank_of(rows, s.mons.size()))) != dim)
            return fail("degree " + std::to_string(d) + " block is not a basis of the harmonic space");
    }
    return {};
}

HarmonicShiftMatrix shift_matrix(const HarmonicChainBasis& b, unsigned l) {
    if (l == 0 || l > b.n) throw std::invalid_argument("l must lie in 1..n");
    HarmonicShiftMatrix B;
    B.l = l;
    for (unsigned d = 0; d <= b.D; ++d) {
        auto blk = b.block(d);
        if (d == 0) {
            for (auto idx : blk) B.columns[{b.elements[idx].i, b.elements[idx].j}] = {};
            continue;
        }
        auto lower = b.block(d - 1);
        MonomialSpace sm = space(b.n, d - 1);
        Mat A(sm.mons.size(), Vec(lower.size(), Rat(0)));
        for (std::size_t c = 0; c < lower.size(); ++c) {
            Vec v = coords(b.elements[lower[c]].P, sm);
            for (std::size_t r = 0; r < v.size(); ++r) A[r][c] = v[r];
        }
        for (auto idx : blk) {
            const auto& e = b.elements[idx];
            auto y = solve(A, coords(e.P.derivative(l), sm), lower.size());
            if (!y) throw std::logic_error("derivative leaves the span of the lower block");
            HVector col;
            for (std::size_t c = 0; c < lower.size(); ++c)
                if (sgn((*y)[c]) != 0) col[{b.elements[lower[c]].i, b.elements[lower[c]].j}] = (*y)[c];
            B.columns[{e.i, e.j}] = std::move(col);
        }
    }
    return B;
}

HVector apply(const HarmonicShiftMatrix& B, const HVector& a) {
    HVector out;
    for (const auto& [k, x] : a) {
        auto it = B.columns.find(k);
        if (it == B.columns.end()) throw std::out_of_range("vector entry beyond the basis");
        for (const auto& [s, coef] : it->second) {
            Rat& slot = out[s];
            slot += coef * x;
            if (sgn(slot) == 0) out.erase(s);
        }
    }
    return out;
}

MultiIndex chain_key(unsigned i, unsigned j) { return MultiIndex::from_dense({i, j}); }

Rat sphere_sup_upper(const RPoly& P) {
    Rat s = 0;
    for (const auto& [e, a] : P.c) {
        MultiIndex k = MultiIndex::from_dense(e);
        // sup of |x^K| on the unit sphere, via the complex-ball bound of |z^K|/K!
        s += abs(a) * monomial_sup_on_ball(k, Rat(1)) * Rat(k.factorial());
    }
    return s;
}

WeightTable build_harmonic_weight(const HarmonicChainBasis& b, const std::vector<HarmonicShiftMatrix>& B,
                                  const GrowthFunction& phi) {
    WeightTable table(Enumeration::Custom, b.n, phi.spec());
    const Rat phi0 = phi.phi0_lower();
    std::map<HIndex, Rat> w;
    Int two_k = 1;
    // elements are ordered by degree, so the enumeration respects kappa
    for (const auto& e : b.elements) {
        two_k *= 2;
        Rat v = e.degree == 0 ? Rat(1) : Rat(0);
        for (const auto& Bl : B) {
            Rat s = 0;
            for (const auto& [st, a] : Bl.columns.at({e.i, e.j})) s += abs(a) * w.at(st);
            v = std::max(v, s);
        }
        Rat C = sphere_sup_upper(e.P);
        Rat R = phi.dominating_radius(e.degree, Rat(two_k) * C);
        Rat Rd = 1;
        for (unsigned k = 0; k < e.degree; ++k) Rd *= R;
        v = std::max({v, Rat(C * Rd / phi0), Rat(Int(1), two_k)});
        v = round_up_significant(v, 8);
        w[{e.i, e.j}] = v;
        table.push({chain_key(e.i, e.j), v, R});
    }
    return table;
}

Rat hnorm(const HVector& a, const WeightTable& v) {
    Rat s = 0;
    for (const auto& [k, x] : a) s += abs(x) * v.weight(chain_key(k.first, k.second));
    return s;
}

bool check_harmonic_law(const std::vector<HarmonicShiftMatrix>& B, const WeightTable& v) {
    for (const auto& Bl : B)
        for (const auto& [k, col] : Bl.columns) {
            Rat s = 0;
            for (const auto& [st, a] : col) s += abs(a) * v.weight(chain_key(st.first, st.second));
            if (s > v.weight(chain_key(k.first, k.second))) return false;
        }
    return true;
}

RPoly realize(const HarmonicChainBasis& b, const HVector& a) {
    RPoly out = RPoly::constant(b.n, 0);
    for (const auto& [k, x] : a) out = out + b.at(k.first, k.second).P * x;
    return out;
}

HarmonicGrowthReport harmonic_growth_sample(const HarmonicChainBasis& b, const WeightTable& v,
                                            const GrowthFunction& phi, std::size_t vectors, std::size_t points,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coin(0, 1 << 16);
    std::uniform_int_distribution<long> coord(-(1L << 12), 1L << 12);
    const long radii[] = {0, 1, 2, 5, 10, 30, 100};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(radii) - 1);
    HarmonicGrowthReport rep;
    for (std::size_t t = 0; t < vectors; ++t) {
        // alpha = sum +-w_k e_k / v_k with sum w_k <= 1
        std::vector<long> raw(b.elements.size());
        long sum = 0;
        for (auto& r : raw) sum += (r = coin(rng));
        if (sum == 0) continue;
        HVector a;
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (raw[k] == 0) continue;
            const auto& e = b.elements[k];
            Rat wk = ratio(raw[k], sum);
            if (coin(rng) % 2) wk = -wk;
            a[{e.i, e.j}] = wk / v.weight(chain_key(e.i, e.j));
        }
        RPoly P = realize(b, a);
        for (std::size_t p = 0; p < points; ++p) {
            std::vector<Rat> x(b.n);
            Rat scale = ratio(radii[pick(rng)], 1L << 12);
            Rat r2 = 0;
            for (auto& xi : x) {
                xi = Rat(coord(rng)) * scale;
                r2 += xi * xi;
            }
            Rat val = abs(P.eval(x));
            Rat bound = phi.eval(sqrt_bounds(r2).lo).lo;
            ++rep.samples;
            if (val > bound) ++rep.violations;
            rep.max_ratio = std::max(rep.max_ratio, to_double(val) / to_double(bound));
        }
    }
    return rep;
}

nlohmann::json to_json(const RPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, a] : p.c) terms.push_back({{"exponents", e}, {"coef", to_string(a)}});
    return {{"n", p.n}, {"terms", terms}};
}

nlohmann::json to_json(const HarmonicChainBasis& b) {
    nlohmann::json els = nlohmann::json::array();
    for (const auto& e : b.elements)
        els.push_back({{"i", e.i}, {"j", e.j}, {"degree", e.degree}, {"kappa", e.degree + 1}, {"P", to_json(e.P)}});
    nlohmann::json chains = nlohmann::json::array();
    for (std::size_t j = 0; j < b.chain_start.size(); ++j) chains.push_back({{"j", j + 1}, {"start_degree", b.chain_start[j]}});
    return {{"n", b.n}, {"D", b.D}, {"chains", chains}, {"elements", els}};
}

nlohmann::json to_json(const HarmonicShiftMatrix& B) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& [k, col] : B.columns) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [st, a] : col) entries.push_back({{"s", st.first}, {"t", st.second}, {"a", to_string(a)}});
        cols.push_back({{"i", k.first}, {"j", k.second}, {"image", entries}});
    }
    return {{"l", B.l}, {"columns", cols}};
}

}  // namespace uh
