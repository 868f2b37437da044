#include "univhol/series.hpp"

#include "mpfr_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace uh {

using detail::Mp;

CRat eval(const CoeffVector& alpha, const Point& z) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, CRat> powers;
    auto power = [&](std::uint32_t pos, std::uint32_t e) -> const CRat& {
        auto key = std::make_pair(pos, e);
        if (auto it = powers.find(key); it != powers.end()) return it->second;
        CRat base = pos <= z.size() ? z[pos - 1] : CRat();
        return powers.emplace(key, pow(base, e)).first->second;
    };
    CRat sum;
    for (const auto& [k, c] : alpha.terms()) {
        CRat term = c;
        for (const auto& [pos, e] : k.entries()) {
            term = term * power(pos, e);
            if (term.is_zero()) break;
        }
        if (term.is_zero()) continue;
        sum += term * Rat(Int(1), k.factorial());
    }
    return sum;
}

std::vector<CRat> eval(const EntireMapApprox& f, const Point& z) {
    std::vector<CRat> out;
    out.reserve(f.components.size());
    for (const auto& c : f.components) out.push_back(eval(c, z));
    return out;
}

namespace {

struct ApproxTerm {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> idx;
    std::complex<long double> coef;  // alpha_K / K!
};

std::vector<ApproxTerm> approx_terms(const CoeffVector& a) {
    std::vector<ApproxTerm> out;
    for (const auto& [k, c] : a.terms()) {
        Rat inv(Int(1), k.factorial());
        out.push_back({k.entries(), {static_cast<long double>(to_double(c.re * inv)),
                                     static_cast<long double>(to_double(c.im * inv))}});
    }
    return out;
}

std::complex<long double> eval_terms(const std::vector<ApproxTerm>& terms,
                                     const std::vector<std::complex<long double>>& z) {
    std::complex<long double> s = 0;
    for (const auto& t : terms) {
        std::complex<long double> p = t.coef;
        for (const auto& [pos, e] : t.idx) {
            std::complex<long double> base = pos <= z.size() ? z[pos - 1] : 0;
            for (std::uint32_t i = 0; i < e; ++i) p *= base;
        }
        s += p;
    }
    return s;
}

}  // namespace

std::vector<std::complex<long double>> eval_approx(const EntireMapApprox& f,
                                                   const std::vector<std::complex<long double>>& z) {
    std::vector<std::complex<long double>> out;
    for (const auto& c : f.components) out.push_back(eval_terms(approx_terms(c), z));
    return out;
}

GrowthCertificate slow_growth_certificate(const EntireMapApprox& f, const WeightTable& v, const GrowthFunction& phi) {
    if (v.phi_spec() != phi.spec())
        throw std::invalid_argument("weight table was built for growth '" + v.phi_spec() + "', not '" + phi.spec() + "'");
    GrowthCertificate cert;
    cert.phi_spec = phi.spec();
    std::map<std::size_t, MultiIndex> support;  // by enumeration rank
    for (const auto& comp : f.components)
        for (const auto& [k, c] : comp.terms()) support.emplace(v.rank(k), k);
    const Rat phi0 = phi.phi0_lower();
    for (const auto& [rank, k] : support) {
        const WeightEntry& e = v.entry(k);
        if (!e.radius) throw std::invalid_argument("weight entry " + k.str() + " carries no radius");
        TermRecord rec;
        rec.idx = k;
        rec.rank = rank;
        rec.radius = *e.radius;
        rec.weight = e.v;
        rec.inner_ok = e.v * phi0 >= monomial_sup_on_ball(k, *e.radius);
        Int two_k;
        mpz_ui_pow_ui(two_k.get_mpz_t(), 2, rank);
        Rat c = Rat(two_k) * monomial_sup_on_ball(k, Rat(1));
        rec.outer_ok = phi.verify_domination(k.degree(), c, *e.radius) && Rat(Int(1), two_k) <= e.v;
        if (cert.ok && !(rec.inner_ok && rec.outer_ok)) {
            cert.ok = false;
            cert.failing_index = k;
            cert.failing_branch = rec.inner_ok ? "outer" : "inner";
        }
        cert.records.push_back(std::move(rec));
    }
    Rat lo2 = 0, hi2 = 0;
    for (const auto& comp : f.components) {
        Bounds b{Rat(0), Rat(0)};
        for (const auto& [k, c] : comp.terms()) {
            Bounds m = modulus_bounds(c);
            b.lo += v.weight(k) * m.lo;
            b.hi += v.weight(k) * m.hi;
        }
        lo2 += b.lo * b.lo;
        hi2 += b.hi * b.hi;
    }
    cert.alpha_norm = {sqrt_bounds(lo2).lo, sqrt_bounds(hi2).hi};
    return cert;
}

GrowthSampleReport sample_growth_bound(const EntireMapApprox& f, const GrowthFunction& phi, const Rat& factor,
                                       std::size_t count, std::uint64_t seed, const Rat& rmax) {
    struct UpperTerm {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> idx;
        Rat abs_hi;
        Int kfact;
    };
    std::vector<std::vector<UpperTerm>> comps;
    for (const auto& comp : f.components) {
        std::vector<UpperTerm> ts;
        for (const auto& [k, c] : comp.terms()) ts.push_back({k.entries(), modulus_bounds(c).hi, k.factorial()});
        comps.push_back(std::move(ts));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double rmax_d = to_double(rmax);
    GrowthSampleReport rep;
    Mp acc, term, tmp, total, absz;
    for (std::size_t s = 0; s < count; ++s) {
        // direction in C^n, radius uniform or log-uniform
        std::vector<double> g(2 * f.dim);
        double nrm = 0;
        for (auto& x : g) {
            x = gauss(rng);
            nrm += x * x;
        }
        nrm = std::sqrt(nrm);
        double r = (s % 2 == 0) ? rmax_d * unif(rng) : std::exp(std::log(1e-3) + unif(rng) * (std::log(rmax_d) - std::log(1e-3)));
        Point z(f.dim);
        Rat norm2 = 0;
        for (std::uint32_t i = 0; i < f.dim; ++i) {
            z[i] = CRat(from_double(r * g[2 * i] / nrm), from_double(r * g[2 * i + 1] / nrm));
            norm2 += z[i].norm2();
        }
        Rat rhs = factor * phi.eval(sqrt_bounds(norm2).lo).lo;
        // certified upper bound of sum_c (sum_K |alpha_K| |z|^K / K!)^2
        std::vector<Rat> absz_hi(f.dim);
        for (std::uint32_t i = 0; i < f.dim; ++i) absz_hi[i] = modulus_bounds(z[i]).hi;
        mpfr_set_ui(total.get(), 0, MPFR_RNDU);
        for (const auto& ts : comps) {
            mpfr_set_ui(acc.get(), 0, MPFR_RNDU);
            for (const auto& t : ts) {
                mpfr_set_q(term.get(), t.abs_hi.get_mpq_t(), MPFR_RNDU);
                for (const auto& [pos, e] : t.idx) {
                    if (pos > f.dim) {
                        mpfr_set_ui(term.get(), 0, MPFR_RNDU);
                        break;
                    }
                    mpfr_set_q(absz.get(), absz_hi[pos - 1].get_mpq_t(), MPFR_RNDU);
                    mpfr_pow_ui(tmp.get(), absz.get(), e, MPFR_RNDU);
                    mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDU);
                }
                mpfr_div_z(term.get(), term.get(), t.kfact.get_mpz_t(), MPFR_RNDU);
                mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDU);
            }
            mpfr_sqr(acc.get(), acc.get(), MPFR_RNDU);
            mpfr_add(total.get(), total.get(), acc.get(), MPFR_RNDU);
        }
        mpfr_sqrt(total.get(), total.get(), MPFR_RNDU);
        bool pass = mpfr_cmp_q(total.get(), rhs.get_mpq_t()) <= 0;
        double ratio = 0;
        if (!pass) {
            // triangle-inequality bound too coarse: use exact values
            Rat sq = 0;
            for (const CRat& w : eval(f, z)) sq += w.norm2();
            Rat exact_hi = sqrt_bounds(sq).hi;
            pass = exact_hi <= rhs;
            ratio = sgn(rhs) > 0 ? to_double(exact_hi / rhs) : INFINITY;
        } else if (sgn(rhs) > 0) {
            mpfr_div_q(tmp.get(), total.get(), rhs.get_mpq_t(), MPFR_RNDU);
            ratio = mpfr_get_d(tmp.get(), MPFR_RNDU);
        }
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.samples;
        if (!pass) ++rep.violations;
    }
    return rep;
}

std::vector<double> default_radii(std::size_t count) {
    std::vector<double> r(count);
    for (std::size_t i = 0; i < count; ++i) r[i] = static_cast<double>(i + 1);
    return r;
}

DistanceEstimate compact_open_distance(const EntireMapApprox& f, const EntireMapApprox& g,
                                       const std::vector<double>& radii, std::size_t samples, std::uint64_t seed) {
    if (f.components.size() != g.components.size() || f.dim != g.dim)
        throw std::invalid_argument("maps have different shapes");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("radii must be increasing");
    std::vector<std::vector<ApproxTerm>> diff;
    for (std::size_t c = 0; c < f.components.size(); ++c) diff.push_back(approx_terms(f.components[c] - g.components[c]));
    DistanceEstimate est;
    est.samples_per_radius = samples;
    const std::uint32_t n = f.dim;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * (ri + 1));
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double sup = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            std::vector<double> v(2 * n);
            double nrm = 0;
            for (auto& x : v) {
                x = gauss(rng);
                nrm += x * x;
            }
            nrm = std::sqrt(nrm);
            double u = unif(rng);
            double r = (s % 2 == 0) ? radii[ri] : radii[ri] * std::pow(u, 1.0 / (2.0 * n));
            std::vector<std::complex<long double>> z(n);
            for (std::uint32_t i = 0; i < n; ++i) z[i] = {r * v[2 * i] / nrm, r * v[2 * i + 1] / nrm};
            long double sq = 0;
            for (const auto& terms : diff) sq += std::norm(eval_terms(terms, z));
            sup = std::max(sup, static_cast<double>(std::sqrt(sq)));
        }
        est.rho.push_back(sup);
        est.value += std::ldexp(std::min(sup, 1.0), -static_cast<int>(ri + 1));
    }
    return est;
}

EntireMapApprox diagonal_restriction(const EntireMapApprox& F, const Point& a, std::uint32_t j) {
    if (j == 0 || j > a.size()) throw std::invalid_argument("restriction index out of range");
    const CRat& aj = a[j - 1];
    if (aj.is_zero()) throw std::invalid_argument("a_j must be nonzero");
    for (const auto& ai : a)
        if (ai.norm2() > aj.norm2()) throw std::invalid_argument("|a_j| is not the maximal modulus");
    std::vector<CRat> rel;
    for (const auto& ai : a) rel.push_back(ai / aj);
    EntireMapApprox out;
    out.dim = 1;
    out.provenance = F.provenance.empty() ? "diagonal restriction" : F.provenance + " | diagonal restriction";
    for (const auto& comp : F.components) {
        CoeffVector r;
        for (const auto& [k, c] : comp.terms()) {
            if (k.max_position() > a.size()) continue;  // coordinates outside a vanish
            CRat t = c;
            for (const auto& [pos, e] : k.entries()) t = t * pow(rel[pos - 1], e);
            unsigned long d = k.degree();
            t = t * ratio(factorial(d), k.factorial());
            r.add(d == 0 ? MultiIndex() : MultiIndex::unit(1, static_cast<std::uint32_t>(d)), t);
        }
        out.components.push_back(std::move(r));
    }
    return out;
}

nlohmann::json to_json(const EntireMapApprox& f) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : f.components) comps.push_back(to_json(c));
    return {{"dim", f.dim}, {"provenance", f.provenance}, {"basis", "Z^K/K!"}, {"components", comps}};
}

EntireMapApprox map_from_json(const nlohmann::json& j) {
    EntireMapApprox f;
    f.dim = j.value("dim", 1u);
    f.provenance = j.value("provenance", std::string());
    if (j.contains("components")) {
        for (const auto& c : j.at("components")) f.components.push_back(coeffs_from_json(c));
    } else {
        f.components.push_back(coeffs_from_json(j));
    }
    return f;
}

nlohmann::json to_json(const GrowthCertificate& c) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : c.records)
        recs.push_back({{"idx", to_json(r.idx)["idx"]},
                        {"rank", r.rank},
                        {"R", to_string(r.radius)},
                        {"v", to_string(r.weight)},
                        {"inner", r.inner_ok},
                        {"outer", r.outer_ok}});
    nlohmann::json j = {{"ok", c.ok},
                        {"phi", c.phi_spec},
                        {"alpha_norm_upper", to_string(c.alpha_norm.hi)},
                        {"records", recs}};
    if (c.failing_index) {
        j["failing_index"] = to_json(*c.failing_index)["idx"];
        j["failing_branch"] = c.failing_branch;
    }
    return j;
}

}  // namespace uh
