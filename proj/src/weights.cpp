#include "univhol/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uh {

DominationError::DominationError(unsigned long d, Rat c, const std::string& why)
    : std::runtime_error("no domination certificate for degree " + std::to_string(d) + ", constant " +
                         to_string(c) + ": " + why),
      degree(d),
      constant(std::move(c)) {}

nlohmann::json GrowthFunction::to_json() const { return {{"spec", spec()}}; }

namespace {

double log_upper_double(const Rat& c) {
    if (sgn(c) <= 0) return -std::numeric_limits<double>::infinity();
    return to_double(log_bounds(c).hi);
}

Rat positive_radius(Rat r) {
    if (sgn(r) <= 0) return Rat(1, 10);
    return r;
}

// Widens a candidate radius until the certified check passes.
template <class Verify>
Rat settle_radius(Rat candidate, unsigned long d, const Rat& c, Verify verify) {
    candidate = positive_radius(ceil_decimal(candidate, 1));
    for (int i = 0; i < 400; ++i) {
        if (verify(candidate)) return candidate;
        candidate = ceil_decimal(candidate * Rat(101, 100) + Rat(1, 10), 1);
    }
    throw DominationError(d, c, "certified check did not settle");
}

}  // namespace

ExpPowerGrowth::ExpPowerGrowth(Rat c, Rat beta) : c_(std::move(c)), beta_(std::move(beta)) {
    if (sgn(c_) <= 0) throw std::invalid_argument("exp growth needs c > 0");
    if (sgn(beta_) <= 0 || beta_ > 1) throw std::invalid_argument("exp growth needs 0 < beta <= 1");
}

std::string ExpPowerGrowth::spec() const { return "exp:" + to_string(c_) + "," + to_string(beta_); }

Bounds ExpPowerGrowth::eval(const Rat& r) const {
    if (sgn(r) < 0) throw std::domain_error("growth functions are evaluated at r >= 0");
    Bounds p = pow_bounds(r, beta_);
    return {exp_bounds(c_ * p.lo).lo, exp_bounds(c_ * p.hi).hi};
}

bool ExpPowerGrowth::verify_domination(unsigned long d, const Rat& c, const Rat& R) const {
    if (sgn(c) <= 0) return true;
    if (sgn(R) <= 0) return false;
    Bounds p = pow_bounds(R, beta_);
    Rat margin = c_ * p.lo - Rat(static_cast<long>(d)) * log_bounds(R).hi - log_bounds(c).hi;
    if (sgn(margin) < 0) return false;
    // h(r) = c r^beta - d log r - log C is increasing once c beta r^beta >= d.
    return d == 0 || c_ * beta_ * p.lo >= Rat(static_cast<long>(d));
}

Rat ExpPowerGrowth::dominating_radius(unsigned long d, const Rat& c) const {
    if (sgn(c) <= 0) return Rat(1, 10);
    const double cd = to_double(c_), bd = to_double(beta_), lc = log_upper_double(c);
    const double dd = static_cast<double>(d);
    auto h = [&](double r) { return cd * std::pow(r, bd) - dd * std::log(r) - lc; };
    double root = 0;
    if (d == 0) {
        root = lc <= 0 ? 0.0 : std::pow(lc / cd, 1.0 / bd);
    } else {
        double lo = std::pow(dd / (cd * bd), 1.0 / bd);
        if (h(lo) >= 0) {
            root = lo;
        } else {
            double hi = 2 * lo + 1;
            while (h(hi) < 0) hi *= 2;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                (h(mid) < 0 ? lo : hi) = mid;
            }
            root = hi;
        }
    }
    return settle_radius(from_double(root), d, c, [&](const Rat& R) { return verify_domination(d, c, R); });
}

LogSquaredGrowth::LogSquaredGrowth(Rat c) : c_(std::move(c)) {
    if (sgn(c_) <= 0) throw std::invalid_argument("log-squared growth needs c > 0");
}

std::string LogSquaredGrowth::spec() const { return "logsq:" + to_string(c_); }

Bounds LogSquaredGrowth::eval(const Rat& r) const {
    if (sgn(r) < 0) throw std::domain_error("growth functions are evaluated at r >= 0");
    Bounds u = log_bounds(Rat(1) + r);
    return {exp_bounds(c_ * u.lo * u.lo).lo, exp_bounds(c_ * u.hi * u.hi).hi};
}

bool LogSquaredGrowth::verify_domination(unsigned long d, const Rat& c, const Rat& R) const {
    if (sgn(c) <= 0) return true;
    if (sgn(R) <= 0) return false;
    // With u = log(1+r) >= log r: c u^2 - d u - log C >= 0 beyond the vertex suffices.
    Rat u = log_bounds(Rat(1) + R).lo;
    Rat dd(static_cast<long>(d));
    if (2 * c_ * u < dd) return false;
    return sgn(c_ * u * u - dd * u - log_bounds(c).hi) >= 0;
}

Rat LogSquaredGrowth::dominating_radius(unsigned long d, const Rat& c) const {
    if (sgn(c) <= 0) return Rat(1, 10);
    const double cd = to_double(c_), lc = std::max(0.0, log_upper_double(c));
    const double dd = static_cast<double>(d);
    double u = std::max(dd / (2 * cd), (dd + std::sqrt(dd * dd + 4 * cd * lc)) / (2 * cd));
    Rat start = exp_bounds(from_double(u)).hi - 1;
    return settle_radius(start, d, c, [&](const Rat& R) { return verify_domination(d, c, R); });
}

TableGrowth::TableGrowth(std::vector<std::pair<Rat, Rat>> points, std::vector<Domination> certificates)
    : points_(std::move(points)), certs_(std::move(certificates)) {
    if (points_.empty() || sgn(points_.front().first) != 0)
        throw std::invalid_argument("growth table must start at r = 0");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (sgn(points_[i].second) <= 0) throw std::invalid_argument("growth table values must be positive");
        if (i && (points_[i].first <= points_[i - 1].first || points_[i].second <= points_[i - 1].second))
            throw std::invalid_argument("growth table must be strictly increasing");
    }
    if (certs_.empty()) throw std::invalid_argument("growth table without domination certificates is refused");
    for (const auto& c : certs_)
        if (sgn(c.constant) <= 0 || sgn(c.radius) <= 0)
            throw std::invalid_argument("domination certificates need positive constant and radius");
}

nlohmann::json TableGrowth::to_json() const {
    nlohmann::json pts = nlohmann::json::array(), certs = nlohmann::json::array();
    for (const auto& [r, v] : points_) pts.push_back({to_string(r), to_string(v)});
    for (const auto& c : certs_) certs.push_back({c.degree, to_string(c.constant), to_string(c.radius)});
    return {{"table", pts}, {"certificates", certs}};
}

std::string TableGrowth::spec() const { return "table:" + to_json().dump(); }

Bounds TableGrowth::eval(const Rat& r) const {
    if (sgn(r) < 0) throw std::domain_error("growth functions are evaluated at r >= 0");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (r <= points_[i].first) {
            const auto& [r0, v0] = points_[i - 1];
            const auto& [r1, v1] = points_[i];
            Rat v = v0 + (v1 - v0) * (r - r0) / (r1 - r0);
            return {v, v};
        }
    }
    if (r == points_.back().first) return {points_.back().second, points_.back().second};
    throw std::out_of_range("radius " + to_string(r) + " beyond the growth table");
}

bool TableGrowth::verify_domination(unsigned long d, const Rat& c, const Rat& R) const {
    if (sgn(c) <= 0) return true;
    for (const auto& cert : certs_) {
        if (cert.degree < d || R < cert.radius) continue;
        if (cert.degree == d) {
            if (cert.constant >= c) return true;
        } else if (rat_pow(R, cert.degree - d) * cert.constant >= c) {
            return true;
        }
    }
    return false;
}

Rat TableGrowth::dominating_radius(unsigned long d, const Rat& c) const {
    if (sgn(c) <= 0) return Rat(1, 10);
    std::optional<Rat> best;
    for (const auto& cert : certs_) {
        if (cert.degree < d) continue;
        Rat cand = cert.radius;
        if (cert.degree == d) {
            if (cert.constant < c) continue;
        } else {
            Rat root = pow_bounds(c / cert.constant, Rat(1, static_cast<long>(cert.degree - d))).hi;
            cand = std::max(cand, ceil_decimal(root, 1));
        }
        if (!verify_domination(d, c, cand)) continue;
        if (!best || cand < *best) best = cand;
    }
    if (!best) throw DominationError(d, c, "table certificates do not cover this degree/constant");
    return *best;
}

std::unique_ptr<GrowthFunction> parse_growth(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("growth spec '" + spec + "' lacks a family prefix");
    std::string fam = spec.substr(0, colon), args = spec.substr(colon + 1);
    if (fam == "exp") {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("exp growth expects 'exp:c,beta'");
        return std::make_unique<ExpPowerGrowth>(parse_rat(args.substr(0, comma)), parse_rat(args.substr(comma + 1)));
    }
    if (fam == "logsq") return std::make_unique<LogSquaredGrowth>(parse_rat(args));
    if (fam == "table") return growth_from_json(nlohmann::json::parse(args));
    throw std::invalid_argument("unknown growth family '" + fam + "'");
}

std::unique_ptr<GrowthFunction> growth_from_json(const nlohmann::json& j) {
    if (j.contains("spec")) return parse_growth(j.at("spec").get<std::string>());
    std::vector<std::pair<Rat, Rat>> pts;
    for (const auto& p : j.at("table"))
        pts.emplace_back(parse_rat(p.at(0).get<std::string>()), parse_rat(p.at(1).get<std::string>()));
    std::vector<TableGrowth::Domination> certs;
    if (j.contains("certificates"))
        for (const auto& c : j.at("certificates"))
            certs.push_back({c.at(0).get<unsigned long>(), parse_rat(c.at(1).get<std::string>()),
                             parse_rat(c.at(2).get<std::string>())});
    return std::make_unique<TableGrowth>(std::move(pts), std::move(certs));
}

bool sampled_increasing(const GrowthFunction& phi, const std::vector<Rat>& radii) {
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) return false;
        if (phi.eval(radii[i]).hi < phi.eval(radii[i - 1]).lo) return false;
        if (sgn(phi.eval(radii[i - 1]).lo) <= 0) return false;
    }
    return true;
}

WeightTable::WeightTable(Enumeration e, std::uint32_t dim, std::string phi_spec)
    : enum_(e), dim_(dim), phi_spec_(std::move(phi_spec)) {}

void WeightTable::push(WeightEntry e) {
    if (sgn(e.v) <= 0) throw std::invalid_argument("weights must be positive");
    if (!pos_.emplace(e.idx, entries_.size()).second)
        throw std::invalid_argument("duplicate weight entry " + e.idx.str());
    entries_.push_back(std::move(e));
}

const WeightEntry& WeightTable::entry(const MultiIndex& k) const {
    auto it = pos_.find(k);
    if (it == pos_.end()) throw std::out_of_range("index " + k.str() + " beyond the weight horizon");
    return entries_[it->second];
}

std::size_t WeightTable::rank(const MultiIndex& k) const {
    auto it = pos_.find(k);
    if (it == pos_.end()) throw std::out_of_range("index " + k.str() + " beyond the weight horizon");
    return it->second + 1;
}

Rat monomial_sup_on_ball(const MultiIndex& k, const Rat& R) {
    if (sgn(R) <= 0) throw std::invalid_argument("ball radius must be positive");
    unsigned long deg = k.degree();
    if (deg == 0) return Rat(1);
    // maximizer |z_i|^2 = k_i/|K| R^2
    Rat prod = 1;
    for (const auto& [p, e] : k.entries()) prod *= rat_pow(ratio(e, deg), e);
    Rat s = sqrt_bounds(prod).hi;
    return rat_pow(R, deg) * s / Rat(k.factorial());
}

Rat round_up_significant(const Rat& x, unsigned digits) {
    if (sgn(x) <= 0) return x;
    long e = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 10));
    long shift = static_cast<long>(digits) - 1 - e;
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rat scale = shift >= 0 ? Rat(p) : Rat(Int(1), p);
    Rat r = Rat(ceil_rat(x * scale)) / scale;
    r.canonicalize();
    return r;
}

WeightTable build_slow_growth_weight(const GrowthFunction& phi, Enumeration e, std::uint32_t n,
                                     std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    if (e == Enumeration::Custom) throw std::invalid_argument("weights are built along deglex or prime enumeration");
    if (e == Enumeration::Deglex && n == 0) throw std::invalid_argument("deglex weights need a dimension");
    WeightTable table(e, e == Enumeration::Deglex ? n : 0, phi.spec());
    const Rat phi0 = phi.phi0_lower();
    Rat prev = 1;
    Int two_k = 1;
    for (std::size_t k = 1; k <= horizon; ++k) {
        two_k *= 2;
        MultiIndex idx = e == Enumeration::Deglex ? deglex_unrank(Int(static_cast<unsigned long>(k)), n)
                                                  : prime_unrank(Int(static_cast<unsigned long>(k)));
        Rat c = Rat(two_k) * monomial_sup_on_ball(idx, Rat(1));
        Rat R = phi.dominating_radius(idx.degree(), c);
        Rat v = std::max(Rat(monomial_sup_on_ball(idx, R) / phi0), Rat(Int(1), two_k));
        v = std::max(round_up_significant(v, 8), prev);
        prev = v;
        table.push({idx, v, R});
    }
    return table;
}

OrderCheck check_order_condition(const WeightTable& v) {
    for (const auto& e : v.entries()) {
        for (const auto& [pos, exp] : e.idx.entries()) {
            auto pred = e.idx.step(pos, -1);
            if (!pred || !v.contains(*pred)) continue;
            if (v.weight(*pred) > e.v) return {false, std::make_pair(*pred, e.idx)};
        }
    }
    return {};
}

WeightTable build_quasiconjugate_weight(const WeightTable& v, const LinearMap& F, const Rat& margin) {
    if (sgn(margin) <= 0) throw std::invalid_argument("margin must be positive");
    std::vector<std::pair<MultiIndex, Rat>> raw;
    for (const auto& [k, col] : F.columns()) {
        Rat s = 0;
        for (const auto& [j, a] : col.terms()) {
            if (!v.contains(j)) throw std::out_of_range("column " + k.str() + " reaches " + j.str() + " beyond horizon");
            s += modulus_upper(a) * v.weight(j);
        }
        raw.emplace_back(k, s + margin);
    }
    // order by exponent at the first position so predecessors are settled first
    std::stable_sort(raw.begin(), raw.end(),
                     [](const auto& a, const auto& b) { return a.first.exponent(1) < b.first.exponent(1); });
    std::map<MultiIndex, Rat> w;
    for (auto& [k, val] : raw) {
        if (auto pred = k.step(1, -1); pred && w.count(*pred)) val = std::max(val, w.at(*pred));
        w[k] = val;
    }
    WeightTable out(Enumeration::Custom, v.dim(), "");
    for (const auto& e : v.entries())
        if (auto it = w.find(e.idx); it != w.end()) out.push({e.idx, it->second, std::nullopt});
    for (const auto& [k, val] : w)
        if (!out.contains(k)) out.push({k, val, std::nullopt});
    return out;
}

std::string to_string(Enumeration e) {
    switch (e) {
        case Enumeration::Deglex: return "deglex";
        case Enumeration::Prime: return "prime";
        default: return "custom";
    }
}

Enumeration enumeration_from_string(const std::string& s) {
    if (s == "deglex") return Enumeration::Deglex;
    if (s == "prime") return Enumeration::Prime;
    if (s == "custom") return Enumeration::Custom;
    throw std::invalid_argument("unknown enumeration '" + s + "'");
}

nlohmann::json to_json(const WeightTable& v) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : v.entries()) {
        nlohmann::json je = {{"idx", to_json(e.idx)["idx"]}, {"v", to_string(e.v)}};
        if (e.radius) je["R"] = to_string(*e.radius);
        entries.push_back(je);
    }
    return {{"enum", to_string(v.enumeration())}, {"dim", v.dim()}, {"phi", v.phi_spec()}, {"entries", entries}};
}

WeightTable weights_from_json(const nlohmann::json& j) {
    WeightTable t(enumeration_from_string(j.at("enum").get<std::string>()), j.value("dim", 0u),
                  j.value("phi", std::string()));
    for (const auto& e : j.at("entries")) {
        std::optional<Rat> R;
        if (e.contains("R")) R = parse_rat(e.at("R").get<std::string>());
        t.push({multiindex_from_json(e.at("idx")), parse_rat(e.at("v").get<std::string>()), R});
    }
    return t;
}

}  // namespace uh
