#include "univhol/coeffs.hpp"

#include <algorithm>
#include <stdexcept>

namespace uh {

CoeffVector CoeffVector::unit(const MultiIndex& k, const CRat& c) {
    CoeffVector v;
    v.set(k, c);
    return v;
}

CRat CoeffVector::get(const MultiIndex& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? CRat() : it->second;
}

void CoeffVector::set(const MultiIndex& k, const CRat& c) {
    if (c.is_zero()) terms_.erase(k);
    else terms_[k] = c;
}

void CoeffVector::add(const MultiIndex& k, const CRat& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

unsigned long CoeffVector::max_degree() const {
    unsigned long d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.degree());
    return d;
}

std::uint32_t CoeffVector::max_position() const {
    std::uint32_t p = 0;
    for (const auto& [k, c] : terms_) p = std::max(p, k.max_position());
    return p;
}

CoeffVector& CoeffVector::operator+=(const CoeffVector& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
}

CoeffVector& CoeffVector::operator*=(const CRat& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_) c = c * s;
    return *this;
}

CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
CoeffVector operator*(const CRat& s, CoeffVector a) { return a *= s; }

BlockVector operator+(const BlockVector& a, const BlockVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("block vectors of different lengths");
    BlockVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

BlockVector operator-(const BlockVector& a, const BlockVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("block vectors of different lengths");
    BlockVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

const CoeffVector& LinearMap::column(const MultiIndex& k) const {
    auto it = cols_.find(k);
    if (it == cols_.end()) throw std::out_of_range("linear map has no column at " + k.str());
    return it->second;
}

CoeffVector LinearMap::apply(const CoeffVector& alpha) const {
    CoeffVector out;
    for (const auto& [k, c] : alpha.terms()) {
        for (const auto& [j, a] : column(k).terms()) out.add(j, a * c);
    }
    return out;
}

nlohmann::json to_json(const CoeffVector& a) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : a.terms())
        terms.push_back({{"idx", to_json(k)["idx"]}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
    return {{"terms", terms}};
}

CoeffVector coeffs_from_json(const nlohmann::json& j) {
    CoeffVector v;
    for (const auto& t : j.at("terms")) {
        CRat c(parse_rat(t.at("re").get<std::string>()),
               t.contains("im") ? parse_rat(t.at("im").get<std::string>()) : Rat(0));
        v.add(multiindex_from_json(t.at("idx")), c);
    }
    return v;
}

nlohmann::json to_json(const BlockVector& a) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : a) comps.push_back(to_json(c));
    return {{"components", comps}};
}

BlockVector block_from_json(const nlohmann::json& j) {
    BlockVector b;
    for (const auto& c : j.at("components")) b.push_back(coeffs_from_json(c));
    return b;
}

}  // namespace uh
