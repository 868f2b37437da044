#pragma once

#include "univhol/arith.hpp"
#include "univhol/coeffs.hpp"
#include "univhol/multiindex.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uh {

// Raised when a growth function cannot certify phi(r) >= c r^d from some radius on.
class DominationError : public std::runtime_error {
public:
    DominationError(unsigned long degree, Rat constant, const std::string& why);
    unsigned long degree;
    Rat constant;
};

// Continuous increasing positive phi with certified domination radii.
class GrowthFunction {
public:
    virtual ~GrowthFunction() = default;
    // Canonical textual form, e.g. "exp:1,1"; also used as provenance tag of weight tables.
    virtual std::string spec() const = 0;
    // Rational enclosure of phi(r), r >= 0.
    virtual Bounds eval(const Rat& r) const = 0;
    // R with phi(r) >= c r^d for every r >= R; checked with verify_domination before returning.
    virtual Rat dominating_radius(unsigned long d, const Rat& c) const = 0;
    // Certified closed-form check of phi(r) >= c r^d on [R, infinity).
    virtual bool verify_domination(unsigned long d, const Rat& c, const Rat& R) const = 0;
    virtual nlohmann::json to_json() const;

    Rat phi0_lower() const { return eval(Rat(0)).lo; }
};

// phi(r) = exp(c * r^beta), c > 0, 0 < beta <= 1.
class ExpPowerGrowth final : public GrowthFunction {
public:
    ExpPowerGrowth(Rat c, Rat beta);
    std::string spec() const override;
    Bounds eval(const Rat& r) const override;
    Rat dominating_radius(unsigned long d, const Rat& c) const override;
    bool verify_domination(unsigned long d, const Rat& c, const Rat& R) const override;

private:
    Rat c_, beta_;
};

// phi(r) = exp(c * log^2(1 + r)), c > 0.
class LogSquaredGrowth final : public GrowthFunction {
public:
    explicit LogSquaredGrowth(Rat c);
    std::string spec() const override;
    Bounds eval(const Rat& r) const override;
    Rat dominating_radius(unsigned long d, const Rat& c) const override;
    bool verify_domination(unsigned long d, const Rat& c, const Rat& R) const override;

private:
    Rat c_;
};

// User-supplied phi: piecewise linear through increasing sample points, plus explicit
// domination triples (d, c, R) meaning phi(r) >= c r^d for r >= R.
class TableGrowth final : public GrowthFunction {
public:
    struct Domination {
        unsigned long degree;
        Rat constant;
        Rat radius;
    };
    TableGrowth(std::vector<std::pair<Rat, Rat>> points, std::vector<Domination> certificates);
    std::string spec() const override;
    Bounds eval(const Rat& r) const override;
    Rat dominating_radius(unsigned long d, const Rat& c) const override;
    bool verify_domination(unsigned long d, const Rat& c, const Rat& R) const override;
    nlohmann::json to_json() const override;

private:
    std::vector<std::pair<Rat, Rat>> points_;
    std::vector<Domination> certs_;
};

// "exp:c,beta" or "logsq:c"; throws std::invalid_argument.
std::unique_ptr<GrowthFunction> parse_growth(const std::string& spec);
// Accepts {"spec": "..."} or {"table": [[r, phi], ...], "certificates": [[d, c, R], ...]}.
std::unique_ptr<GrowthFunction> growth_from_json(const nlohmann::json& j);

// Sampled monotonicity: enclosures at the given increasing radii never contradict increase.
bool sampled_increasing(const GrowthFunction& phi, const std::vector<Rat>& radii);

enum class Enumeration { Deglex, Prime, Custom };

struct WeightEntry {
    MultiIndex idx;
    Rat v;
    std::optional<Rat> radius;
};

// Ordered weight table. For built tables the enumeration rank of entry i is i + 1.
class WeightTable {
public:
    WeightTable() = default;
    WeightTable(Enumeration e, std::uint32_t dim, std::string phi_spec);

    void push(WeightEntry e);
    Enumeration enumeration() const { return enum_; }
    std::uint32_t dim() const { return dim_; }
    const std::string& phi_spec() const { return phi_spec_; }
    const std::vector<WeightEntry>& entries() const { return entries_; }
    std::size_t horizon() const { return entries_.size(); }

    bool contains(const MultiIndex& k) const { return pos_.count(k) != 0; }
    // Throws std::out_of_range when k is beyond the horizon.
    const WeightEntry& entry(const MultiIndex& k) const;
    const Rat& weight(const MultiIndex& k) const { return entry(k).v; }
    std::size_t rank(const MultiIndex& k) const;

private:
    Enumeration enum_ = Enumeration::Custom;
    std::uint32_t dim_ = 0;
    std::string phi_spec_;
    std::vector<WeightEntry> entries_;
    std::map<MultiIndex, std::size_t> pos_;
};

// Certified upper bound of sup_{|z| <= R} |z^K| / K! over the Euclidean ball of C^n.
Rat monomial_sup_on_ball(const MultiIndex& k, const Rat& R);

// Rounds x up to `digits` significant decimal digits.
Rat round_up_significant(const Rat& x, unsigned digits);

// Weight construction with radii R_k and the growth law; n is the dimension for Deglex
// and ignored for Prime.
WeightTable build_slow_growth_weight(const GrowthFunction& phi, Enumeration e, std::uint32_t n,
                                     std::size_t horizon);

struct OrderCheck {
    bool ok = true;
    // (predecessor, index) of the first decreasing covering pair.
    std::optional<std::pair<MultiIndex, MultiIndex>> violation;
};

OrderCheck check_order_condition(const WeightTable& v);

// w_K = sum_j |a_K^j| v_j + margin, then made nondecreasing along the first position.
WeightTable build_quasiconjugate_weight(const WeightTable& v, const LinearMap& F, const Rat& margin = Rat(1));

nlohmann::json to_json(const WeightTable& v);
WeightTable weights_from_json(const nlohmann::json& j);

std::string to_string(Enumeration e);
Enumeration enumeration_from_string(const std::string& s);

}  // namespace uh
