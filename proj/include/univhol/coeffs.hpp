#pragma once

#include "univhol/arith.hpp"
#include "univhol/multiindex.hpp"

#include <json.hpp>

#include <map>
#include <vector>

namespace uh {

// Finitely supported coefficients alpha_K in the basis Z^K/K!. Zero values are never stored.
class CoeffVector {
public:
    using Map = std::map<MultiIndex, CRat>;

    CoeffVector() = default;
    static CoeffVector unit(const MultiIndex& k, const CRat& c = CRat(1));

    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    CRat get(const MultiIndex& k) const;
    void set(const MultiIndex& k, const CRat& c);
    void add(const MultiIndex& k, const CRat& c);
    unsigned long max_degree() const;
    std::uint32_t max_position() const;

    CoeffVector& operator+=(const CoeffVector& o);
    CoeffVector& operator-=(const CoeffVector& o);
    CoeffVector& operator*=(const CRat& s);

    bool operator==(const CoeffVector& o) const { return terms_ == o.terms_; }

private:
    Map terms_;
};

CoeffVector operator+(CoeffVector a, const CoeffVector& b);
CoeffVector operator-(CoeffVector a, const CoeffVector& b);
CoeffVector operator*(const CRat& s, CoeffVector a);

using BlockVector = std::vector<CoeffVector>;

BlockVector operator+(const BlockVector& a, const BlockVector& b);
BlockVector operator-(const BlockVector& a, const BlockVector& b);

// Sparse linear map on coefficient space, stored by columns: column(K) = image of the unit at K.
class LinearMap {
public:
    void set_column(const MultiIndex& k, CoeffVector col) { cols_[k] = std::move(col); }
    bool has_column(const MultiIndex& k) const { return cols_.count(k) != 0; }
    const CoeffVector& column(const MultiIndex& k) const;
    const std::map<MultiIndex, CoeffVector>& columns() const { return cols_; }
    // Throws std::out_of_range if alpha has support outside the stored columns.
    CoeffVector apply(const CoeffVector& alpha) const;

private:
    std::map<MultiIndex, CoeffVector> cols_;
};

nlohmann::json to_json(const CoeffVector& a);
CoeffVector coeffs_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BlockVector& a);
BlockVector block_from_json(const nlohmann::json& j);

}  // namespace uh
