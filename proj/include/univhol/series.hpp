#pragma once

#include "univhol/arith.hpp"
#include "univhol/coeffs.hpp"
#include "univhol/weights.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace uh {

// Entire map C^n -> C^m given by coefficient vectors in the basis Z^K/K!.
struct EntireMapApprox {
    std::uint32_t dim = 1;
    std::vector<CoeffVector> components;
    std::string provenance;
};

using Point = std::vector<CRat>;

std::vector<CRat> eval(const EntireMapApprox& f, const Point& z);
CRat eval(const CoeffVector& alpha, const Point& z);
// Floating-point evaluation (long double) for estimates only.
std::vector<std::complex<long double>> eval_approx(const EntireMapApprox& f,
                                                   const std::vector<std::complex<long double>>& z);

struct TermRecord {
    MultiIndex idx;
    std::size_t rank = 0;
    Rat radius;
    Rat weight;
    bool inner_ok = false;  // |z| <= R_k: sup |P_k| <= v_k phi(0)
    bool outer_ok = false;  // |z| > R_k: |P_k(z)| <= 2^{-k} phi(|z|) and 2^{-k} <= v_k
};

struct GrowthCertificate {
    bool ok = true;
    std::vector<TermRecord> records;
    Bounds alpha_norm;  // block l2 of l1(v)
    std::optional<MultiIndex> failing_index;
    std::string failing_branch;  // "inner" or "outer"
    std::string phi_spec;
};

// Per-term certificate of ||f(z)|| <= ||alpha|| phi(||z||) for every z. Throws
// std::invalid_argument when v was not built against phi, std::out_of_range beyond horizon.
GrowthCertificate slow_growth_certificate(const EntireMapApprox& f, const WeightTable& v, const GrowthFunction& phi);

struct GrowthSampleReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_ratio = 0;  // max of |f(z)| / (factor phi(|z|)), floating-point estimate
};

// Checks |f(z)| <= factor * phi(|z|) at pseudo-random points with |z| <= rmax, soundly:
// a point only passes if a certified upper bound of |f(z)| is below a certified lower
// bound of the right-hand side.
GrowthSampleReport sample_growth_bound(const EntireMapApprox& f, const GrowthFunction& phi, const Rat& factor,
                                       std::size_t count, std::uint64_t seed, const Rat& rmax);

struct DistanceEstimate {
    double value = 0;
    std::vector<double> rho;  // sampled sup of |f - g| per radius
    std::size_t samples_per_radius = 0;
};

// sum_n 2^{-n} min(rho_n, 1) with rho_n a sampled sup over the ball of radius R_n (an under-estimate).
DistanceEstimate compact_open_distance(const EntireMapApprox& f, const EntireMapApprox& g,
                                       const std::vector<double>& radii, std::size_t samples, std::uint64_t seed);
std::vector<double> default_radii(std::size_t count);

// f_a(z) = F(a_1/a_j z, ..., z, ..., a_n/a_j z); j is 1-based. Rejects |a_j| not maximal.
EntireMapApprox diagonal_restriction(const EntireMapApprox& F, const Point& a, std::uint32_t j);

nlohmann::json to_json(const EntireMapApprox& f);
EntireMapApprox map_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GrowthCertificate& c);

}  // namespace uh
