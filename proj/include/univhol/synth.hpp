#pragma once

#include "univhol/arith.hpp"
#include "univhol/cubes.hpp"
#include "univhol/density.hpp"
#include "univhol/fit.hpp"
#include "univhol/series.hpp"
#include "univhol/shiftdyn.hpp"
#include "univhol/weights.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace uh {

// Largest admissible delta (the cube lemma needs delta < 1/2).
Rat delta_cap();

// delta with |psi(z1) - psi(z2)| < 1/(2l) whenever z1 in Q(0,l+1) and z2 in Q(z1, delta)
// (max-norm), from a certified bound of the gradient on Q(0,l+2); capped by delta_cap().
Rat continuity_modulus(const EntireMapApprox& psi, unsigned long l);

struct ScheduleEntry {
    unsigned long l = 1;
    std::size_t j = 1;  // 1-based target index
    Rat delta;
    Int N, N0, R0;
};

struct StageSpec {
    std::size_t k = 1;
    Int base;  // n_k
    std::size_t entry = 0;
    unsigned long l = 1;
    std::size_t j = 1;
    Rat delta;
    Int N;
    Rat eps;
};

struct SynthesisSchedule {
    std::uint32_t n = 1;
    std::vector<EntireMapApprox> targets;
    EntireMapApprox base;  // g
    Int R;
    std::vector<ScheduleEntry> entries;
    DensityFamily density;
    std::vector<StageSpec> stages;
};

// eps_k = min(1/(2R 2^k), 1/(4 l_max 2^k)).
Rat default_epsilon(std::size_t k, const Int& R, unsigned long l_max);

// levels: the (l, j) pairs in enumeration order; the first `stage_count` base times become stages.
SynthesisSchedule build_schedule(std::uint32_t n, std::vector<EntireMapApprox> targets, EntireMapApprox base,
                                 const Int& R, const std::vector<std::pair<unsigned long, std::size_t>>& levels,
                                 std::size_t stage_count);

struct ScheduleCheck {
    bool ok = true;
    std::string violation;
    Rat total;               // sum of all eps
    std::vector<Rat> tails;  // sum_{i >= k} eps_i
};
ScheduleCheck validate_schedule(const SynthesisSchedule& s);

// Cube family of stage k (1-based): the shell around n_k of half-width N.
CubeFamily stage_family(const SynthesisSchedule& s, std::size_t k);
// Central cube retained at stage k: Q(0,R) for k = 1, Q(0, n_{k-1} + N_{k-1}) afterwards.
Int retained_radius(const SynthesisSchedule& s, std::size_t k);

// Scalar map on C: exact polynomial or least-squares fit.
struct StageMap {
    std::optional<CoeffVector> exact;
    ArnoldiPoly poly;
    cplx operator()(cplx z) const;
    CoeffVector coeffs() const;
};

struct StageReport {
    std::size_t k = 0;
    std::string family;
    std::string cube_count;
    unsigned fit_degree = 0;
    double piece_error = 0;
    double retained_error = 0;
    bool lower_bounds = false;
    Rat eps;
    double cumulative = 0;
    unsigned grid_per_edge = 0;
    std::size_t coverage_checked = 0;
    std::size_t coverage_found = 0;
    bool ok = false;
    std::vector<FitAttempt> attempts;
};

struct GeometricOptions {
    FitOptions fit;
    std::size_t coverage_samples = 100;
    std::uint64_t seed = 1;
};

struct GeometricResult {
    bool ok = false;
    std::vector<StageMap> maps;  // per target component, final stage
    EntireMapApprox F;
    std::vector<StageReport> stages;
    std::size_t completed = 0;
    double base_error = 0;  // grid sup |F - g| on Q(0,R)
    std::vector<double> stage_errors;  // grid sup of |F - psi(. - a)| over the cubes of each completed stage
    std::string failure;
};

// Stages 1..L; n = 1 only. Every stage requires a verified separation certificate.
GeometricResult run_geometric(const SynthesisSchedule& s, std::size_t L, const GeometricOptions& opt);

struct HitTime {
    std::size_t stage = 0;
    Int m;
    double error = 0;   // grid sup over the boundary of Q(0,l)
    bool verified = false;
};

struct HitTimeReport {
    std::vector<Rat> theta;
    std::size_t j = 0;
    unsigned long l = 0;
    std::vector<HitTime> hits;
    bool gaps_ok = true;   // consecutive m differ by >= 2N
    Rat predicted_density; // 1/S
    std::vector<std::pair<std::uint64_t, Rat>> trace;
};

// Hit times of F along theta from the stage cubes of level l and target j, each re-checked by
// exact evaluation on the boundary grid of Q(0,l).
HitTimeReport hit_time_report(const EntireMapApprox& F, const SynthesisSchedule& s, std::size_t completed,
                              const std::vector<Rat>& theta, unsigned long l, std::size_t j, unsigned per_edge = 16);

struct WitnessRow {
    std::vector<Rat> theta;
    std::optional<unsigned long> s;
    double error = 0;
};

// For each theta: smallest s <= a_max with grid sup_{Q(0,k)} |F(z + s theta) - psi(z)| < 1/b.
std::vector<WitnessRow> appendix_density_witness(const EntireMapApprox& F, const EntireMapApprox& psi,
                                                 unsigned long a_max, unsigned long b, unsigned long k,
                                                 const std::vector<std::vector<Rat>>& thetas, unsigned per_edge = 8);

struct SpectralTarget {
    std::size_t direction = 0;
    BlockVector beta;
    Rat rho;
    Rat eps;
};

struct Visit {
    std::size_t target = 0;
    std::size_t direction = 0;
    Int n;
    Rat sup_upper;  // certified upper bound of the sup over the ball
    Rat eps;
    bool verified = false;
    unsigned witness_attempts = 0;
};

struct SpectralOptions {
    WitnessBudget budget{Int("1000000000000"), 60, Int(1)};
    unsigned retries = 6;
    Rat first_tolerance = Rat(1, 1000);
};

struct SpectralResult {
    bool ok = false;
    BlockVector alpha;
    Bounds alpha_norm;
    std::vector<Visit> visits;
    std::optional<GrowthCertificate> certificate;
    std::string failure;
};

// Certified upper bound of sup_{|z| <= rho} |g(z)| (Euclidean over components).
Rat sup_on_ball_upper(const BlockVector& g, const Rat& rho);

SpectralResult synth_spectral(const std::vector<Direction>& directions, const std::vector<SpectralTarget>& targets,
                              const WeightTable& v, const GrowthFunction& phi, std::uint32_t n,
                              const SpectralOptions& opt = {});
// Re-checks every visit of a result against alpha by exact evaluation.
bool verify_visits(const SpectralResult& r, const std::vector<Direction>& directions,
                   const std::vector<SpectralTarget>& targets);

nlohmann::json to_json(const SynthesisSchedule& s);
SynthesisSchedule schedule_from_config(const nlohmann::json& j, std::size_t* stages = nullptr);
nlohmann::json to_json(const StageReport& r);
nlohmann::json to_json(const GeometricResult& r);
nlohmann::json to_json(const HitTimeReport& r);
nlohmann::json to_json(const SpectralResult& r);

}  // namespace uh
