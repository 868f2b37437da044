#pragma once

#include "univhol/arith.hpp"
#include "univhol/cubes.hpp"
#include "univhol/series.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace uh {

using cplx = std::complex<double>;
using ScalarFn = std::function<cplx(cplx)>;

// One-variable polynomial in the orthogonal basis produced by Arnoldi on the sample
// points: q_0 = 1, H(k+1,k) q_{k+1} = z q_k - sum_{j<=k} H(j,k) q_j, p = sum c_k q_k.
struct ArnoldiPoly {
    std::vector<std::vector<cplx>> H;  // H[k] holds column k, entries 0..k+1
    std::vector<cplx> c;
    unsigned degree() const { return c.empty() ? 0 : static_cast<unsigned>(c.size() - 1); }
    cplx operator()(cplx z) const;
    // Exact monomial coefficients in the basis z^d/d! (doubles read as exact rationals).
    CoeffVector to_coeffs() const;
};

struct FitPiece {
    Hypercube cube;  // in R^2 = C
    ScalarFn target;
};

struct FitOptions {
    double tol = 1e-2;
    std::vector<unsigned> degrees{4, 8, 16, 32, 64};
    unsigned oversampling = 4;
    std::size_t max_samples = 40000;
    unsigned validation_per_edge = 64;
    std::uint64_t seed = 1;
};

struct FitAttempt {
    unsigned degree = 0;
    double sample_residual = 0;  // max residual on the least-squares points (a lower bound of the sup)
    std::optional<double> validated;  // grid sup over all pieces, when computed
};

struct FitResult {
    bool ok = false;
    ArnoldiPoly poly;
    std::optional<CoeffVector> exact;  // set when the targets agree with one exact polynomial
    unsigned degree = 0;
    double piece_error = 0;     // grid sup over the pieces, or the screening lower bound on failure
    double retained_error = 0;
    bool errors_are_lower_bounds = false;
    std::vector<FitAttempt> history;
    std::string failure;
};

// Sup over the boundary grid (per_edge points per side) of |p(z) - target(z)| on a square;
// by the maximum principle this is the grid version of the sup over the closed square.
double boundary_grid_error(const Hypercube& q, const std::function<cplx(cplx)>& diff, unsigned per_edge);
std::vector<cplx> boundary_grid(const Hypercube& q, unsigned per_edge);

// Least-squares Runge fitting on a union of squares in C with degree escalation. Requires a
// passing convexity certificate for the union (Oka-Weil precondition).
FitResult fit_polynomial_on_union(const std::vector<FitPiece>& pieces, const std::optional<FitPiece>& retained,
                                  const ConvexityCertificate& certificate, const FitOptions& opt);

// Same, when every target is an exact polynomial: reproduces them exactly (error 0) if
// they coincide, otherwise falls back to least squares.
FitResult fit_exact_or_lsq(const std::vector<FitPiece>& pieces, const std::vector<CoeffVector>& exact_targets,
                           const std::optional<FitPiece>& retained, const std::optional<CoeffVector>& retained_exact,
                           const ConvexityCertificate& certificate, const FitOptions& opt);

cplx eval_complex(const CoeffVector& f, cplx z);

}  // namespace uh
