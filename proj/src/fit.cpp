#include "univhol/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace uh {

cplx ArnoldiPoly::operator()(cplx z) const {
    if (c.empty()) return 0;
    std::vector<cplx> q{cplx(1)};
    cplx sum = c[0];
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        cplx v = z * q[k];
        for (std::size_t j = 0; j <= k; ++j) v -= H[k][j] * q[j];
        q.push_back(v / H[k][k + 1]);
        sum += c[k + 1] * q[k + 1];
    }
    return sum;
}

namespace {

CRat exact(cplx z) { return {from_double(z.real()), from_double(z.imag())}; }

}  // namespace

CoeffVector ArnoldiPoly::to_coeffs() const {
    // monomial coefficients (plain z^d) of each basis polynomial
    std::vector<std::vector<CRat>> q{{CRat(1)}};
    std::vector<CRat> p(c.size());
    if (!c.empty()) p[0] = exact(c[0]);
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        std::vector<CRat> v(k + 2);
        for (std::size_t d = 0; d <= k; ++d) v[d + 1] = q[k][d];
        for (std::size_t j = 0; j <= k; ++j) {
            CRat h = exact(H[k][j]);
            if (h.is_zero()) continue;
            for (std::size_t d = 0; d < q[j].size(); ++d) v[d] -= h * q[j][d];
        }
        CRat inv = CRat(1) / exact(H[k][k + 1]);
        for (auto& x : v) x = x * inv;
        CRat ck = exact(c[k + 1]);
        for (std::size_t d = 0; d < v.size(); ++d) p[d] += ck * v[d];
        q.push_back(std::move(v));
    }
    CoeffVector out;
    for (std::size_t d = 0; d < p.size(); ++d)
        if (!p[d].is_zero())
            out.set(d == 0 ? MultiIndex() : MultiIndex::unit(1, static_cast<std::uint32_t>(d)), p[d] * Rat(factorial(d)));
    return out;
}

cplx eval_complex(const CoeffVector& f, cplx z) {
    unsigned long deg = f.max_degree();
    std::vector<cplx> a(deg + 1, 0.0);
    for (const auto& [k, c] : f.terms()) {
        if (k.max_position() > 1) throw std::invalid_argument("one-variable polynomial expected");
        Rat inv(Int(1), k.factorial());
        a[k.degree()] = {to_double(c.re * inv), to_double(c.im * inv)};
    }
    cplx s = 0;
    for (std::size_t d = a.size(); d-- > 0;) s = s * z + a[d];
    return s;
}

std::vector<cplx> boundary_grid(const Hypercube& q, unsigned per_edge) {
    if (q.center.size() != 2) throw std::invalid_argument("squares in C expected");
    if (per_edge == 0) throw std::invalid_argument("grid needs at least one point per edge");
    const double cx = to_double(q.center[0]), cy = to_double(q.center[1]), w = to_double(q.half_width);
    const cplx corners[4] = {{cx - w, cy - w}, {cx + w, cy - w}, {cx + w, cy + w}, {cx - w, cy + w}};
    std::vector<cplx> pts;
    pts.reserve(4 * per_edge);
    for (int s = 0; s < 4; ++s) {
        cplx a = corners[s], b = corners[(s + 1) % 4];
        for (unsigned t = 0; t < per_edge; ++t) pts.push_back(a + (b - a) * (static_cast<double>(t) / per_edge));
    }
    return pts;
}

double boundary_grid_error(const Hypercube& q, const std::function<cplx(cplx)>& diff, unsigned per_edge) {
    double e = 0;
    for (cplx z : boundary_grid(q, per_edge)) e = std::max(e, std::abs(diff(z)));
    return e;
}

FitResult fit_polynomial_on_union(const std::vector<FitPiece>& pieces, const std::optional<FitPiece>& retained,
                                  const ConvexityCertificate& certificate, const FitOptions& opt) {
    if (!certificate.ok) throw std::invalid_argument("fitting needs a passing polynomial-convexity certificate");
    if (pieces.empty() && !retained) throw std::invalid_argument("nothing to fit");
    if (opt.degrees.empty()) throw std::invalid_argument("empty degree schedule");
    if (opt.oversampling < 4) throw std::invalid_argument("oversampling factor must be at least 4");
    const unsigned dmax = *std::max_element(opt.degrees.begin(), opt.degrees.end());
    const std::size_t need = static_cast<std::size_t>(opt.oversampling) * (dmax + 1);

    // sample points: boundary grids of the retained square and of (a subset of) the pieces
    std::vector<cplx> z;
    std::vector<cplx> f;
    std::size_t retained_count = 0;
    if (retained) {
        unsigned per_edge = static_cast<unsigned>(std::max<std::size_t>(2, need / 8 + 1));
        for (cplx p : boundary_grid(retained->cube, per_edge)) {
            z.push_back(p);
            f.push_back(retained->target(p));
        }
        retained_count = z.size();
    }
    if (!pieces.empty()) {
        std::size_t budget = opt.max_samples > z.size() ? opt.max_samples - z.size() : 0;
        std::vector<std::size_t> order(pieces.size());
        std::iota(order.begin(), order.end(), 0);
        std::size_t use = pieces.size();
        unsigned per_edge = 1;
        if (4 * pieces.size() > budget) {
            use = std::max<std::size_t>(1, budget / 4);
            std::mt19937_64 rng(opt.seed);
            std::shuffle(order.begin(), order.end(), rng);
            order.resize(use);
            std::sort(order.begin(), order.end());
        } else {
            per_edge = static_cast<unsigned>(std::clamp<std::size_t>(budget / (4 * pieces.size()), 1, 16));
            per_edge = std::max<unsigned>(per_edge, static_cast<unsigned>((need + 4 * use - 1) / (4 * use)));
        }
        for (std::size_t i : order)
            for (cplx p : boundary_grid(pieces[i].cube, per_edge)) {
                z.push_back(p);
                f.push_back(pieces[i].target(p));
            }
    }
    const std::size_t M = z.size();
    FitResult res;
    if (M < need) {
        res.failure = "not enough sample points for the oversampling factor";
        return res;
    }

    // Arnoldi basis up to dmax on the sample points
    Eigen::MatrixXcd Q(M, dmax + 1);
    std::vector<std::vector<cplx>> H(dmax);
    Q.col(0).setOnes();
    const double sqrtM = std::sqrt(static_cast<double>(M));
    for (unsigned k = 0; k < dmax; ++k) {
        Eigen::VectorXcd v = Q.col(k);
        for (std::size_t i = 0; i < M; ++i) v[i] *= z[i];
        H[k].assign(k + 2, 0.0);
        for (int pass = 0; pass < 2; ++pass)
            for (unsigned j = 0; j <= k; ++j) {
                cplx h = Q.col(j).dot(v) / static_cast<double>(M);
                H[k][j] += h;
                v -= h * Q.col(j);
            }
        double nv = v.norm() / sqrtM;
        if (!(nv > 0)) {
            res.failure = "Arnoldi breakdown: too few distinct sample points";
            return res;
        }
        H[k][k + 1] = nv;
        Q.col(k + 1) = v / nv;
    }
    Eigen::Map<const Eigen::VectorXcd> F(f.data(), static_cast<Eigen::Index>(M));

    std::vector<unsigned> degrees = opt.degrees;
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    double best = INFINITY;
    for (unsigned d : degrees) {
        Eigen::VectorXcd c = Q.leftCols(d + 1).householderQr().solve(F);
        Eigen::VectorXcd r = Q.leftCols(d + 1) * c - F;
        FitAttempt at;
        at.degree = d;
        double piece_res = 0, ret_res = 0;
        for (std::size_t i = 0; i < M; ++i) {
            double& slot = i < retained_count ? ret_res : piece_res;
            slot = std::max(slot, std::abs(r[i]));
        }
        at.sample_residual = std::max(piece_res, ret_res);
        ArnoldiPoly p;
        p.H.assign(H.begin(), H.begin() + d);
        p.c.assign(c.data(), c.data() + c.size());
        bool candidate = at.sample_residual <= opt.tol;
        double piece_err = piece_res, ret_err = ret_res;
        if (candidate) {
            piece_err = 0;
            for (const auto& pc : pieces)
                piece_err = std::max(piece_err, boundary_grid_error(pc.cube, [&](cplx w) { return p(w) - pc.target(w); },
                                                                    opt.validation_per_edge));
            ret_err = retained ? boundary_grid_error(retained->cube, [&](cplx w) { return p(w) - retained->target(w); },
                                                     opt.validation_per_edge)
                               : 0.0;
            at.validated = std::max(piece_err, ret_err);
        }
        res.history.push_back(at);
        double score = at.validated.value_or(at.sample_residual);
        if (score < best) {
            best = score;
            res.poly = p;
            res.degree = d;
            res.piece_error = piece_err;
            res.retained_error = ret_err;
            res.errors_are_lower_bounds = !at.validated.has_value();
        }
        if (at.validated && *at.validated <= opt.tol) {
            res.ok = true;
            res.poly = std::move(p);
            res.degree = d;
            res.piece_error = piece_err;
            res.retained_error = ret_err;
            res.errors_are_lower_bounds = false;
            return res;
        }
    }
    res.failure = "no degree up to " + std::to_string(dmax) + " reaches tolerance";
    return res;
}

FitResult fit_exact_or_lsq(const std::vector<FitPiece>& pieces, const std::vector<CoeffVector>& exact_targets,
                           const std::optional<FitPiece>& retained, const std::optional<CoeffVector>& retained_exact,
                           const ConvexityCertificate& certificate, const FitOptions& opt) {
    if (!certificate.ok) throw std::invalid_argument("fitting needs a passing polynomial-convexity certificate");
    if (exact_targets.size() != pieces.size()) throw std::invalid_argument("one exact target per piece expected");
    std::optional<CoeffVector> common = retained_exact;
    bool agree = true;
    for (const auto& t : exact_targets) {
        if (!common)
            common = t;
        else if (!(*common == t)) {
            agree = false;
            break;
        }
    }
    if (agree && common) {
        FitResult r;
        r.ok = true;
        r.exact = common;
        r.degree = static_cast<unsigned>(common->max_degree());
        return r;
    }
    return fit_polynomial_on_union(pieces, retained, certificate, opt);
}

}  // namespace uh
