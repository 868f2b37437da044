#include "univhol/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace uh {

Rat delta_cap() { return Rat(12, 25); }

Rat continuity_modulus(const EntireMapApprox& psi, unsigned long l) {
    if (l == 0) throw std::invalid_argument("level must be at least 1");
    const std::uint32_t n = psi.dim;
    // Q(0, l+2) lies in the Euclidean ball of radius (l+2) sqrt(2n)
    const Rat ball = Rat(l + 2) * sqrt_bounds(Rat(2 * n)).hi;
    Rat G = 0;
    for (const auto& comp : psi.components)
        for (std::uint32_t s = 1; s <= n; ++s) {
            const CoeffVector d = shift_backward(comp, s);
            for (const auto& [k, c] : d.terms()) G += modulus_bounds(c).hi * monomial_sup_on_ball(k, ball);
        }
    if (sgn(G) == 0) return delta_cap();
    // a max-norm step delta moves each complex coordinate by at most sqrt(2) delta
    G *= sqrt_bounds(Rat(2)).hi;
    Rat delta = Rat(1) / (Rat(2 * l) * G);
    if (delta >= delta_cap()) return delta_cap();
    Int scale = 1;
    while (floor_rat(delta * Rat(scale)) < 1) scale *= 10;
    return ratio(floor_rat(delta * Rat(scale)), scale);
}

Rat default_epsilon(std::size_t k, const Int& R, unsigned long l_max) {
    Int two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, k);
    Rat a(Int(1), Int(2) * R * two_k);
    Rat b(Int(1), Int(4 * l_max) * two_k);
    return std::min(a, b);
}

SynthesisSchedule build_schedule(std::uint32_t n, std::vector<EntireMapApprox> targets, EntireMapApprox base,
                                 const Int& R, const std::vector<std::pair<unsigned long, std::size_t>>& levels,
                                 std::size_t stage_count) {
    if (targets.empty()) throw std::invalid_argument("schedule needs at least one target");
    if (levels.empty()) throw std::invalid_argument("schedule needs at least one (l, j) pair");
    if (R < 1) throw std::invalid_argument("R must be a positive integer");
    for (const auto& t : targets)
        if (t.dim != n || t.components.size() != base.components.size())
            throw std::invalid_argument("targets must share the dimension and component count of the base map");
    SynthesisSchedule s;
    s.n = n;
    s.R = R;
    s.targets = std::move(targets);
    s.base = std::move(base);
    std::vector<std::pair<long, std::uint64_t>> pairs;
    for (const auto& [l, j] : levels) {
        if (j == 0 || j > s.targets.size()) throw std::invalid_argument("target index out of range");
        for (const auto& e : s.entries)
            if (e.l == l && e.j == j) throw std::invalid_argument("repeated (l, j) pair");
        ScheduleEntry e;
        e.l = l;
        e.j = j;
        e.delta = continuity_modulus(s.targets[j - 1], l);
        ShellMinimums mins = shell_minimums(n, l, e.delta);
        e.N0 = mins.N0;
        e.R0 = mins.R0;
        e.N = mins.N0;
        // (l, 2N) must differ from every earlier pair
        bool clash = true;
        while (clash) {
            clash = false;
            for (const auto& o : s.entries)
                if (o.l == l && o.N == e.N) {
                    clash = true;
                    ++e.N;
                }
        }
        if (!e.N.fits_ulong_p()) throw std::invalid_argument("shell width too large");
        pairs.emplace_back(static_cast<long>(j), 2 * e.N.get_ui());
        s.entries.push_back(e);
    }
    s.density = build_finite_family(pairs);
    // base times: elements p of A_q with p >= R0 + N + R, merged in increasing order
    std::vector<std::pair<Int, std::size_t>> times;
    for (std::size_t q = 0; q < s.entries.size(); ++q) {
        const auto& e = s.entries[q];
        Int floor_p = e.R0 + e.N + R;
        std::uint64_t idx = 0;
        std::size_t taken = 0;
        while (taken < stage_count) {
            Int p(static_cast<unsigned long>(s.density.element(q, idx++)));
            if (p < floor_p) continue;
            times.emplace_back(p, q);
            ++taken;
        }
    }
    std::sort(times.begin(), times.end());
    times.resize(std::min(times.size(), stage_count));
    unsigned long l_max = 1;
    for (const auto& [p, q] : times) l_max = std::max(l_max, s.entries[q].l);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& e = s.entries[times[k].second];
        StageSpec st;
        st.k = k + 1;
        st.base = times[k].first;
        st.entry = times[k].second;
        st.l = e.l;
        st.j = e.j;
        st.delta = e.delta;
        st.N = e.N;
        st.eps = default_epsilon(k + 1, R, l_max);
        s.stages.push_back(st);
    }
    return s;
}

ScheduleCheck validate_schedule(const SynthesisSchedule& s) {
    ScheduleCheck c;
    auto fail = [&](std::string why) {
        c.ok = false;
        c.violation = std::move(why);
        return c;
    };
    for (std::size_t a = 0; a < s.entries.size(); ++a)
        for (std::size_t b = a + 1; b < s.entries.size(); ++b)
            if (s.entries[a].l == s.entries[b].l && s.entries[a].N == s.entries[b].N)
                return fail("pairs (l, 2N) of entries " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                            " coincide");
    c.total = 0;
    for (const auto& st : s.stages) c.total += st.eps;
    c.tails.resize(s.stages.size());
    Rat tail = 0;
    for (std::size_t k = s.stages.size(); k-- > 0;) {
        tail += s.stages[k].eps;
        c.tails[k] = tail;
    }
    if (!(c.total < Rat(1) / Rat(s.R))) return fail("sum of eps is not below 1/R");
    for (std::size_t k = 0; k < s.stages.size(); ++k) {
        const auto& st = s.stages[k];
        const auto& e = s.entries.at(st.entry);
        if (sgn(st.eps) <= 0) return fail("eps_" + std::to_string(k + 1) + " is not positive");
        if (!(c.tails[k] < Rat(1) / Rat(2 * st.l)))
            return fail("tail sum from stage " + std::to_string(k + 1) + " is not below 1/(2 l_k)");
        if (st.base < e.R0 + e.N + s.R) return fail("base time of stage " + std::to_string(k + 1) + " is too small");
        if (k + 1 < s.stages.size()) {
            const auto& nx = s.stages[k + 1];
            if (!(st.base + st.N < nx.base - nx.N))
                return fail("shells of stages " + std::to_string(k + 1) + " and " + std::to_string(k + 2) + " meet");
        }
    }
    return c;
}

CubeFamily stage_family(const SynthesisSchedule& s, std::size_t k) {
    const StageSpec& st = s.stages.at(k - 1);
    return shell_arrangement(s.n, st.l, st.delta, st.base - st.N, st.N);
}

Int retained_radius(const SynthesisSchedule& s, std::size_t k) {
    if (k <= 1) return s.R;
    const StageSpec& prev = s.stages.at(k - 2);
    return prev.base + prev.N;
}

cplx StageMap::operator()(cplx z) const { return exact ? eval_complex(*exact, z) : poly(z); }

CoeffVector StageMap::coeffs() const { return exact ? *exact : poly.to_coeffs(); }

namespace {

std::vector<Rat> sample_theta(std::uint32_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> face(0, 2 * n - 1);
    std::uniform_int_distribution<long> num(-(1L << 20), 1L << 20);
    std::bernoulli_distribution sign;
    std::vector<Rat> th(2 * n);
    for (auto& x : th) x = ratio(num(rng), 1L << 20);
    th[face(rng)] = sign(rng) ? Rat(1) : Rat(-1);
    return th;
}

cplx as_complex(const std::vector<Rat>& x) { return {to_double(x[0]), to_double(x[1])}; }

}  // namespace

GeometricResult run_geometric(const SynthesisSchedule& s, std::size_t L, const GeometricOptions& opt) {
    if (s.n != 1) throw std::invalid_argument("geometric synthesis is implemented for n = 1");
    if (L > s.stages.size()) throw std::invalid_argument("schedule has fewer stages than requested");
    ScheduleCheck check = validate_schedule(s);
    if (!check.ok) throw std::invalid_argument("schedule rejected: " + check.violation);
    GeometricResult res;
    const std::size_t m = s.base.components.size();
    std::vector<StageMap> cur(m);
    for (std::size_t c = 0; c < m; ++c) cur[c].exact = s.base.components[c];
    std::mt19937_64 rng(opt.seed);
    double cumulative = 0;
    for (std::size_t k = 1; k <= L; ++k) {
        const StageSpec& st = s.stages[k - 1];
        StageReport rep;
        rep.k = k;
        rep.eps = st.eps;
        rep.grid_per_edge = opt.fit.validation_per_edge;
        CubeFamily fam = stage_family(s, k);
        rep.family = "shell R=" + fam.R.get_str() + " N=" + fam.N.get_str() + " l=" + std::to_string(st.l) +
                     " delta=" + to_string(st.delta);
        rep.cube_count = fam.cube_count().get_str();
        const Int Lret = retained_radius(s, k);
        ConvexityCertificate cert = certify_poly_convexity(fam, Rat(Lret));
        VerifyReport ver = cert.ok ? verify_certificate(fam, cert.tree, Rat(Lret)) : VerifyReport{false, cert.failure};
        for (std::size_t i = 0; i < opt.coverage_samples; ++i) {
            ++rep.coverage_checked;
            if (containing_cube(sample_theta(s.n, rng), fam)) ++rep.coverage_found;
        }
        if (!ver.ok) {
            res.stages.push_back(rep);
            res.failure = "stage " + std::to_string(k) + ": convexity certificate rejected: " + ver.violation;
            res.maps = cur;
            return res;
        }
        const EntireMapApprox& psi = s.targets[st.j - 1];
        Hypercube ret_cube{{Rat(0), Rat(0)}, Rat(Lret), true};
        FitOptions fo = opt.fit;
        fo.tol = to_double(st.eps) * (1 - 1e-9);
        std::vector<StageMap> next(m);
        bool stage_ok = true;
        for (std::size_t c = 0; c < m && stage_ok; ++c) {
            const CoeffVector& pc = psi.components[c];
            std::vector<FitPiece> pieces;
            pieces.reserve(fam.cubes.size());
            for (const auto& cube : fam.cubes) {
                cplx a = as_complex(cube.center);
                pieces.push_back({cube, [&pc, a](cplx z) { return eval_complex(pc, z - a); }});
            }
            const StageMap prev = cur[c];
            FitPiece retained{ret_cube, [prev](cplx z) { return prev(z); }};
            FitResult fr;
            if (pc.max_degree() == 0 && prev.exact) {
                std::vector<CoeffVector> exact_targets(pieces.size(), pc);  // constants are translation invariant
                fr = fit_exact_or_lsq(pieces, exact_targets, retained, prev.exact, cert, fo);
            } else {
                fr = fit_polynomial_on_union(pieces, retained, cert, fo);
            }
            rep.fit_degree = std::max(rep.fit_degree, fr.degree);
            rep.piece_error = std::max(rep.piece_error, fr.piece_error);
            rep.retained_error = std::max(rep.retained_error, fr.retained_error);
            rep.lower_bounds = rep.lower_bounds || fr.errors_are_lower_bounds;
            rep.attempts.insert(rep.attempts.end(), fr.history.begin(), fr.history.end());
            // success only when the reported errors are within eps as rationals
            stage_ok = fr.ok && from_double(fr.piece_error) <= st.eps && from_double(fr.retained_error) <= st.eps;
            if (fr.exact)
                next[c].exact = fr.exact;
            else
                next[c].poly = fr.poly;
        }
        cumulative += std::max(rep.piece_error, rep.retained_error);
        rep.cumulative = cumulative;
        rep.ok = stage_ok;
        res.stages.push_back(rep);
        if (!stage_ok) {
            res.failure = "stage " + std::to_string(k) + ": fit did not reach eps_k";
            res.maps = cur;
            return res;
        }
        cur = std::move(next);
        res.completed = k;
    }
    res.maps = cur;
    res.F.dim = 1;
    res.F.provenance = "geometric stage " + std::to_string(L);
    for (const auto& mp : cur) res.F.components.push_back(mp.coeffs());
    // final checks of F_L against g and against every completed stage
    const unsigned per_edge = opt.fit.validation_per_edge;
    Hypercube base_cube{{Rat(0), Rat(0)}, Rat(s.R), true};
    for (std::size_t c = 0; c < m; ++c) {
        const CoeffVector& g = s.base.components[c];
        res.base_error = std::max(res.base_error, boundary_grid_error(base_cube, [&](cplx z) {
                                      return cur[c](z) - eval_complex(g, z);
                                  }, per_edge));
    }
    bool ok = from_double(res.base_error) < check.total;
    for (std::size_t k = 1; k <= res.completed; ++k) {
        CubeFamily fam = stage_family(s, k);
        const EntireMapApprox& psi = s.targets[s.stages[k - 1].j - 1];
        double e = 0;
        for (const auto& cube : fam.cubes) {
            cplx a = as_complex(cube.center);
            for (std::size_t c = 0; c < m; ++c)
                e = std::max(e, boundary_grid_error(cube, [&](cplx z) {
                                 return cur[c](z) - eval_complex(psi.components[c], z - a);
                             }, per_edge));
        }
        res.stage_errors.push_back(e);
        ok = ok && from_double(e) < check.tails[k - 1];
    }
    res.ok = ok;
    if (!ok) res.failure = "final map exceeds the error ledger";
    return res;
}

namespace {

// Rational boundary grid of Q(0, r) in C (per_edge points per side).
std::vector<CRat> square_boundary(const Rat& r, unsigned per_edge) {
    std::vector<CRat> pts;
    const CRat corners[4] = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
    for (int s = 0; s < 4; ++s) {
        const CRat& a = corners[s];
        const CRat& b = corners[(s + 1) % 4];
        for (unsigned t = 0; t < per_edge; ++t) {
            Rat f = ratio(static_cast<long>(t), static_cast<long>(per_edge));
            pts.push_back(a + (b - a) * f);
        }
    }
    return pts;
}

// Product grid on the distinguished boundary of Q(0, r) in C^n.
std::vector<Point> polysquare_boundary(std::uint32_t n, const Rat& r, unsigned per_edge) {
    std::vector<CRat> one = square_boundary(r, per_edge);
    std::vector<Point> pts{{}};
    for (std::uint32_t d = 0; d < n; ++d) {
        std::vector<Point> next;
        for (const auto& p : pts)
            for (const auto& z : one) {
                Point q = p;
                q.push_back(z);
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

Point complex_point(const std::vector<Rat>& x) {
    Point p;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) p.emplace_back(x[i], x[i + 1]);
    return p;
}

// Exact grid sup of |F(z + w) - psi(z)|; returns (upper bound as double, all < bound).
std::pair<double, bool> shifted_grid_check(const EntireMapApprox& F, const EntireMapApprox& psi, const Point& w,
                                           const std::vector<Point>& grid, const Rat& bound) {
    double worst = 0;
    bool all = true;
    for (const auto& z : grid) {
        Point zw = z;
        for (std::size_t i = 0; i < zw.size(); ++i) zw[i] += w[i];
        auto fv = eval(F, zw);
        auto pv = eval(psi, z);
        Rat sq = 0;
        for (std::size_t c = 0; c < fv.size(); ++c) sq += (fv[c] - pv[c]).norm2();
        Rat hi = sqrt_bounds(sq).hi;
        worst = std::max(worst, to_double(hi));
        if (!(hi < bound)) all = false;
    }
    return {worst, all};
}

}  // namespace

HitTimeReport hit_time_report(const EntireMapApprox& F, const SynthesisSchedule& s, std::size_t completed,
                              const std::vector<Rat>& theta, unsigned long l, std::size_t j, unsigned per_edge) {
    HitTimeReport rep;
    rep.theta = theta;
    rep.j = j;
    rep.l = l;
    rep.predicted_density = Rat(1, static_cast<unsigned long>(s.density.S));
    if (completed == 0) return rep;
    const EntireMapApprox& psi = s.targets.at(j - 1);
    const auto grid = polysquare_boundary(s.n, Rat(l), per_edge);
    Int N = 0;
    for (std::size_t k = 1; k <= completed && k <= s.stages.size(); ++k) {
        const StageSpec& st = s.stages[k - 1];
        if (st.l != l || st.j != j) continue;
        N = st.N;
        CubeFamily fam = stage_family(s, k);
        auto hit = containing_cube(theta, fam);
        if (!hit) continue;
        std::vector<Rat> shift;
        for (const auto& t : theta) shift.push_back(Rat(hit->m) * t);
        auto [err, ok] = shifted_grid_check(F, psi, complex_point(shift), grid, Rat(1, static_cast<long>(l)));
        rep.hits.push_back({k, hit->m, err, ok});
    }
    for (std::size_t i = 1; i < rep.hits.size(); ++i)
        if (Int(rep.hits[i].m - rep.hits[i - 1].m) < 2 * N) rep.gaps_ok = false;
    if (!rep.hits.empty() && rep.hits.back().m.fits_ulong_p()) {
        std::set<std::uint64_t> ms;
        for (const auto& h : rep.hits) ms.insert(h.m.get_ui());
        std::uint64_t T = *ms.rbegin();
        rep.trace = lower_density_estimate([&](std::uint64_t x) { return ms.count(x) != 0; }, T,
                                           geometric_checkpoints(1, T));
    }
    return rep;
}

std::vector<WitnessRow> appendix_density_witness(const EntireMapApprox& F, const EntireMapApprox& psi,
                                                 unsigned long a_max, unsigned long b, unsigned long k,
                                                 const std::vector<std::vector<Rat>>& thetas, unsigned per_edge) {
    if (b == 0 || k == 0) throw std::invalid_argument("b and k must be positive");
    const auto grid = polysquare_boundary(F.dim, Rat(k), per_edge);
    std::vector<std::vector<std::complex<long double>>> grid_ld;
    for (const auto& z : grid) {
        std::vector<std::complex<long double>> p;
        for (const auto& c : z) p.emplace_back(to_double(c.re), to_double(c.im));
        grid_ld.push_back(std::move(p));
    }
    const Rat bound(1, static_cast<long>(b));
    std::vector<WitnessRow> rows;
    for (const auto& th : thetas) {
        WitnessRow row;
        row.theta = th;
        Point dir = complex_point(th);
        for (unsigned long sidx = 1; sidx <= a_max && !row.s; ++sidx) {
            // floating-point screen, then exact confirmation
            long double worst = 0;
            for (const auto& z : grid_ld) {
                std::vector<std::complex<long double>> zw = z;
                for (std::size_t i = 0; i < zw.size(); ++i)
                    zw[i] += std::complex<long double>(to_double(dir[i].re), to_double(dir[i].im)) * (long double)sidx;
                auto fv = eval_approx(F, zw);
                auto pv = eval_approx(psi, z);
                long double sq = 0;
                for (std::size_t c = 0; c < fv.size(); ++c) sq += std::norm(fv[c] - pv[c]);
                worst = std::max(worst, std::sqrt(sq));
            }
            if (worst >= to_double(bound) * 1.01) continue;
            Point w;
            for (const auto& d : dir) w.push_back(d * Rat(static_cast<long>(sidx)));
            auto [err, ok] = shifted_grid_check(F, psi, w, grid, bound);
            if (ok) {
                row.s = sidx;
                row.error = err;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Rat sup_on_ball_upper(const BlockVector& g, const Rat& rho) {
    Rat sq = 0;
    for (const auto& comp : g) {
        Rat s = 0;
        for (const auto& [k, c] : comp.terms()) s += modulus_bounds(c).hi * monomial_sup_on_ball(k, rho);
        sq += s * s;
    }
    return sqrt_bounds(sq).hi;
}

namespace {

// Swap positions 1 and p (1-based) in every index.
MultiIndex swap_positions(const MultiIndex& k, std::uint32_t p) {
    if (p == 1) return k;
    std::uint32_t e1 = k.exponent(1), ep = k.exponent(p);
    return k.with_exponent(1, ep).with_exponent(p, e1);
}

CoeffVector swap_positions(const CoeffVector& a, std::uint32_t p) {
    CoeffVector out;
    for (const auto& [k, c] : a.terms()) out.set(swap_positions(k, p), c);
    return out;
}

BlockVector swap_positions(const BlockVector& a, std::uint32_t p) {
    BlockVector out;
    for (const auto& c : a) out.push_back(swap_positions(c, p));
    return out;
}

WeightTable swap_positions(const WeightTable& v, std::uint32_t p) {
    WeightTable out(Enumeration::Custom, v.dim(), v.phi_spec());
    for (const auto& e : v.entries()) out.push({swap_positions(e.idx, p), e.v, e.radius});
    return out;
}

Rat visit_error(const BlockVector& alpha, const Direction& a, const Int& n, const SpectralTarget& t) {
    return sup_on_ball_upper(exp_shift(scale(a, CRat(Rat(n))), alpha) - t.beta, t.rho);
}

}  // namespace

SpectralResult synth_spectral(const std::vector<Direction>& directions, const std::vector<SpectralTarget>& targets,
                              const WeightTable& v, const GrowthFunction& phi, std::uint32_t n,
                              const SpectralOptions& opt) {
    if (directions.empty() || targets.empty()) throw std::invalid_argument("directions and targets are required");
    for (const auto& d : directions)
        if (d.size() != n) throw std::invalid_argument("each direction needs exactly n entries");
    const std::size_t m = targets[0].beta.size();
    for (const auto& t : targets) {
        if (t.beta.size() != m || m == 0) throw std::invalid_argument("targets must share the component count");
        if (t.direction >= directions.size()) throw std::invalid_argument("target names a missing direction");
        if (sgn(t.eps) <= 0 || sgn(t.rho) < 0) throw std::invalid_argument("targets need eps > 0 and rho >= 0");
    }
    SpectralResult res;
    res.alpha.assign(m, CoeffVector());
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const SpectralTarget& t = targets[ti];
        const Direction& a = directions[t.direction];
        std::uint32_t p = 0;
        while (p < a.size() && a[p].is_zero()) ++p;
        if (p == a.size()) {
            res.failure = "direction " + std::to_string(t.direction + 1) + " is zero";
            return res;
        }
        ++p;  // 1-based position of the first nonzero entry
        Direction sa = a;
        std::swap(sa[0], sa[p - 1]);
        WeightTable sv = swap_positions(v, p);
        Rat norm_room = Rat(1) - block_l2_norm(res.alpha, v).hi;
        Rat tol = std::min({opt.first_tolerance, t.eps, Rat(norm_room / 2)});
        Int two;
        mpz_ui_pow_ui(two.get_mpz_t(), 2, ti);
        tol /= Rat(two);
        bool accepted = false;
        Visit visit;
        visit.target = ti;
        visit.direction = t.direction;
        visit.eps = t.eps;
        // later visits far beyond earlier ones barely disturb them
        WitnessBudget budget = opt.budget;
        for (const auto& prev : res.visits) budget.min_iterations = std::max(budget.min_iterations, Int(10 * prev.n));
        for (unsigned attempt = 0; attempt <= opt.retries && !accepted; ++attempt, tol /= 100) {
            if (attempt > 0 && !res.visits.empty()) budget.min_iterations *= 10;
            WitnessResult w = transitivity_witness(swap_positions(res.alpha, p), swap_positions(t.beta, p), sa, sv,
                                                   tol, budget);
            visit.witness_attempts += w.attempts;
            if (!w.found) {
                res.failure = "no witness for target " + std::to_string(ti + 1) + " within budget (best error " +
                              std::to_string(to_double(w.best_error)) + ")";
                break;
            }
            BlockVector cand = swap_positions(w.w, p);
            Rat err = visit_error(cand, a, w.n, t);
            if (!(err < t.eps)) continue;
            bool earlier_ok = true;
            for (const auto& prev : res.visits)
                if (!(visit_error(cand, directions[prev.direction], prev.n, targets[prev.target]) < prev.eps))
                    earlier_ok = false;
            if (!earlier_ok || block_l2_norm(cand, v).hi > 1) continue;
            res.alpha = std::move(cand);
            visit.n = w.n;
            visit.sup_upper = err;
            visit.verified = true;
            accepted = true;
        }
        res.visits.push_back(visit);
        if (!accepted) {
            if (res.failure.empty()) res.failure = "target " + std::to_string(ti + 1) + " not reached after retries";
            break;
        }
    }
    // final state: recheck visits against the final alpha
    for (auto& vis : res.visits)
        if (vis.verified) {
            vis.sup_upper = visit_error(res.alpha, directions[vis.direction], vis.n, targets[vis.target]);
            vis.verified = vis.sup_upper < vis.eps;
        }
    res.alpha_norm = block_l2_norm(res.alpha, v);
    EntireMapApprox f{n, res.alpha, "spectral"};
    res.certificate = slow_growth_certificate(f, v, phi);
    bool all = res.visits.size() == targets.size();
    for (const auto& vis : res.visits) all = all && vis.verified;
    res.ok = res.failure.empty() && all && res.alpha_norm.hi <= 1 && res.certificate->ok;
    if (res.failure.empty() && !res.ok) res.failure = "final verification failed";
    return res;
}

bool verify_visits(const SpectralResult& r, const std::vector<Direction>& directions,
                   const std::vector<SpectralTarget>& targets) {
    if (r.visits.size() != targets.size()) return false;
    for (const auto& vis : r.visits)
        if (!(visit_error(r.alpha, directions.at(vis.direction), vis.n, targets.at(vis.target)) < vis.eps)) return false;
    return true;
}

namespace {

nlohmann::json attempts_json(const std::vector<FitAttempt>& at) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : at) {
        nlohmann::json e = {{"degree", x.degree}, {"sample_residual", x.sample_residual}};
        if (x.validated) e["validated"] = *x.validated;
        a.push_back(e);
    }
    return a;
}

}  // namespace

nlohmann::json to_json(const SynthesisSchedule& s) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : s.targets) targets.push_back(to_json(t));
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"l", e.l},
                           {"j", e.j},
                           {"delta", to_string(e.delta)},
                           {"N", e.N.get_str()},
                           {"N0", e.N0.get_str()},
                           {"R0", e.R0.get_str()}});
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& st : s.stages)
        stages.push_back({{"k", st.k},
                          {"n_k", st.base.get_str()},
                          {"l", st.l},
                          {"j", st.j},
                          {"delta", to_string(st.delta)},
                          {"N", st.N.get_str()},
                          {"eps", to_string(st.eps)}});
    return {{"n", s.n},     {"R", s.R.get_str()},       {"base", to_json(s.base)}, {"targets", targets},
            {"entries", entries}, {"density", to_json(s.density)}, {"stages", stages}};
}

SynthesisSchedule schedule_from_config(const nlohmann::json& j, std::size_t* stages) {
    std::uint32_t n = j.value("n", 1u);
    std::vector<EntireMapApprox> targets;
    for (const auto& t : j.at("targets")) targets.push_back(map_from_json(t));
    EntireMapApprox base = map_from_json(j.at("base"));
    std::vector<std::pair<unsigned long, std::size_t>> levels;
    for (const auto& p : j.at("levels")) levels.emplace_back(p.at(0).get<unsigned long>(), p.at(1).get<std::size_t>());
    std::size_t L = j.value("stages", std::size_t{2});
    if (stages) *stages = L;
    Int R{j.at("R").is_string() ? j.at("R").get<std::string>() : std::to_string(j.at("R").get<long>())};
    return build_schedule(n, std::move(targets), std::move(base), R, levels, L);
}

nlohmann::json to_json(const StageReport& r) {
    return {{"k", r.k},
            {"family", r.family},
            {"cubes", r.cube_count},
            {"fit_degree", r.fit_degree},
            {"piece_error", r.piece_error},
            {"retained_error", r.retained_error},
            {"errors_are_lower_bounds", r.lower_bounds},
            {"eps", to_string(r.eps)},
            {"cumulative", r.cumulative},
            {"grid_per_edge", r.grid_per_edge},
            {"coverage", {{"checked", r.coverage_checked}, {"found", r.coverage_found}}},
            {"ok", r.ok},
            {"attempts", attempts_json(r.attempts)}};
}

nlohmann::json to_json(const GeometricResult& r) {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : r.stages) st.push_back(to_json(s));
    nlohmann::json j = {{"ok", r.ok}, {"completed", r.completed}, {"stages", st}, {"base_error", r.base_error},
                        {"stage_errors", r.stage_errors}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

nlohmann::json to_json(const HitTimeReport& r) {
    nlohmann::json th = nlohmann::json::array();
    for (const auto& x : r.theta) th.push_back(to_string(x));
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& h : r.hits)
        hits.push_back({{"stage", h.stage}, {"m", h.m.get_str()}, {"error", h.error}, {"verified", h.verified}});
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [N, q] : r.trace) trace.push_back({N, to_string(q)});
    return {{"theta", th},     {"j", r.j},
            {"l", r.l},        {"hits", hits},
            {"gaps_ok", r.gaps_ok}, {"predicted_density", to_string(r.predicted_density)},
            {"trace", trace}};
}

nlohmann::json to_json(const SpectralResult& r) {
    nlohmann::json visits = nlohmann::json::array();
    for (const auto& v : r.visits)
        visits.push_back({{"target", v.target + 1},
                          {"direction", v.direction + 1},
                          {"n", v.n.get_str()},
                          {"sup_upper", to_string(v.sup_upper)},
                          {"eps", to_string(v.eps)},
                          {"verified", v.verified},
                          {"witness_attempts", v.witness_attempts}});
    nlohmann::json j = {{"ok", r.ok},
                        {"alpha", to_json(r.alpha)},
                        {"alpha_norm_upper", to_string(r.alpha_norm.hi)},
                        {"visits", visits}};
    if (r.certificate) j["certificate"] = to_json(*r.certificate);
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

}  // namespace uh
