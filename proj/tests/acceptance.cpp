// Acceptance run: one PASS/FAIL line per criterion with its measured value, threshold and time.
#include "commands.hpp"
#include "manifest.hpp"
#include "support.hpp"
#include "univhol/cubes.hpp"
#include "univhol/density.hpp"
#include "univhol/harmonic.hpp"
#include "univhol/synth.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace uh;

namespace {

struct Outcome {
    bool pass = false;
    std::string value;
    std::string threshold;
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
};

std::string data(const std::string& name) { return std::string(UNIVHOL_TEST_DATA) + "/" + name; }

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

Point shifted(const Point& z, const Direction& a) {
    Point w = z;
    for (std::size_t i = 0; i < a.size(); ++i) w[i] += a[i];
    return w;
}

std::vector<Rat> random_theta(std::mt19937_64& rng, std::uint32_t n, std::size_t face) {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::vector<Rat> th(2 * n);
    for (auto& x : th) x = ratio(num(rng), 1000);
    th[face / 2] = face % 2 == 0 ? Rat(1) : Rat(-1);
    return th;
}

// Plain-integer oracle for the face grid: l = floor((4k+2)/delta + 1) + 1 with delta = p/q.
struct GridOracle {
    long l, layers, N, R0;
    Rat A, delta0;
};

GridOracle grid_oracle(std::uint32_t n, long k, long p, long q) {
    GridOracle o;
    o.l = ((4 * k + 2) * q + p) / p + 1;
    o.layers = 1;
    for (std::uint32_t i = 0; i + 1 < 2 * n; ++i) o.layers *= o.l;
    o.N = (2 * k + 1) * o.layers + 1;
    o.R0 = (2 * k + 1) * (o.layers - 2);
    o.A = ratio(2 * k + 1, 2 * k + 1 + o.R0);
    o.delta0 = ratio(p, q) / Rat((2 * k + 1) * o.layers + o.R0);
    return o;
}

struct FamilySetup {
    std::uint32_t n;
    unsigned long k;
    Rat delta;
    CubeFamily fam;
};

const std::vector<std::pair<long, long>> kDeltas{{1, 10}, {1, 4}};

std::vector<FamilySetup>& families() {
    static std::vector<FamilySetup> all = [] {
        std::vector<FamilySetup> out;
        for (std::uint32_t n = 1; n <= 2; ++n)
            for (unsigned long k = 1; k <= 3; ++k)
                for (auto [p, q] : kDeltas) {
                    Rat d = ratio(p, q);
                    ShellMinimums m = shell_minimums(n, k, d);
                    out.push_back({n, k, d, shell_arrangement(n, k, d, m.R0, m.N0, n == 1 ? kMaterializeLimit : 0)});
                }
        return out;
    }();
    return all;
}

std::string label(const FamilySetup& f) {
    return "n=" + std::to_string(f.n) + " k=" + std::to_string(f.k) + " delta=" + f.delta.get_str();
}

// Cube leaf items below node i.
void subtree_items(const SeparationTree& t, std::size_t i, std::vector<std::size_t>& out) {
    const SeparationNode& nd = t.nodes[i];
    if (nd.kind == SeparationNode::Kind::Split) {
        subtree_items(t, nd.left, out);
        subtree_items(t, nd.right, out);
    } else if (nd.kind == SeparationNode::Kind::Cube) {
        out.push_back(nd.item);
    }
}

struct Captured {
    int code = 0;
    std::string out, err;
};

Captured run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    auto* o = std::cout.rdbuf(out.rdbuf());
    auto* e = std::cerr.rdbuf(err.rdbuf());
    int code = cli::run_cli(args);
    std::cout.rdbuf(o);
    std::cerr.rdbuf(e);
    return {code, out.str(), err.str()};
}

// ---------------------------------------------------------------------------------------------

Outcome translation_identity() {
    std::mt19937_64 rng(101);
    std::size_t bad = 0;
    const int total = 1000;
    for (int t = 0; t < total; ++t) {
        std::uint32_t n = 1 + t % 2;
        CoeffVector a = test::random_coeffs(rng, n, 6, 5);
        Direction d = test::random_direction(rng, n, false);
        Point z = test::random_point(rng, n);
        if (eval(exp_shift(d, a), z) != eval(a, shifted(z, d))) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " mismatches / " + std::to_string(total), "0 (exact)"};
}

Outcome commuting_diagram() {
    std::mt19937_64 rng(102);
    std::size_t bad = 0, checks = 0;
    for (int t = 0; t < 1000; ++t) {
        std::uint32_t n = 1 + t % 3;
        CoeffVector a = test::random_coeffs(rng, n, 7, 6);
        for (std::uint32_t s = 1; s <= n; ++s, ++checks)
            if (test::plain(shift_backward(a, s)) != test::plain_derivative(test::plain(a), s)) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " mismatches / " + std::to_string(checks) + " (alpha, s)", "0 (exact)"};
}

Outcome contraction() {
    ExpPowerGrowth e1(Rat(1), Rat(1)), e_half(Rat(1), Rat(1, 2));
    LogSquaredGrowth ls(Rat(1)), ls_half(Rat(1, 2));
    std::vector<WeightTable> tables{build_slow_growth_weight(e1, Enumeration::Deglex, 1, 200),
                                    build_slow_growth_weight(e_half, Enumeration::Deglex, 2, 300),
                                    build_slow_growth_weight(ls_half, Enumeration::Deglex, 2, 200),
                                    build_slow_growth_weight(ls, Enumeration::Prime, 0, 200)};
    std::mt19937_64 rng(103);
    std::size_t bad = 0, undecided = 0, checks = 0;
    for (int t = 0; t < 1000; ++t) {
        const WeightTable& v = tables[t % tables.size()];
        std::uniform_int_distribution<std::size_t> pick(0, v.horizon() - 1);
        CoeffVector a;
        for (int i = 0; i < 5; ++i) a.add(v.entries()[pick(rng)].idx, test::random_crat(rng));
        std::uint32_t positions = std::max<std::uint32_t>(a.max_position(), v.dim());
        for (std::uint32_t s = 1; s <= positions; ++s, ++checks) {
            std::optional<bool> leq = l1v_norm_leq(shift_backward(a, s), a, v);
            if (!leq) ++undecided;
            else if (!*leq) ++bad;
        }
    }
    return {bad == 0 && undecided == 0,
            std::to_string(bad) + " violations, " + std::to_string(undecided) + " undecided / " +
                std::to_string(checks) + " (alpha, s) over 4 tables",
            "0 (rational comparison)"};
}

Outcome spectral_growth() {
    ExpPowerGrowth phi(Rat(1), Rat(1));
    struct Run {
        std::uint32_t n;
        WeightTable v;
        std::vector<Direction> dirs;
        std::vector<SpectralTarget> targets;
    };
    std::vector<Run> runs;
    runs.push_back({1,
                    build_slow_growth_weight(phi, Enumeration::Deglex, 1, 120),
                    {Direction{CRat(1)}, Direction{CRat(Rat(0), Rat(1))}},
                    {{0, {CoeffVector::unit(MultiIndex::unit(1))}, Rat(1), Rat(1, 10)},
                     {1, {CoeffVector::unit(MultiIndex(), CRat(Rat(1, 2)))}, Rat(1), Rat(1, 10)}}});
    runs.push_back({2,
                    build_slow_growth_weight(phi, Enumeration::Deglex, 2, 400),
                    {Direction{CRat(1), CRat(0)}, Direction{CRat(0), CRat(1)}},
                    {{0, {CoeffVector::unit(MultiIndex(), CRat(Rat(1, 2)))}, Rat(1), Rat(1, 10)},
                     {1, {CoeffVector::unit(MultiIndex::unit(1), CRat(Rat(1, 3)))}, Rat(1), Rat(1, 10)}}});
    std::size_t failed_certs = 0, violations = 0, samples = 0, terms = 0;
    std::string note;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& r = runs[i];
        SpectralResult res = synth_spectral(r.dirs, r.targets, r.v, phi, r.n);
        if (!res.ok || !res.certificate || res.alpha_norm.hi > 1) {
            ++failed_certs;
            note = " (run " + std::to_string(i) + ": " + res.failure + ")";
            continue;
        }
        EntireMapApprox F{r.n, res.alpha, "spectral"};
        std::size_t support = 0;
        for (const auto& c : res.alpha) support += c.size();
        std::set<MultiIndex> covered;
        for (const auto& rec : res.certificate->records) covered.insert(rec.idx);
        std::size_t distinct = 0;
        std::set<MultiIndex> wanted;
        for (const auto& c : res.alpha)
            for (const auto& [k, x] : c.terms()) wanted.insert(k);
        for (const auto& k : wanted) distinct += covered.count(k);
        terms += support;
        if (!res.certificate->ok || distinct != wanted.size()) ++failed_certs;
        GrowthSampleReport rep = sample_growth_bound(F, phi, Rat(1), 10000, 400 + i, Rat(30));
        samples += rep.samples;
        violations += rep.violations + (10000 - rep.samples);
    }
    return {failed_certs == 0 && violations == 0,
            std::to_string(runs.size()) + " outputs, " + std::to_string(terms) + " terms certified, " +
                std::to_string(failed_certs) + " failed certificates, " + std::to_string(violations) +
                " violations / " + std::to_string(samples) + " samples" + note,
            "0 failures, 0 violations"};
}

Outcome intertwining() {
    std::mt19937_64 rng(105);
    const unsigned D = 6;
    std::size_t bad = 0, checks = 0;
    for (int d = 0; d < 10; ++d) {
        std::uint32_t n = 1 + d % 2;
        Direction a = test::random_direction(rng, n);
        LinearMap F = change_of_coordinates_map(a, D, n);
        for (int t = 0; t < 100; ++t, ++checks) {
            CoeffVector x = test::random_coeffs(rng, n, D, 6);
            if (F.apply(shift_backward(x, 1)) != apply_direction(a, F.apply(x))) ++bad;
        }
    }
    return {bad == 0, std::to_string(bad) + " mismatches / " + std::to_string(checks) + " (10 directions)",
            "0 (exact)"};
}

Outcome witnesses() {
    ExpPowerGrowth e(Rat(1), Rat(1));
    WeightTable v = build_slow_growth_weight(e, Enumeration::Deglex, 1, 90);
    std::mt19937_64 rng(106);
    const Rat eps(1, 1000000);
    WitnessBudget budget{Int(1000000), 60, Int(1)};
    std::size_t found = 0, verified = 0;
    Int max_n;
    for (int t = 0; t < 20; ++t) {
        BlockVector u{test::random_coeffs(rng, 1, 4, 3)};
        BlockVector target{test::random_coeffs(rng, 1, 4, 3)};
        Direction a{test::random_crat(rng, 3, 2)};
        if (a[0].is_zero()) a[0] = CRat(1);
        WitnessResult r = transitivity_witness(u, target, a, v, eps, budget);
        if (!r.found || r.n > budget.max_iterations || r.offset > budget.max_offset) continue;
        ++found;
        max_n = std::max(max_n, r.n);
        if (block_l2_norm(r.w - u, v).hi < eps && block_l2_norm(exp_shift(scale(a, CRat(Rat(r.n))), r.w) - target, v).hi < eps)
            ++verified;
    }
    return {verified == 20,
            std::to_string(found) + " found, " + std::to_string(verified) + " re-verified / 20, max n = " +
                max_n.get_str(),
            "20 / 20 at eps = 1e-6, n <= 1e6, offset <= 60"};
}

Outcome cube_formulas() {
    std::size_t bad = 0, cases = 0;
    std::string first_bad;
    for (std::uint32_t n = 1; n <= 2; ++n)
        for (long k = 1; k <= 3; ++k)
            for (auto [p, q] : kDeltas) {
                ++cases;
                GridOracle o = grid_oracle(n, k, p, q);
                FaceGridParams g = face_grid_params(n, k, ratio(p, q), Int(o.R0));
                bool ok = g.l == o.l && g.layers == o.layers && g.N == o.N && g.R0 == o.R0 && g.A == o.A &&
                          g.delta0 == o.delta0 && Rat(o.l) * o.delta0 > o.A && net_inequality_holds(g) &&
                          shell_minimums(n, k, ratio(p, q)).R0 == o.R0;
                if (!ok) {
                    ++bad;
                    if (first_bad.empty()) first_bad = " (first: n=" + std::to_string(n) + " k=" + std::to_string(k) + ")";
                }
            }
    FaceGridParams ex = face_grid_params(1, 1, Rat(1, 4), Int(72));
    bool example = ex.l == 26 && ex.N == 79 && ex.R0 == 72;
    return {bad == 0 && example,
            std::to_string(bad) + " mismatches / " + std::to_string(cases) + " cases, n=1 k=1 delta=1/4 gives l=" +
                ex.l.get_str() + " N=" + ex.N.get_str() + " R0=" + ex.R0.get_str() + first_bad,
            "0 (exact)"};
}

Outcome coverage() {
    std::mt19937_64 rng(108);
    std::size_t missed = 0, not_inside = 0, not_member = 0, queries = 0, net_failures = 0;
    for (const FamilySetup& f : families()) {
        const CubeFamily& fam = f.fam;
        std::vector<std::vector<Rat>> thetas;
        for (std::size_t face = 0; face < 4 * f.n; ++face)
            for (int t = 0; t < 1000; ++t) thetas.push_back(random_theta(rng, f.n, face));
        for (unsigned mask = 0; mask < (1u << (2 * f.n)); ++mask) {
            std::vector<Rat> c(2 * f.n);
            for (std::uint32_t i = 0; i < 2 * f.n; ++i) c[i] = (mask >> i) & 1 ? Rat(1) : Rat(-1);
            thetas.push_back(c);
        }
        for (const auto& th : thetas) {
            ++queries;
            std::optional<CubeHit> hit = containing_cube(th, fam);
            if (!hit) {
                ++missed;
                continue;
            }
            // membership: the reported cube is the family cube at its reference
            const FaceFamily& face = fam.faces.at(hit->ref.face);
            if (face.center(hit->ref.layer, hit->ref.lattice) != hit->cube.center ||
                hit->cube.half_width != fam.half_width)
                ++not_member;
            // containment of the open Q(m theta, k) in the closed family cube, per axis
            bool inside = true;
            for (std::size_t i = 0; i < th.size(); ++i)
                inside = inside && abs(Rat(hit->m) * th[i] - hit->cube.center[i]) + Rat(f.k) <= hit->cube.half_width;
            if (!inside) ++not_inside;
        }
        if (f.n == 1)
            for (std::size_t s = 0; s < fam.faces.size(); ++s) net_failures += !net_covers_face(fam, s);
    }
    return {missed + not_inside + not_member + net_failures == 0,
            std::to_string(queries) + " theta over " + std::to_string(families().size()) + " families: " +
                std::to_string(missed) + " missed, " + std::to_string(not_inside) + " not contained, " +
                std::to_string(not_member) + " not family cubes; n=1 net failures " + std::to_string(net_failures),
            "0 (exact)"};
}

Outcome convexity() {
    std::size_t certified = 0, verified = 0, runs = 0;
    std::string note;
    for (const FamilySetup& f : families()) {
        for (const Rat& L : std::vector<Rat>{Rat(f.fam.R) / 2, Rat(f.fam.R - 1)}) {
            ++runs;
            ConvexityCertificate c = certify_poly_convexity(f.fam, L);
            if (!c.ok) {
                if (note.empty()) note = " (" + label(f) + ": " + c.failure + ")";
                continue;
            }
            ++certified;
            VerifyReport r = verify_certificate(f.fam, c.tree, L);
            if (r.ok) ++verified;
            else if (note.empty()) note = " (" + label(f) + ": " + r.violation + ")";
        }
    }

    // mutations of the certificate of the smallest materialized family
    const FamilySetup& base = families()[1];  // n=1 k=1 delta=1/4
    const Rat L = Rat(base.fam.R) / 2;
    ConvexityCertificate c = certify_poly_convexity(base.fam, L);
    std::vector<SeparationTree> mutants;
    if (c.ok) {
        const SeparationTree& t = c.tree;
        std::vector<std::size_t> splits, leaves;
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            if (t.nodes[i].kind == SeparationNode::Kind::Split) splits.push_back(i);
            if (t.nodes[i].kind == SeparationNode::Kind::Cube) leaves.push_back(i);
        }
        std::mt19937_64 rng(109);
        // thresholds moved onto the center of a cube below the split
        for (int m = 0; m < 4; ++m) {
            std::size_t node = m == 0 ? 0 : splits[rng() % splits.size()];
            std::vector<std::size_t> items;
            subtree_items(t, node, items);
            if (items.empty()) continue;
            SeparationTree x = t;
            x.nodes[node].threshold = base.fam.cubes[items[rng() % items.size()]].center[x.nodes[node].axis];
            mutants.push_back(x);
        }
        // children of the root exchanged
        SeparationTree swapped = t;
        std::swap(swapped.nodes[0].left, swapped.nodes[0].right);
        mutants.push_back(swapped);
        // two leaves on opposite sides of the root exchanged
        std::vector<std::size_t> left_items, right_items;
        subtree_items(t, t.nodes[0].left, left_items);
        subtree_items(t, t.nodes[0].right, right_items);
        if (!left_items.empty() && !right_items.empty()) {
            SeparationTree x = t;
            for (auto& nd : x.nodes)
                if (nd.kind == SeparationNode::Kind::Cube) {
                    if (nd.item == left_items.front()) nd.item = right_items.front();
                    else if (nd.item == right_items.front()) nd.item = left_items.front();
                }
            mutants.push_back(x);
        }
        // one cube listed twice, another dropped
        SeparationTree dup = t;
        dup.nodes[leaves.back()].item = dup.nodes[leaves.front()].item;
        mutants.push_back(dup);
        // a leaf naming a cube that does not exist
        SeparationTree ghost = t;
        ghost.nodes[leaves[leaves.size() / 2]].item = base.fam.cubes.size();
        mutants.push_back(ghost);
        // a split collapsed into a leaf, dropping its subtree
        SeparationTree cut = t;
        std::size_t victim = splits[splits.size() / 2];
        std::vector<std::size_t> below;
        subtree_items(t, victim, below);
        cut.nodes[victim] = SeparationNode{SeparationNode::Kind::Cube, 0, Rat(0), 0, 0, below.front()};
        mutants.push_back(cut);
    }
    std::size_t rejected = 0;
    for (const auto& m : mutants) {
        try {
            rejected += !verify_certificate(base.fam, m, L).ok;
        } catch (const std::exception&) {
            ++rejected;
        }
    }
    // the unmutated tree with a central cube larger than certified
    std::size_t extra = 0;
    if (c.ok) extra = !verify_certificate(base.fam, c.tree, Rat(base.fam.R + base.fam.N)).ok;
    std::size_t total_mut = mutants.size() + (c.ok ? 1 : 0);
    return {certified == runs && verified == runs && total_mut == 10 && rejected + extra == total_mut,
            std::to_string(verified) + " / " + std::to_string(runs) + " certificates verified, " +
                std::to_string(rejected + extra) + " / " + std::to_string(total_mut) + " mutations rejected" + note,
            std::to_string(runs) + " / " + std::to_string(runs) + ", 10 / 10"};
}

Outcome density() {
    const std::uint64_t T = 100000;
    std::mt19937_64 rng(110);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<std::uint64_t> nu(1, 60);
    std::uniform_int_distribution<long> lvl(1, 9);
    std::size_t lib_fail = 0, oracle_fail = 0;
    std::string note;
    for (int t = 0; t < 20; ++t) {
        std::vector<std::pair<long, std::uint64_t>> pairs;
        int q = count(rng);
        for (int i = 0; i < q; ++i) pairs.push_back({lvl(rng), nu(rng)});
        DensityFamily f = build_finite_family(pairs);
        std::vector<std::uint64_t> checkpoints = geometric_checkpoints(10, T);
        FamilyCheck c = verify_family(f, T, checkpoints);
        if (!c.ok) {
            ++lib_fail;
            if (note.empty()) note = " (" + c.violation + ")";
        }

        // independent sweep from the defining residues
        std::vector<int> owner(T + 1, -1);
        bool ok = true;
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::uint64_t m = 1; m <= T; ++m)
                if (m % f.S == f.offsets[a] % f.S && m >= f.pairs[a].second) {
                    if (owner[m] != -1) ok = false;  // disjointness
                    owner[m] = static_cast<int>(a);
                }
        std::int64_t prev = -1;
        for (std::uint64_t m = 1; m <= T && ok; ++m) {
            if (owner[m] < 0) continue;
            if (m < f.pairs[owner[m]].second) ok = false;
            if (prev >= 0 && m - prev < f.pairs[owner[m]].second + f.pairs[owner[prev]].second) ok = false;
            prev = static_cast<std::int64_t>(m);
        }
        for (std::size_t a = 0; a < f.size() && ok; ++a) {
            std::uint64_t cnt = 0, next = 0;
            for (std::uint64_t N : checkpoints) {
                for (; next < N; ++next) cnt += owner[next + 1] == static_cast<int>(a);
                if (Rat(static_cast<unsigned long>(cnt)) / Rat(static_cast<unsigned long>(N)) <
                    Rat(1, f.S) - ratio(2, static_cast<long>(N)))
                    ok = false;
            }
        }
        oracle_fail += !ok;
    }
    return {lib_fail == 0 && oracle_fail == 0,
            "20 families on [1, 1e5]: " + std::to_string(lib_fail) + " library failures, " +
                std::to_string(oracle_fail) + " sweep failures" + note,
            "0"};
}

Outcome geometric() {
    std::size_t L = 0;
    SynthesisSchedule s = schedule_from_config(read_json(data("geometric_constant.json")), &L);
    ScheduleCheck sc = validate_schedule(s);
    GeometricOptions opt;
    opt.fit.validation_per_edge = 64;
    GeometricResult r = run_geometric(s, L, opt);

    bool stages_ok = r.completed == L && r.stages.size() == L;
    std::ostringstream worst;
    for (const auto& st : r.stages) {
        bool ok = st.ok && !st.lower_bounds && st.grid_per_edge >= 64 && st.piece_error <= to_double(st.eps) &&
                  st.retained_error <= to_double(st.eps);
        stages_ok = stages_ok && ok;
        if (!ok)
            worst << " stage " << st.k << ": piece " << st.piece_error << ", retained " << st.retained_error
                  << (st.lower_bounds ? " (lower bounds)" : "") << " vs eps " << st.eps.get_str() << " at degree "
                  << st.fit_degree << ";";
    }

    std::mt19937_64 rng(111);
    std::size_t hits = 0;
    bool gaps = true;
    const StageSpec& first = s.stages.front();
    for (int t = 0; t < 10; ++t) {
        std::uniform_int_distribution<long> num(-1000, 1000);
        std::vector<Rat> th{ratio(num(rng), 1000), ratio(num(rng), 1000)};
        th[rng() % 2] = rng() % 2 ? Rat(1) : Rat(-1);
        HitTimeReport h = hit_time_report(r.F, s, r.completed, th, first.l, first.j, 64);
        for (const auto& x : h.hits) hits += x.verified;
        gaps = gaps && h.gaps_ok;
    }
    bool pass = sc.ok && stages_ok && hits >= 3 && gaps;
    std::ostringstream v;
    v << "validator " << (sc.ok ? "ok" : "rejected: " + sc.violation) << ", " << r.completed << "/" << L
      << " stages," << worst.str() << " " << hits << " verified hit times over 10 theta"
      << (gaps ? "" : ", gap violation");
    return {pass, v.str(), "validator ok, errors <= eps_k at 64/edge, >= 3 hits, gaps >= 2N"};
}

Outcome harmonic() {
    ExpPowerGrowth phi(Rat(1), Rat(1));
    std::size_t bad_lap = 0, bad_chain = 0, bad_dim = 0, bad_norm = 0, elems = 0, norm_checks = 0;
    for (std::uint32_t n : {2u, 3u}) {
        HarmonicChainBasis b = build_chain_basis(n, 6);
        for (const auto& e : b.elements) {
            ++elems;
            bad_lap += !e.P.laplacian().is_zero();
            if (e.i > 1) bad_chain += !(e.P.derivative(1) == b.at(e.i - 1, e.j).P);
            else bad_chain += !e.P.derivative(1).is_zero();
        }
        for (unsigned d = 0; d <= 6; ++d) {
            // C(d+n-1, n-1) - C(d+n-3, n-1) with C(m, r) = 0 for m < r
            auto C = [](long m, long r) -> long {
                if (m < r || m < 0) return 0;
                long c = 1;
                for (long i = 1; i <= r; ++i) c = c * (m - r + i) / i;
                return c;
            };
            long want = C(d + n - 1, n - 1) - C(static_cast<long>(d) + n - 3, n - 1);
            bad_dim += static_cast<long>(b.block(d).size()) != want;
        }
        std::vector<HarmonicShiftMatrix> B;
        for (unsigned l = 1; l <= n; ++l) B.push_back(shift_matrix(b, l));
        WeightTable v = build_harmonic_weight(b, B, phi);
        std::mt19937_64 rng(112 + n);
        std::uniform_int_distribution<long> num(-9, 9);
        for (int t = 0; t < 100; ++t) {
            HVector a;
            for (const auto& e : b.elements)
                if (rng() % 3 == 0) {
                    long p = num(rng);
                    if (p != 0) a[{e.i, e.j}] = ratio(p, 7);
                }
            for (const auto& Bl : B) {
                ++norm_checks;
                bad_norm += hnorm(uh::apply(Bl, a), v) > hnorm(a, v);
            }
        }
    }
    return {bad_lap + bad_chain + bad_dim + bad_norm == 0,
            std::to_string(elems) + " elements: " + std::to_string(bad_lap) + " non-harmonic, " +
                std::to_string(bad_chain) + " chain breaks, " + std::to_string(bad_dim) + " dimension mismatches, " +
                std::to_string(bad_norm) + " norm increases / " + std::to_string(norm_checks),
            "0 (exact)"};
}

Outcome determinism() {
    fs::path root = fs::temp_directory_path() / "univhol_acceptance";
    fs::remove_all(root);
    fs::path shell1 = root / "shell1", spectral = root / "spectral";
    std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"weights", {"weights", "build", "--phi", "exp:1,1", "--enum", "deglex", "--n", "2", "--horizon", "60"}},
        {"weights_prime", {"weights", "build", "--phi", "logsq:1", "--enum", "prime", "--horizon", "40"}},
        {"shell1", {"cubes", "shell", "--n", "1", "--k", "1", "--delta", "1/4", "--certify"}},
        {"shell2", {"cubes", "shell", "--n", "2", "--k", "1", "--delta", "2/5", "--certify"}},
        {"certify", {"cubes", "certify", "--family", (shell1 / "family.json").string(), "--L", "71"}},
        {"render", {"render", "svg", "--family", (shell1 / "family.json").string(), "--L", "36"}},
        {"density", {"density", "family", "--pairs", "1:2,2:3,3:5", "--horizon", "100000"}},
        {"spectral", {"synth", "spectral", "--dirs", data("dirs_n1.json"), "--targets", data("targets_n1.json"),
                      "--phi", "exp:1,1"}},
        {"growth", {"check", "growth", "--map", (spectral / "F.json").string(), "--weights",
                    (spectral / "weights.json").string(), "--phi", "exp:1,1", "--samples", "500"}},
        {"harmonic", {"harmonic", "basis", "--n", "3", "--deg", "6"}},
        {"geometric", {"synth", "geometric", "--config", data("geometric_constant.json")}},
    };
    std::size_t replayed = 0, identical = 0, artifacts = 0;
    std::string note;
    for (auto& [name, args] : runs) {
        fs::path dir = root / name, again = root / (name + "_replay");
        args.push_back("--out-dir");
        args.push_back(dir.string());
        Captured first = run_cli(args);
        if (!fs::exists(dir / "manifest.json")) {
            if (note.empty()) note = " (" + name + ": no manifest, exit " + std::to_string(first.code) + ")";
            continue;
        }
        Captured rep = run_cli({"replay", "--manifest", (dir / "manifest.json").string(), "--out-dir", again.string()});
        ++replayed;
        nlohmann::json m = read_json((dir / "manifest.json").string());
        bool same = rep.code == cli::kExitOk && !m.at("artifacts").empty();
        for (const auto& [file, hash] : m.at("artifacts").items()) {
            ++artifacts;
            same = same && fs::exists(again / file) && cli::read_file(dir / file) == cli::read_file(again / file);
        }
        if (same) ++identical;
        else if (note.empty()) note = " (" + name + " differs: " + rep.err + ")";
    }
    return {replayed == runs.size() && identical == runs.size(),
            std::to_string(identical) + " / " + std::to_string(runs.size()) + " runs byte-identical on replay (" +
                std::to_string(artifacts) + " artifacts)" + note,
            std::to_string(runs.size()) + " / " + std::to_string(runs.size())};
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "translation identity", 10, translation_identity},
        {2, "backward shift is differentiation", 5, commuting_diagram},
        {3, "backward shift contraction", 10, contraction},
        {4, "spectral outputs obey the growth bound", 30, spectral_growth},
        {5, "intertwining of the coordinate change", 10, intertwining},
        {6, "transitivity witnesses", 60, witnesses},
        {7, "cube grid formulas", 5, cube_formulas},
        {8, "shell coverage", 120, coverage},
        {9, "separation certificates", 60, convexity},
        {10, "density families", 30, density},
        {11, "geometric synthesis end to end", 600, geometric},
        {12, "harmonic chain bases", 60, harmonic},
        {13, "replay determinism", 600, determinism},
    };
    using clock = std::chrono::steady_clock;

    auto t0 = clock::now();
    families();
    double setup = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("setup: %zu shell families built in %.2fs\n", families().size(), setup);

    int passed = 0;
    for (const auto& c : criteria) {
        auto start = clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), "-"};
        }
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        bool pass = o.pass && secs < c.limit_s;
        passed += pass;
        std::printf("%s %2d %-40s value: %s | threshold: %s | time %.2fs (limit %.0fs)\n", pass ? "PASS" : "FAIL",
                    c.id, c.name.c_str(), o.value.c_str(), o.threshold.c_str(), secs, c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
