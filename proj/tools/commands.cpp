#include "commands.hpp"

#include "manifest.hpp"

#include "univhol/cubes.hpp"
#include "univhol/density.hpp"
#include "univhol/harmonic.hpp"
#include "univhol/series.hpp"
#include "univhol/shiftdyn.hpp"
#include "univhol/synth.hpp"
#include "univhol/weights.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace uh::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat rat_arg(const std::string& flag, const std::string& s) {
    try {
        return parse_rat(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

Int int_arg(const std::string& flag, const std::string& s) {
    Rat q = rat_arg(flag, s);
    if (q.get_den() != 1) throw UsageError(flag + ": integer expected, got '" + s + "'");
    return q.get_num();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Output directory, manifest bookkeeping and recorded inputs for one command.
struct Context {
    fs::path out_dir = "out";
    RunManifest man;

    void emit(const std::string& name, const std::string& bytes) {
        if (fs::path(name).is_absolute() || name.find("..") != std::string::npos)
            throw UsageError("artifact names must be relative to --out-dir: " + name);
        write_file(out_dir / name, bytes);
        man.artifacts[name] = sha256_hex(bytes);
    }

    std::string input(const std::string& path) {
        std::string bytes = read_file(path);
        auto it = std::find_if(man.inputs.begin(), man.inputs.end(), [&](const auto& r) { return r.path == path; });
        if (it == man.inputs.end()) man.inputs.push_back({path, sha256_hex(bytes), bytes});
        return bytes;
    }

    nlohmann::json input_json(const std::string& path) {
        try {
            return nlohmann::json::parse(input(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(path + ": " + e.what());
        }
    }
};

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggestion(const CLI::App* leaf, const std::vector<std::string>& extras) {
    if (!leaf || extras.empty()) return "";
    std::string bad = extras.front();
    if (auto eq = bad.find('='); eq != std::string::npos) bad.resize(eq);
    std::string best;
    std::size_t best_d = 3;
    for (const auto* opt : leaf->get_options()) {
        for (const auto& name : opt->get_lnames()) {
            std::string flag = "--" + name;
            std::size_t d = edit_distance(bad, flag);
            if (d < best_d) {
                best_d = d;
                best = flag;
            }
        }
    }
    return best.empty() ? "" : "did you mean " + best + "?";
}

// Long flags on the command line that the leaf subcommand does not define.
std::vector<std::string> unknown_flags(const CLI::App* leaf, const std::vector<std::string>& args) {
    std::vector<std::string> unknown;
    for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        std::string name = a.substr(0, a.find('='));
        bool known = name == "--out-dir";
        for (const auto* opt : leaf->get_options())
            for (const auto& ln : opt->get_lnames()) known = known || name == "--" + ln;
        if (!known) unknown.push_back(name);
    }
    return unknown;
}

const CLI::App* deepest_parsed(const CLI::App* app) {
    for (const auto* sub : app->get_subcommands())
        if (sub->parsed()) return deepest_parsed(sub);
    return app;
}

CRat parse_crat_json(const nlohmann::json& j) {
    if (j.is_string()) return CRat(parse_rat(j.get<std::string>()), Rat(0));
    return CRat(parse_rat(j.at("re").get<std::string>()),
                j.contains("im") ? parse_rat(j.at("im").get<std::string>()) : Rat(0));
}

std::vector<Rat> random_theta(std::uint32_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> face(0, 2 * n - 1);
    std::uniform_int_distribution<long> num(-(1L << 20), 1L << 20);
    std::bernoulli_distribution sign;
    std::vector<Rat> th(2 * n);
    for (auto& x : th) x = ratio(num(rng), 1L << 20);
    th[face(rng)] = sign(rng) ? Rat(1) : Rat(-1);
    return th;
}

// ---- commands ----------------------------------------------------------

struct WeightsBuild {
    std::string phi = "exp:1,1", enumeration = "deglex";
    std::uint32_t n = 1;
    std::size_t horizon = 30;
    int run(Context& ctx) const {
        auto g = parse_growth(phi);
        WeightTable v = build_slow_growth_weight(*g, enumeration_from_string(enumeration), n, horizon);
        ctx.emit("weights.json", dump(to_json(v)));
        OrderCheck oc = check_order_condition(v);
        if (!oc.ok) {
            std::cerr << "order condition fails between " << oc.violation->first.str() << " and "
                      << oc.violation->second.str() << "\n";
            return kExitCertification;
        }
        std::cout << "weights: " << v.horizon() << " entries, phi " << v.phi_spec() << "\n";
        return kExitOk;
    }
};

nlohmann::json certificate_json(const ConvexityCertificate& cert, const VerifyReport& vr,
                                const std::optional<Rat>& central) {
    nlohmann::json cj = {{"ok", cert.ok && vr.ok}};
    if (central) cj["central_L"] = to_string(*central);
    if (cert.ok) cj["tree"] = to_json(cert.tree);
    if (!vr.ok) cj["failure"] = vr.violation;
    return cj;
}

struct CubesShell {
    std::uint32_t n = 1;
    std::string k = "1", delta, R = "auto", N = "auto", L;
    bool certify = false;
    int run(Context& ctx) const {
        Int kk = int_arg("--k", k);
        if (kk < 1 || !kk.fits_ulong_p()) throw UsageError("--k must be a positive integer");
        Rat d = rat_arg("--delta", delta);
        ShellMinimums mins = shell_minimums(n, kk.get_ui(), d);
        Int RR = R == "auto" ? mins.R0 : int_arg("--R", R);
        Int NN = N == "auto" ? mins.N0 : int_arg("--N", N);
        CubeFamily fam = shell_arrangement(n, kk.get_ui(), d, RR, NN);
        std::optional<Rat> central;
        if (!L.empty()) central = rat_arg("--L", L);
        ctx.emit("family.json", dump(to_json(fam, !fam.implicit())));
        ctx.emit("family.svg", render_svg(fam, central));
        bool ok = inside_shell(fam);
        DisjointReport dr = check_disjoint(fam);
        ok = ok && dr.ok;
        nlohmann::json checks = {{"inside_shell", inside_shell(fam)}, {"disjoint", dr.ok}};
        if (dr.overlap) checks["overlap"] = {dr.overlap->first, dr.overlap->second};
        if (certify) {
            ConvexityCertificate cert = certify_poly_convexity(fam, central);
            VerifyReport vr = cert.ok ? verify_certificate(fam, cert.tree, central) : VerifyReport{false, cert.failure};
            nlohmann::json cj = certificate_json(cert, vr, central);
            ctx.emit("certificate.json", dump(cj));
            checks["certificate"] = cert.ok && vr.ok;
            ok = ok && cert.ok && vr.ok;
        }
        ctx.emit("checks.json", dump(checks));
        std::cout << "family: " << fam.cube_count().get_str() << " cubes, R=" << fam.R.get_str()
                  << " N=" << fam.N.get_str() << (ok ? ", all checks pass" : ", CHECK FAILED") << "\n";
        return ok ? kExitOk : kExitCertification;
    }
};

struct CubesCertify {
    std::string family, L;
    int run(Context& ctx) const {
        CubeFamily fam = cube_family_from_json(ctx.input_json(family));
        std::optional<Rat> central;
        if (!L.empty()) central = rat_arg("--L", L);
        ConvexityCertificate cert = certify_poly_convexity(fam, central);
        VerifyReport vr = cert.ok ? verify_certificate(fam, cert.tree, central) : VerifyReport{false, cert.failure};
        nlohmann::json cj = certificate_json(cert, vr, central);
        if (!cert.stuck.empty()) cj["stuck"] = cert.stuck;
        ctx.emit("certificate.json", dump(cj));
        std::cout << (cert.ok && vr.ok ? "certificate verified\n" : "certificate FAILED: " + vr.violation + "\n");
        return cert.ok && vr.ok ? kExitOk : kExitCertification;
    }
};

struct DensityCmd {
    std::string pairs;
    std::uint64_t horizon = 100000;
    int run(Context& ctx) const {
        std::vector<std::pair<long, std::uint64_t>> ps;
        std::string item;
        std::istringstream is(pairs);
        while (std::getline(is, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos) throw UsageError("--pairs expects l:nu,l:nu,...");
            Int l = int_arg("--pairs", item.substr(0, colon)), nu = int_arg("--pairs", item.substr(colon + 1));
            if (!l.fits_slong_p() || nu < 1 || !nu.fits_ulong_p()) throw UsageError("--pairs: values out of range");
            ps.emplace_back(l.get_si(), nu.get_ui());
        }
        if (ps.empty()) throw UsageError("--pairs is empty");
        DensityFamily fam = build_finite_family(ps);
        FamilyCheck fc = verify_family(fam, horizon, geometric_checkpoints(1, horizon));
        nlohmann::json j = to_json(fam);
        j["check"] = {{"horizon", horizon}, {"ok", fc.ok}, {"min_ratio_margin", to_string(fc.min_ratio_margin)}};
        if (!fc.ok) j["check"]["violation"] = fc.violation;
        ctx.emit("density.json", dump(j));
        std::cout << "density family: S=" << fam.S << (fc.ok ? ", verified" : ", FAILED: " + fc.violation) << "\n";
        return fc.ok ? kExitOk : kExitCertification;
    }
};

struct CheckGrowth {
    std::string map, weights, phi = "exp:1,1", rmax = "50";
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    int run(Context& ctx) const {
        EntireMapApprox f = map_from_json(ctx.input_json(map));
        WeightTable v = weights_from_json(ctx.input_json(weights));
        auto g = parse_growth(phi);
        GrowthCertificate c = slow_growth_certificate(f, v, *g);
        nlohmann::json j = to_json(c);
        bool ok = c.ok;
        if (samples > 0) {
            GrowthSampleReport sr = sample_growth_bound(f, *g, c.alpha_norm.hi, samples, seed, rat_arg("--rmax", rmax));
            j["samples"] = {{"count", sr.samples}, {"violations", sr.violations}, {"max_ratio", sr.max_ratio}};
            ok = ok && sr.violations == 0;
        }
        ctx.emit("certificate.json", dump(j));
        std::cout << (ok ? "growth certificate passes\n" : "growth certificate FAILED\n");
        return ok ? kExitOk : kExitCertification;
    }
};

struct SynthSpectral {
    std::string dirs, targets, phi = "exp:1,1", weights;
    std::size_t horizon = 120;
    std::string max_iterations = "1000000000000";
    unsigned max_offset = 60, retries = 6;
    int run(Context& ctx) const {
        std::vector<Direction> ds;
        for (const auto& d : ctx.input_json(dirs)) {
            Direction a;
            for (const auto& x : d) a.push_back(parse_crat_json(x));
            ds.push_back(std::move(a));
        }
        if (ds.empty()) throw UsageError("--dirs lists no direction");
        const std::uint32_t n = static_cast<std::uint32_t>(ds[0].size());
        std::vector<SpectralTarget> ts;
        for (const auto& t : ctx.input_json(targets)) {
            SpectralTarget st;
            std::size_t dir = t.at("direction").get<std::size_t>();
            if (dir == 0) throw UsageError("target directions are 1-based");
            st.direction = dir - 1;
            st.beta = block_from_json(t.at("beta"));
            st.rho = parse_rat(t.at("rho").get<std::string>());
            st.eps = parse_rat(t.at("eps").get<std::string>());
            ts.push_back(std::move(st));
        }
        auto g = parse_growth(phi);
        WeightTable v;
        if (!weights.empty()) {
            v = weights_from_json(ctx.input_json(weights));
        } else {
            v = build_slow_growth_weight(*g, Enumeration::Deglex, n, horizon);
            ctx.emit("weights.json", dump(to_json(v)));
        }
        SpectralOptions opt;
        opt.budget.max_iterations = int_arg("--max-iterations", max_iterations);
        opt.budget.max_offset = max_offset;
        opt.retries = retries;
        SpectralResult r = synth_spectral(ds, ts, v, *g, n, opt);
        ctx.emit("spectral.json", dump(to_json(r)));
        ctx.emit("F.json", dump(to_json(EntireMapApprox{n, r.alpha, "spectral"})));
        std::cout << "spectral synthesis: " << r.visits.size() << " visits"
                  << (r.ok ? ", verified" : ", FAILED: " + r.failure) << "\n";
        return r.ok ? kExitOk : kExitCertification;
    }
};

struct SynthGeometric {
    std::string config, out = "F.json", report = "report.json";
    std::size_t stages = 0, thetas = 10;
    unsigned per_edge = 64;
    std::uint64_t seed = 1;
    int run(Context& ctx) const {
        std::size_t L = 0;
        SynthesisSchedule s = schedule_from_config(ctx.input_json(config), &L);
        if (stages > 0) {
            if (stages > s.stages.size()) throw UsageError("--stages exceeds the stages listed in the config");
            L = stages;
        }
        GeometricOptions opt;
        opt.fit.validation_per_edge = per_edge;
        opt.fit.seed = seed;
        opt.seed = seed;
        ScheduleCheck sc = validate_schedule(s);
        nlohmann::json rep = {{"schedule", to_json(s)}, {"schedule_ok", sc.ok}};
        if (!sc.ok) {
            rep["schedule_violation"] = sc.violation;
            ctx.emit(report, dump(rep));
            std::cerr << "schedule rejected: " << sc.violation << "\n";
            return kExitCertification;
        }
        GeometricResult r = run_geometric(s, L, opt);
        rep["result"] = to_json(r);
        if (r.completed > 0) {
            std::mt19937_64 rng(seed);
            nlohmann::json hits = nlohmann::json::array();
            const StageSpec& st = s.stages.front();
            for (std::size_t i = 0; i < thetas; ++i)
                hits.push_back(to_json(hit_time_report(r.F, s, r.completed, random_theta(s.n, rng), st.l, st.j)));
            rep["hit_times"] = hits;
        }
        if (r.completed == L) ctx.emit(out, dump(to_json(r.F)));
        ctx.emit(report, dump(rep));
        std::cout << "geometric synthesis: " << r.completed << "/" << L << " stages"
                  << (r.ok ? ", verified" : ", FAILED: " + r.failure) << "\n";
        return r.ok ? kExitOk : kExitCertification;
    }
};

struct HarmonicBasisCmd {
    std::uint32_t n = 2;
    unsigned deg = 6;
    std::string phi = "exp:1,1";
    int run(Context& ctx) const {
        if (n < 2 || n > 4) throw UsageError("--n must lie in 2..4");
        HarmonicChainBasis b = build_chain_basis(n, deg);
        std::vector<HarmonicShiftMatrix> B;
        nlohmann::json shifts = nlohmann::json::array();
        for (unsigned l = 1; l <= n; ++l) {
            B.push_back(shift_matrix(b, l));
            shifts.push_back(to_json(B.back()));
        }
        auto g = parse_growth(phi);
        WeightTable v = build_harmonic_weight(b, B, *g);
        BasisCheck bc = check_basis(b);
        bool law = check_harmonic_law(B, v);
        ctx.emit("basis.json", dump(to_json(b)));
        ctx.emit("shifts.json", dump(shifts));
        ctx.emit("weights.json", dump(to_json(v)));
        bool ok = bc.ok && law;
        std::cout << "harmonic basis: " << b.elements.size() << " elements in " << b.chain_start.size() << " chains"
                  << (ok ? ", verified" : ", FAILED: " + (bc.ok ? std::string("weight law") : bc.violation)) << "\n";
        return ok ? kExitOk : kExitCertification;
    }
};

struct RenderSvg {
    std::string family, L, out = "family.svg";
    int run(Context& ctx) const {
        CubeFamily fam = cube_family_from_json(ctx.input_json(family));
        std::optional<Rat> central;
        if (!L.empty()) central = rat_arg("--L", L);
        ctx.emit(out, render_svg(fam, central));
        return kExitOk;
    }
};

std::vector<std::string> strip_out_dir(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out-dir") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out-dir=", 0) == 0) continue;
        out.push_back(args[i]);
    }
    return out;
}

nlohmann::json options_of(const CLI::App* leaf) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto* opt : leaf->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "--out-dir" || opt->count() == 0) continue;
        auto res = opt->results();
        j[opt->get_name()] = res.size() == 1 ? nlohmann::json(res[0]) : nlohmann::json(res);
    }
    return j;
}

int replay(const std::string& manifest_path, const fs::path& out_dir) {
    RunManifest m = manifest_from_json(nlohmann::json::parse(read_file(manifest_path)));
    std::vector<std::string> args = m.command;
    for (std::size_t i = 0; i < m.inputs.size(); ++i) {
        fs::path local = out_dir / "inputs" / (std::to_string(i + 1) + "_" + fs::path(m.inputs[i].path).filename().string());
        write_file(local, m.inputs[i].content);
        for (auto& a : args) {
            if (a == m.inputs[i].path) a = local.string();
            else if (auto eq = a.find('='); eq != std::string::npos && a.substr(eq + 1) == m.inputs[i].path)
                a = a.substr(0, eq + 1) + local.string();
        }
    }
    args.push_back("--out-dir");
    args.push_back(out_dir.string());
    int code = run_cli(args);
    bool same = true;
    for (const auto& [name, hash] : m.artifacts) {
        fs::path p = out_dir / name;
        bool eq = fs::exists(p) && sha256_hex(read_file(p)) == hash;
        std::cout << (eq ? "identical " : "DIFFERS   ") << name << "\n";
        same = same && eq;
    }
    std::cout << "replay exit code " << code << ", artifacts " << (same ? "byte-identical" : "differ") << "\n";
    return same ? kExitOk : kExitCertification;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Certified constructions for universal holomorphic maps"};
    app.set_version_flag("--version", std::string(UNIVHOL_VERSION));
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx;
    std::string out_dir = "out";
    app.add_option("--out-dir", out_dir, "directory for artifacts and manifest.json");
    std::uint64_t seed = 1;

    WeightsBuild wb;
    auto* weights = app.add_subcommand("weights", "weight tables")->require_subcommand(1);
    auto* wbuild = weights->add_subcommand("build", "slow-growth weight table");
    wbuild->add_option("--phi", wb.phi, "growth function, exp:c,beta or logsq:c");
    wbuild->add_option("--enum", wb.enumeration, "deglex or prime")->check(CLI::IsMember({"deglex", "prime"}));
    wbuild->add_option("--n", wb.n, "dimension for deglex")->check(CLI::PositiveNumber);
    wbuild->add_option("--horizon", wb.horizon, "number of indices")->check(CLI::PositiveNumber);

    CubesShell cs;
    CubesCertify cc;
    auto* cubes = app.add_subcommand("cubes", "hypercube arrangements")->require_subcommand(1);
    auto* cshell = cubes->add_subcommand("shell", "shell arrangement around a radius");
    cshell->add_option("--n", cs.n, "complex dimension")->check(CLI::Range(1, 2));
    cshell->add_option("--k", cs.k, "cube half-width");
    cshell->add_option("--delta", cs.delta, "net parameter p/q in (0, 1/2)")->required();
    cshell->add_option("--R", cs.R, "inner radius or auto");
    cshell->add_option("--N", cs.N, "shell half-width or auto");
    cshell->add_option("--L", cs.L, "central cube half-width for the certificate");
    cshell->add_flag("--certify", cs.certify, "build and verify a separation certificate");
    auto* ccert = cubes->add_subcommand("certify", "separation certificate for a family");
    ccert->add_option("--family", cc.family, "family JSON")->required();
    ccert->add_option("--L", cc.L, "central cube half-width");

    DensityCmd dc;
    auto* density = app.add_subcommand("density", "positive lower density families")->require_subcommand(1);
    auto* dfam = density->add_subcommand("family", "finite family A_q = 4Vq + 4VQ N");
    dfam->add_option("--pairs", dc.pairs, "l:nu,l:nu,...")->required();
    dfam->add_option("--horizon", dc.horizon, "verification horizon")->check(CLI::PositiveNumber);

    SynthSpectral ss;
    SynthGeometric sg;
    auto* synth = app.add_subcommand("synth", "synthesis of approximating maps")->require_subcommand(1);
    auto* sspec = synth->add_subcommand("spectral", "sequential witnesses in l1(v)");
    sspec->add_option("--dirs", ss.dirs, "directions JSON")->required();
    sspec->add_option("--targets", ss.targets, "targets JSON")->required();
    sspec->add_option("--phi", ss.phi, "growth function");
    sspec->add_option("--weights", ss.weights, "weight table JSON (built from --phi when absent)");
    sspec->add_option("--horizon", ss.horizon, "horizon of the built weight table");
    sspec->add_option("--max-iterations", ss.max_iterations, "witness iteration budget");
    sspec->add_option("--max-offset", ss.max_offset, "witness offset budget");
    sspec->add_option("--retries", ss.retries, "tolerance refinements per target");
    auto* sgeo = synth->add_subcommand("geometric", "staged Runge synthesis on shell arrangements");
    sgeo->add_option("--config", sg.config, "schedule JSON")->required();
    sgeo->add_option("--stages", sg.stages, "number of stages (default from config)");
    sgeo->add_option("--out", sg.out, "final map, relative to --out-dir");
    sgeo->add_option("--report", sg.report, "report, relative to --out-dir");
    sgeo->add_option("--per-edge", sg.per_edge, "validation points per cube edge")->check(CLI::Range(4, 4096));
    sgeo->add_option("--thetas", sg.thetas, "directions sampled for hit times");
    sgeo->add_option("--seed", seed, "random seed");

    CheckGrowth cg;
    auto* check = app.add_subcommand("check", "certificate checks")->require_subcommand(1);
    auto* cgrowth = check->add_subcommand("growth", "slow-growth certificate of a map");
    cgrowth->add_option("--map", cg.map, "map JSON")->required();
    cgrowth->add_option("--weights", cg.weights, "weight table JSON")->required();
    cgrowth->add_option("--phi", cg.phi, "growth function");
    cgrowth->add_option("--samples", cg.samples, "additional sampled points");
    cgrowth->add_option("--rmax", cg.rmax, "sampling radius");
    cgrowth->add_option("--seed", seed, "random seed");

    HarmonicBasisCmd hb;
    auto* harmonic = app.add_subcommand("harmonic", "harmonic polynomial layer")->require_subcommand(1);
    auto* hbasis = harmonic->add_subcommand("basis", "chain basis, shift matrices and weights");
    hbasis->add_option("--n", hb.n, "number of real variables");
    hbasis->add_option("--deg", hb.deg, "degree cap")->check(CLI::Range(0, 12));
    hbasis->add_option("--phi", hb.phi, "growth function");

    RenderSvg rs;
    auto* render = app.add_subcommand("render", "presentation output")->require_subcommand(1);
    auto* rsvg = render->add_subcommand("svg", "cross-section of a cube family");
    rsvg->add_option("--family", rs.family, "family JSON")->required();
    rsvg->add_option("--L", rs.L, "central cube half-width");
    rsvg->add_option("--out", rs.out, "file name relative to --out-dir");

    std::string manifest_path;
    auto* rep = app.add_subcommand("replay", "rerun a manifest and compare artifacts");
    rep->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        const CLI::App* leaf = deepest_parsed(&app);
        std::string hint = suggestion(leaf, unknown_flags(leaf, args));
        if (!hint.empty()) std::cerr << hint << "\n";
        return kExitUsage;
    }

    ctx.out_dir = out_dir;
    if (rep->parsed()) {
        try {
            return replay(manifest_path, out_dir);
        } catch (const std::exception& e) {
            std::cerr << "replay failed: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    const CLI::App* leaf = deepest_parsed(&app);
    std::string path;
    for (const CLI::App* a = leaf; a && a != &app; a = a->get_parent()) path = a->get_name() + (path.empty() ? "" : " " + path);
    ctx.man.command = strip_out_dir(args);
    ctx.man.config = {{"command", path}, {"options", options_of(leaf)}};
    ctx.man.seed = seed;
    ctx.man.tool_version = UNIVHOL_VERSION;
    sg.seed = seed;
    cg.seed = seed;

    int code = kExitOk;
    try {
        if (wbuild->parsed()) code = wb.run(ctx);
        else if (cshell->parsed()) code = cs.run(ctx);
        else if (ccert->parsed()) code = cc.run(ctx);
        else if (dfam->parsed()) code = dc.run(ctx);
        else if (sspec->parsed()) code = ss.run(ctx);
        else if (sgeo->parsed()) code = sg.run(ctx);
        else if (cgrowth->parsed()) code = cg.run(ctx);
        else if (hbasis->parsed()) code = hb.run(ctx);
        else if (rsvg->parsed()) code = rs.run(ctx);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    ctx.man.config["exit_code"] = code;
    write_file(ctx.out_dir / "manifest.json", dump(to_json(ctx.man)));
    return code;
}

}  // namespace uh::cli
