#include "univhol/cubes.hpp"

#include <algorithm>
#include <sstream>

namespace uh {

bool open_cube_inside(const std::vector<Rat>& c, const Rat& w, const Hypercube& outer) {
    if (c.size() != outer.center.size()) throw std::invalid_argument("cube dimension mismatch");
    // Q(c,w) open inside closed Q(o,W) iff |c_i - o_i| + w <= W on every axis
    for (std::size_t i = 0; i < c.size(); ++i)
        if (abs(Rat(c[i] - outer.center[i])) + w > outer.half_width) return false;
    return true;
}

std::vector<Rat> Cone::from_first(std::vector<Rat> x) const {
    const std::uint32_t m = coordinate() - 1;
    std::swap(x[0], x[m]);
    if (sign() < 0) x[m] = -x[m];
    return x;
}

std::vector<Rat> Cone::to_first(std::vector<Rat> y) const {
    const std::uint32_t m = coordinate() - 1;
    if (sign() < 0) y[m] = -y[m];
    std::swap(y[0], y[m]);
    return y;
}

Cone cone_of(const std::vector<Rat>& theta) {
    if (theta.empty() || theta.size() % 2 != 0) throw std::invalid_argument("point must lie in R^{2n}");
    Rat best = -1;
    std::uint32_t at = 0;
    for (std::uint32_t i = 0; i < theta.size(); ++i) {
        Rat a = abs(theta[i]);
        if (a > best) {
            best = a;
            at = i;
        }
    }
    if (best != 1) throw std::invalid_argument("point is not on the boundary of the unit cube");
    Cone c;
    c.n = static_cast<std::uint32_t>(theta.size() / 2);
    c.s = 2 * (at + 1) - (sgn(theta[at]) >= 0 ? 1 : 0);
    return c;
}

namespace {

Int ipow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

}  // namespace

std::vector<unsigned long> FaceGridParams::layer_offsets(const Int& j) const {
    if (j < 1 || j > layers) throw std::out_of_range("layer index out of range");
    std::vector<unsigned long> t(2 * n - 1);
    Int idx = j - 1;
    for (std::size_t i = t.size(); i-- > 0;) {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), idx.get_mpz_t(), l.get_mpz_t());
        t[i] = r.get_ui();
        idx = q;
    }
    return t;
}

Int FaceGridParams::layer_of(const std::vector<unsigned long>& t) const {
    if (t.size() != 2 * n - 1) throw std::invalid_argument("wrong number of layer offsets");
    Int idx = 0;
    for (unsigned long ti : t) {
        if (ti >= l) throw std::out_of_range("layer offset out of range");
        idx = idx * l + ti;
    }
    return idx + 1;
}

std::pair<Int, Int> FaceGridParams::lattice_range(unsigned long t) const {
    Rat o = Rat(t) * delta0;
    return {ceil_rat((Rat(-1) - o) / A), floor_rat((Rat(1) - o) / A)};
}

FaceGridParams face_grid_params(std::uint32_t n, unsigned long k, const Rat& delta, const Int& R) {
    if (n == 0) throw std::invalid_argument("dimension must be positive");
    if (sgn(delta) <= 0 || delta >= Rat(1, 2)) throw std::invalid_argument("delta must lie in (0, 1/2)");
    if (R < 0) throw std::invalid_argument("R must be nonnegative");
    FaceGridParams p;
    p.n = n;
    p.k = k;
    p.delta = delta;
    p.R = R;
    const Int w = Int(2 * k + 1);
    p.l = floor_rat(Rat(4 * k + 2) / delta + 1) + 1;
    p.layers = ipow(p.l, 2 * n - 1);
    p.N = w * p.layers + 1;
    p.R0 = w * (p.layers - 2);
    p.A = Rat(w) / Rat(w + R);
    p.delta0 = delta / Rat(w * p.layers + R);
    return p;
}

bool net_inequality_holds(const FaceGridParams& p) { return Rat(p.l) * p.delta0 > p.A; }

bool spacing_holds(const FaceGridParams& p) {
    const Rat w(2 * p.k + 1);
    return Rat(p.r(1)) * p.A >= w && w > 2 * p.half_width();
}

namespace {

// Number of lattice points per offset t, and their total.
std::vector<Int> lattice_counts(const FaceGridParams& p) {
    std::vector<Int> c(p.l.get_ui());
    for (unsigned long t = 0; t < c.size(); ++t) {
        auto [lo, hi] = p.lattice_range(t);
        c[t] = hi >= lo ? Int(hi - lo + 1) : Int(0);
    }
    return c;
}

}  // namespace

Int FaceFamily::cube_count() const {
    Int per = 0;
    for (const auto& c : lattice_counts(params)) per += c;
    return ipow(per, 2 * params.n - 1);
}

Int FaceFamily::cubes_in_layer(const Int& j) const {
    Int c = 1;
    for (unsigned long t : params.layer_offsets(j)) {
        auto [lo, hi] = params.lattice_range(t);
        c *= hi >= lo ? Int(hi - lo + 1) : Int(0);
    }
    return c;
}

std::vector<Rat> FaceFamily::center(const Int& j, const std::vector<Int>& lattice) const {
    auto t = params.layer_offsets(j);
    if (lattice.size() != t.size()) throw std::invalid_argument("wrong number of lattice indices");
    const Rat r(params.r(j));
    std::vector<Rat> x(2 * params.n);
    x[0] = r;
    for (std::size_t i = 0; i < t.size(); ++i) x[i + 1] = r * (Rat(t[i]) * params.delta0 + Rat(lattice[i]) * params.A);
    return cone.from_first(std::move(x));
}

std::vector<std::pair<Rat, Rat>> FaceFamily::bounding_box() const {
    const Rat hw = params.half_width();
    const Rat r1(params.r(1)), rl(params.r(params.layers));
    std::vector<std::pair<Rat, Rat>> box(2 * params.n, {-rl - hw, rl + hw});
    const std::uint32_t m = cone.coordinate() - 1;
    if (cone.sign() > 0)
        box[m] = {r1 - hw, rl + hw};
    else
        box[m] = {-rl - hw, -r1 + hw};
    return box;
}

Int CubeFamily::cube_count() const {
    if (!cubes.empty() || faces.empty()) return Int(static_cast<unsigned long>(cubes.size()));
    Int c = 0;
    for (const auto& f : faces) c += f.cube_count();
    return c;
}

namespace {

void materialize(CubeFamily& fam, std::size_t limit) {
    if (fam.cube_count() > Int(static_cast<unsigned long>(limit))) return;
    const Rat hw = fam.half_width;
    for (std::size_t fi = 0; fi < fam.faces.size(); ++fi) {
        const FaceFamily& f = fam.faces[fi];
        const auto& p = f.params;
        for (Int j = 1; j <= p.layers; ++j) {
            auto t = p.layer_offsets(j);
            std::vector<std::pair<Int, Int>> ranges;
            bool empty = false;
            for (unsigned long ti : t) {
                ranges.push_back(p.lattice_range(ti));
                if (ranges.back().second < ranges.back().first) empty = true;
            }
            if (empty) continue;
            std::vector<Int> s;
            for (const auto& r : ranges) s.push_back(r.first);
            while (true) {
                fam.cubes.push_back({f.center(j, s), hw, true});
                fam.provenance.push_back({fi, j, s});
                std::size_t i = s.size();
                while (i-- > 0) {
                    if (s[i] < ranges[i].second) {
                        ++s[i];
                        break;
                    }
                    s[i] = ranges[i].first;
                }
                if (i == static_cast<std::size_t>(-1)) break;
            }
        }
    }
}

void check_k(unsigned long k) {
    if (k > 1000000) throw std::invalid_argument("k is out of the supported range");
}

}  // namespace

CubeFamily face_grid(std::uint32_t n, std::uint32_t s, unsigned long k, const Rat& delta, const Int& R,
                     std::size_t materialize_limit) {
    check_k(k);
    if (s == 0 || s > 4 * n) throw std::invalid_argument("cone index must lie in 1..4n");
    FaceGridParams p = face_grid_params(n, k, delta, R);
    if (R < p.R0)
        throw CubeParamError("R = " + R.get_str() + " is below the required R0 = " + p.R0.get_str(), p.R0, p.N);
    CubeFamily fam;
    fam.n = n;
    fam.k = k;
    fam.delta = delta;
    fam.half_width = p.half_width();
    fam.R = R;
    fam.N = p.N;
    fam.faces.push_back({Cone{s, n}, p});
    materialize(fam, materialize_limit);
    return fam;
}

ShellMinimums shell_minimums(std::uint32_t n, unsigned long k, const Rat& delta) {
    FaceGridParams p = face_grid_params(n, k, delta, Int(0));
    ShellMinimums m;
    m.R0 = p.R0;
    m.face_width = p.N;
    m.N0 = Int(4 * n + 1) * (p.N + Int(2 * k + 2));
    return m;
}

CubeFamily shell_arrangement(std::uint32_t n, unsigned long k, const Rat& delta, const Int& R, const Int& N,
                             std::size_t materialize_limit) {
    check_k(k);
    ShellMinimums mins = shell_minimums(n, k, delta);
    if (R < mins.R0 || N < mins.N0)
        throw CubeParamError("shell needs R >= " + mins.R0.get_str() + " and N >= " + mins.N0.get_str(), mins.R0,
                             mins.N0);
    CubeFamily fam;
    fam.n = n;
    fam.k = k;
    fam.delta = delta;
    fam.half_width = Rat(k) + delta;
    fam.R = R;
    fam.N = N;
    const Int step = mins.face_width + Int(2 * k + 2);
    for (std::uint32_t s = 1; s <= 4 * n; ++s) {
        Int Rs = R + step * s;
        fam.faces.push_back({Cone{s, n}, face_grid_params(n, k, delta, Rs + Int(k + 1))});
    }
    materialize(fam, materialize_limit);
    return fam;
}

CubeFamily build_cubes(std::vector<Hypercube> cubes) {
    CubeFamily fam;
    if (!cubes.empty()) {
        if (cubes[0].center.empty() || cubes[0].center.size() % 2 != 0)
            throw std::invalid_argument("cubes must live in R^{2n}");
        fam.n = static_cast<std::uint32_t>(cubes[0].center.size() / 2);
        fam.half_width = cubes[0].half_width;
    }
    for (const auto& c : cubes) {
        if (c.center.size() != 2 * fam.n) throw std::invalid_argument("cubes of mixed dimension");
        if (sgn(c.half_width) <= 0) throw std::invalid_argument("half width must be positive");
    }
    fam.cubes = std::move(cubes);
    return fam;
}

bool inside_shell(const CubeFamily& fam) {
    const Rat inner(fam.R), outer(fam.R + fam.N);
    auto box_ok = [&](const std::vector<std::pair<Rat, Rat>>& box) {
        bool clear_of_inner = false;
        for (const auto& [lo, hi] : box) {
            if (abs(lo) >= outer || abs(hi) >= outer) return false;
            if (lo > inner || hi < -inner) clear_of_inner = true;
        }
        return clear_of_inner;
    };
    if (!fam.cubes.empty()) {
        for (const auto& c : fam.cubes) {
            std::vector<std::pair<Rat, Rat>> box;
            for (const auto& x : c.center) box.emplace_back(x - c.half_width, x + c.half_width);
            if (!box_ok(box)) return false;
        }
        return true;
    }
    for (const auto& f : fam.faces)
        if (!box_ok(f.bounding_box())) return false;
    return true;
}

std::optional<CubeHit> containing_cube(const std::vector<Rat>& theta, const CubeFamily& fam) {
    if (theta.size() != 2 * fam.n) throw std::invalid_argument("theta has the wrong dimension");
    Cone cone = cone_of(theta);
    const FaceFamily* face = nullptr;
    std::size_t fi = 0;
    for (; fi < fam.faces.size(); ++fi)
        if (fam.faces[fi].cone.s == cone.s) {
            face = &fam.faces[fi];
            break;
        }
    if (!face) return std::nullopt;
    const auto& p = face->params;
    std::vector<Rat> x = cone.to_first(theta);
    // per transverse axis: grid values a = t delta0 + s A with |a| <= 1 near x_i
    struct Cand {
        unsigned long t;
        Int s;
        Rat dist;
    };
    std::vector<std::vector<Cand>> cands(2 * fam.n - 1);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const Rat& xi = x[i + 1];
        for (unsigned long t = 0; t < p.l; ++t) {
            Rat o = Rat(t) * p.delta0;
            auto [lo, hi] = p.lattice_range(t);
            Int a = std::max(lo, ceil_rat((xi - p.delta0 - o) / p.A));
            Int b = std::min(hi, floor_rat((xi + p.delta0 - o) / p.A));
            for (Int s = a; s <= b; ++s) cands[i].push_back({t, s, abs(Rat(xi - o - Rat(s) * p.A))});
        }
        std::sort(cands[i].begin(), cands[i].end(), [](const Cand& u, const Cand& v) { return u.dist < v.dist; });
        if (cands[i].empty()) return std::nullopt;
    }
    std::vector<std::size_t> pick(cands.size(), 0);
    const Rat k(fam.k);
    while (true) {
        std::vector<unsigned long> t;
        std::vector<Int> s;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            t.push_back(cands[i][pick[i]].t);
            s.push_back(cands[i][pick[i]].s);
        }
        Int j = p.layer_of(t);
        Int m = p.r(j);
        Hypercube cube{face->center(j, s), p.half_width(), true};
        std::vector<Rat> mc;
        for (const auto& th : theta) mc.push_back(Rat(m) * th);
        if (open_cube_inside(mc, k, cube)) return CubeHit{m, CubeRef{fi, j, s}, cube};
        std::size_t i = pick.size();
        while (i-- > 0) {
            if (++pick[i] < cands[i].size()) break;
            pick[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) return std::nullopt;
    }
}

bool net_covers_face(const CubeFamily& fam, std::size_t f) {
    if (fam.n != 1) throw std::invalid_argument("exact net check is available for n = 1 only");
    const auto& p = fam.faces.at(f).params;
    std::vector<Rat> pts;
    for (unsigned long t = 0; t < p.l; ++t) {
        auto [lo, hi] = p.lattice_range(t);
        for (Int s = lo; s <= hi; ++s) pts.push_back(Rat(t) * p.delta0 + Rat(s) * p.A);
    }
    if (pts.empty()) return false;
    std::sort(pts.begin(), pts.end());
    // union of [a - delta0, a + delta0] must contain [-1, 1]
    if (pts.front() - p.delta0 > -1 || pts.back() + p.delta0 < 1) return false;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i] - pts[i - 1] > 2 * p.delta0) return false;
    return true;
}

namespace {

struct Item {
    SeparationNode::Kind kind;
    std::size_t id;
    std::vector<Rat> lo, hi;
};

std::string item_name(const CubeFamily& fam, const Item& it) {
    switch (it.kind) {
        case SeparationNode::Kind::Cube: return describe(fam, it.id);
        case SeparationNode::Kind::Face: return "face family s=" + std::to_string(fam.faces[it.id].cone.s);
        default: return "central cube";
    }
}

}  // namespace

ConvexityCertificate certify_poly_convexity(const CubeFamily& fam, const std::optional<Rat>& central_L) {
    const std::size_t dim = 2 * fam.n;
    std::vector<Item> items;
    if (!fam.cubes.empty()) {
        for (std::size_t i = 0; i < fam.cubes.size(); ++i) {
            Item it{SeparationNode::Kind::Cube, i, {}, {}};
            for (const auto& c : fam.cubes[i].center) {
                it.lo.push_back(c - fam.cubes[i].half_width);
                it.hi.push_back(c + fam.cubes[i].half_width);
            }
            items.push_back(std::move(it));
        }
    } else {
        for (std::size_t i = 0; i < fam.faces.size(); ++i) {
            Item it{SeparationNode::Kind::Face, i, {}, {}};
            for (const auto& [lo, hi] : fam.faces[i].bounding_box()) {
                it.lo.push_back(lo);
                it.hi.push_back(hi);
            }
            items.push_back(std::move(it));
        }
    }
    if (central_L) {
        if (sgn(*central_L) <= 0) throw std::invalid_argument("central cube needs L > 0");
        items.push_back({SeparationNode::Kind::Central, 0, std::vector<Rat>(dim, -*central_L),
                         std::vector<Rat>(dim, *central_L)});
    }
    ConvexityCertificate cert;
    if (items.empty()) {
        cert.failure = "empty family";
        return cert;
    }
    using Ids = std::vector<std::uint32_t>;
    struct Work {
        std::vector<Ids> sorted;  // per axis, ordered by lower end
        std::size_t node;
    };
    std::vector<Ids> root(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        Ids& ids = root[d];
        ids.resize(items.size());
        for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
        std::stable_sort(ids.begin(), ids.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return items[a].lo[d] < items[b].lo[d]; });
    }
    auto& nodes = cert.tree.nodes;
    nodes.push_back({});
    std::vector<Work> stack;
    stack.push_back({std::move(root), 0});
    std::vector<char> left_side(items.size(), 0);
    while (!stack.empty()) {
        Work w = std::move(stack.back());
        stack.pop_back();
        const std::size_t size = w.sorted[0].size();
        if (size == 1) {
            const Item& it = items[w.sorted[0][0]];
            nodes[w.node].kind = it.kind;
            nodes[w.node].item = it.id;
            continue;
        }
        std::size_t best_balance = 0, best_axis = 0, best_p = 0;
        Rat best_threshold;
        for (std::size_t d = 0; d < dim; ++d) {
            const Ids& ids = w.sorted[d];
            const Rat* run = &items[ids[0]].hi[d];
            for (std::size_t p = 0; p + 1 < size; ++p) {
                const Rat& next_lo = items[ids[p + 1]].lo[d];
                if (*run < next_lo) {
                    std::size_t bal = std::min(p + 1, size - p - 1);
                    if (bal > best_balance) {
                        best_balance = bal;
                        best_axis = d;
                        best_p = p;
                        best_threshold = (*run + next_lo) / 2;
                    }
                }
                const Rat& h = items[ids[p + 1]].hi[d];
                if (h > *run) run = &h;
            }
            if (best_balance == size / 2) break;
        }
        if (best_balance == 0) {
            cert.failure = "no strict axis-aligned separation among " + std::to_string(size) + " items";
            for (std::size_t i = 0; i < size && i < 20; ++i) cert.stuck.push_back(item_name(fam, items[w.sorted[0][i]]));
            cert.ok = false;
            return cert;
        }
        const Ids& chosen = w.sorted[best_axis];
        for (std::size_t p = 0; p < size; ++p) left_side[chosen[p]] = p <= best_p ? 1 : 0;
        Work lw, rw;
        for (std::size_t d = 0; d < dim; ++d) {
            Ids l, r;
            l.reserve(best_p + 1);
            r.reserve(size - best_p - 1);
            for (std::uint32_t id : w.sorted[d]) (left_side[id] ? l : r).push_back(id);
            lw.sorted.push_back(std::move(l));
            rw.sorted.push_back(std::move(r));
        }
        lw.node = nodes.size();
        nodes.push_back({});
        rw.node = nodes.size();
        nodes.push_back({});
        SeparationNode& nd = nodes[w.node];
        nd.kind = SeparationNode::Kind::Split;
        nd.axis = static_cast<std::uint32_t>(best_axis);
        nd.threshold = best_threshold;
        nd.left = lw.node;
        nd.right = rw.node;
        stack.push_back(std::move(rw));
        stack.push_back(std::move(lw));
    }
    cert.ok = true;
    return cert;
}

nlohmann::json to_json(const FaceGridParams& p) {
    return {{"n", p.n},
            {"k", p.k},
            {"delta", to_string(p.delta)},
            {"R", p.R.get_str()},
            {"l", p.l.get_str()},
            {"N", p.N.get_str()},
            {"R0", p.R0.get_str()},
            {"layers", p.layers.get_str()},
            {"A", to_string(p.A)},
            {"delta0", to_string(p.delta0)}};
}

namespace {

nlohmann::json strs(const std::vector<Rat>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

std::vector<Rat> rats(const nlohmann::json& a) {
    std::vector<Rat> v;
    for (const auto& x : a) v.push_back(parse_rat(x.get<std::string>()));
    return v;
}

}  // namespace

nlohmann::json to_json(const CubeFamily& fam, bool include_cubes) {
    nlohmann::json j = {{"n", fam.n},
                        {"k", fam.k},
                        {"delta", to_string(fam.delta)},
                        {"half_width", to_string(fam.half_width)},
                        {"R", fam.R.get_str()},
                        {"N", fam.N.get_str()},
                        {"count", fam.cube_count().get_str()},
                        {"implicit", fam.implicit()}};
    nlohmann::json faces = nlohmann::json::array();
    for (const auto& f : fam.faces) faces.push_back({{"s", f.cone.s}, {"R", f.params.R.get_str()}});
    j["faces"] = faces;
    if (include_cubes && !fam.cubes.empty()) {
        nlohmann::json cubes = nlohmann::json::array();
        for (std::size_t i = 0; i < fam.cubes.size(); ++i) {
            nlohmann::json c = {{"c", strs(fam.cubes[i].center)}};
            if (fam.cubes[i].half_width != fam.half_width) c["w"] = to_string(fam.cubes[i].half_width);
            if (i < fam.provenance.size()) {
                const auto& pr = fam.provenance[i];
                nlohmann::json lat = nlohmann::json::array();
                for (const auto& s : pr.lattice) lat.push_back(s.get_str());
                c["face"] = pr.face;
                c["layer"] = pr.layer.get_str();
                c["lattice"] = lat;
            }
            cubes.push_back(std::move(c));
        }
        j["cubes"] = std::move(cubes);
    }
    return j;
}

CubeFamily cube_family_from_json(const nlohmann::json& j) {
    CubeFamily fam;
    fam.n = j.at("n").get<std::uint32_t>();
    fam.k = j.value("k", 0ul);
    fam.delta = parse_rat(j.value("delta", std::string("0")));
    fam.half_width = parse_rat(j.at("half_width").get<std::string>());
    fam.R = Int{j.value("R", std::string("0"))};
    fam.N = Int{j.value("N", std::string("0"))};
    for (const auto& f : j.value("faces", nlohmann::json::array())) {
        Cone c{f.at("s").get<std::uint32_t>(), fam.n};
        fam.faces.push_back({c, face_grid_params(fam.n, fam.k, fam.delta, Int{f.at("R").get<std::string>()})});
    }
    if (j.contains("cubes")) {
        for (const auto& c : j.at("cubes")) {
            Rat w = c.contains("w") ? parse_rat(c.at("w").get<std::string>()) : fam.half_width;
            fam.cubes.push_back({rats(c.at("c")), w, true});
            if (c.contains("face")) {
                CubeRef r{c.at("face").get<std::size_t>(), Int{c.at("layer").get<std::string>()}, {}};
                for (const auto& s : c.at("lattice")) r.lattice.push_back(Int{s.get<std::string>()});
                fam.provenance.push_back(std::move(r));
            }
        }
        for (const auto& c : fam.cubes)
            if (c.center.size() != 2 * fam.n) throw std::invalid_argument("cube of wrong dimension in family");
    } else if (!fam.faces.empty()) {
        materialize(fam, kMaterializeLimit);
    }
    return fam;
}

nlohmann::json to_json(const SeparationTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : t.nodes) {
        switch (nd.kind) {
            case SeparationNode::Kind::Split:
                nodes.push_back({{"axis", nd.axis}, {"a", to_string(nd.threshold)}, {"left", nd.left}, {"right", nd.right}});
                break;
            case SeparationNode::Kind::Cube: nodes.push_back({{"cube", nd.item}}); break;
            case SeparationNode::Kind::Face: nodes.push_back({{"face", nd.item}}); break;
            case SeparationNode::Kind::Central: nodes.push_back({{"central", true}}); break;
        }
    }
    return {{"nodes", nodes}};
}

SeparationTree tree_from_json(const nlohmann::json& j) {
    SeparationTree t;
    for (const auto& n : j.at("nodes")) {
        SeparationNode nd;
        if (n.contains("axis")) {
            nd.kind = SeparationNode::Kind::Split;
            nd.axis = n.at("axis").get<std::uint32_t>();
            nd.threshold = parse_rat(n.at("a").get<std::string>());
            nd.left = n.at("left").get<std::size_t>();
            nd.right = n.at("right").get<std::size_t>();
        } else if (n.contains("cube")) {
            nd.kind = SeparationNode::Kind::Cube;
            nd.item = n.at("cube").get<std::size_t>();
        } else if (n.contains("face")) {
            nd.kind = SeparationNode::Kind::Face;
            nd.item = n.at("face").get<std::size_t>();
        } else if (n.contains("central")) {
            nd.kind = SeparationNode::Kind::Central;
        } else {
            throw std::invalid_argument("unknown separation node");
        }
        t.nodes.push_back(std::move(nd));
    }
    return t;
}

std::string describe(const CubeFamily& fam, std::size_t cube) {
    std::ostringstream os;
    os << "cube #" << cube;
    if (cube < fam.provenance.size()) {
        const auto& p = fam.provenance[cube];
        os << " (face s=" << fam.faces[p.face].cone.s << ", layer " << p.layer.get_str() << ")";
    }
    if (cube < fam.cubes.size()) {
        os << " center (";
        for (std::size_t i = 0; i < fam.cubes[cube].center.size(); ++i)
            os << (i ? "," : "") << to_string(fam.cubes[cube].center[i]);
        os << ")";
    }
    return os.str();
}

}  // namespace uh
