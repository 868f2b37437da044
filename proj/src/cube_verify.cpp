// Checks that do not reuse the construction code: grid hashing for overlaps and a
// bottom-up extent pass for separation trees.
#include "univhol/cubes.hpp"

#include <map>
#include <unordered_map>

namespace uh {

namespace {

bool closed_overlap(const Hypercube& a, const Hypercube& b) {
    for (std::size_t i = 0; i < a.center.size(); ++i)
        if (abs(Rat(a.center[i] - b.center[i])) > a.half_width + b.half_width) return false;
    return true;
}

struct VecHash {
    std::size_t operator()(const std::vector<long>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (long x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
        return h;
    }
};

// Extents of one implicit face family recomputed from (cone, k, delta, R'): centers have
// dominant coordinate in [r_1, r_L] and transverse coordinates in [-r_L, r_L].
std::vector<std::pair<Rat, Rat>> face_extent(const FaceFamily& f) {
    const auto& p = f.params;
    const Int w(2 * p.k + 1);
    const Rat hw = Rat(p.k) + p.delta;
    const Rat r1(w + p.R), rl(w * p.layers + p.R);
    const std::size_t dim = 2 * p.n;
    std::vector<std::pair<Rat, Rat>> e(dim, {-rl - hw, rl + hw});
    const std::size_t m = (f.cone.s + 1) / 2 - 1;
    e[m] = f.cone.s % 2 == 1 ? std::make_pair(Rat(r1 - hw), Rat(rl + hw)) : std::make_pair(Rat(-rl - hw), Rat(-r1 + hw));
    return e;
}

// Consecutive layers sit 2k+1 apart on the dominant axis and lattice lines r_j A >= r_1 A
// apart on each transverse axis; both gaps must exceed the cube width.
std::string face_gap_violation(const FaceFamily& f) {
    const auto& p = f.params;
    const Rat width = 2 * (Rat(p.k) + p.delta);
    const Rat w(2 * p.k + 1);
    if (!(w > width)) return "layer gap 2k+1 does not exceed the cube width";
    const Rat spacing = Rat(w + Rat(p.R)) * w / (w + Rat(p.R));
    if (!(spacing > width)) return "lattice spacing r_1 A does not exceed the cube width";
    return {};
}

bool boxes_apart(const std::vector<std::pair<Rat, Rat>>& a, const std::vector<std::pair<Rat, Rat>>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].second < b[i].first || b[i].second < a[i].first) return true;
    return false;
}

}  // namespace

DisjointReport check_disjoint(const CubeFamily& fam) {
    DisjointReport rep;
    if (fam.cubes.empty()) {
        for (std::size_t i = 0; i < fam.faces.size(); ++i) {
            std::string v = face_gap_violation(fam.faces[i]);
            if (!v.empty()) {
                rep.ok = false;
                rep.overlap = {"face family #" + std::to_string(i), v};
                return rep;
            }
            for (std::size_t j = i + 1; j < fam.faces.size(); ++j)
                if (!boxes_apart(face_extent(fam.faces[i]), face_extent(fam.faces[j]))) {
                    rep.ok = false;
                    rep.overlap = {"face family #" + std::to_string(i), "face family #" + std::to_string(j)};
                    return rep;
                }
        }
        return rep;
    }
    Rat cell = 0;
    for (const auto& c : fam.cubes) cell = std::max(cell, Rat(2 * c.half_width));
    std::unordered_map<std::vector<long>, std::vector<std::size_t>, VecHash> grid;
    const std::size_t dim = fam.cubes[0].center.size();
    for (std::size_t i = 0; i < fam.cubes.size(); ++i) {
        const auto& c = fam.cubes[i];
        std::vector<long> lo(dim), hi(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = floor_rat((c.center[d] - c.half_width) / cell).get_si();
            hi[d] = floor_rat((c.center[d] + c.half_width) / cell).get_si();
        }
        std::vector<long> key = lo;
        while (true) {
            auto& bucket = grid[key];
            for (std::size_t other : bucket)
                if (closed_overlap(fam.cubes[other], c)) {
                    rep.ok = false;
                    rep.overlap = {describe(fam, other), describe(fam, i)};
                    return rep;
                }
            bucket.push_back(i);
            std::size_t d = 0;
            for (; d < dim; ++d) {
                if (key[d] < hi[d]) {
                    ++key[d];
                    break;
                }
                key[d] = lo[d];
            }
            if (d == dim) break;
        }
    }
    return rep;
}

VerifyReport verify_certificate(const CubeFamily& fam, const SeparationTree& tree, const std::optional<Rat>& central_L) {
    VerifyReport rep;
    auto fail = [&](const std::string& why) {
        rep.ok = false;
        rep.violation = why;
        return rep;
    };
    if (tree.nodes.empty()) return fail("empty tree");
    const std::size_t dim = 2 * fam.n;
    const std::size_t count = fam.cubes.size();
    std::vector<int> seen_cube(count, 0), seen_face(fam.faces.size(), 0);
    int seen_central = 0;
    std::vector<int> visits(tree.nodes.size(), 0);
    using Extent = std::vector<std::pair<Rat, Rat>>;
    std::vector<Extent> ext(tree.nodes.size());
    // iterative post-order
    std::vector<std::pair<std::size_t, bool>> stack{{0, false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        if (id >= tree.nodes.size()) return fail("node index " + std::to_string(id) + " out of range");
        const SeparationNode& nd = tree.nodes[id];
        if (!expanded) {
            if (++visits[id] > 1) return fail("node " + std::to_string(id) + " is reachable twice");
            if (nd.kind == SeparationNode::Kind::Split) {
                stack.push_back({id, true});
                stack.push_back({nd.right, false});
                stack.push_back({nd.left, false});
                continue;
            }
        }
        switch (nd.kind) {
            case SeparationNode::Kind::Cube: {
                if (nd.item >= count) return fail("leaf " + std::to_string(id) + " names a missing cube");
                ++seen_cube[nd.item];
                const auto& c = fam.cubes[nd.item];
                for (std::size_t d = 0; d < dim; ++d)
                    ext[id].emplace_back(c.center[d] - c.half_width, c.center[d] + c.half_width);
                break;
            }
            case SeparationNode::Kind::Face: {
                if (nd.item >= fam.faces.size() || count != 0)
                    return fail("leaf " + std::to_string(id) + " names a face family that is not implicit");
                std::string v = face_gap_violation(fam.faces[nd.item]);
                if (!v.empty()) return fail("leaf " + std::to_string(id) + ": " + v);
                ++seen_face[nd.item];
                ext[id] = face_extent(fam.faces[nd.item]);
                break;
            }
            case SeparationNode::Kind::Central: {
                if (!central_L) return fail("leaf " + std::to_string(id) + " names a central cube that is not present");
                ++seen_central;
                ext[id].assign(dim, {-*central_L, *central_L});
                break;
            }
            case SeparationNode::Kind::Split: {
                if (nd.axis >= dim) return fail("node " + std::to_string(id) + " splits a missing axis");
                const Extent& l = ext[nd.left];
                const Extent& r = ext[nd.right];
                if (!(l[nd.axis].second < nd.threshold))
                    return fail("node " + std::to_string(id) + ": left side reaches the hyperplane x_" +
                                std::to_string(nd.axis + 1) + " = " + to_string(nd.threshold));
                if (!(r[nd.axis].first > nd.threshold))
                    return fail("node " + std::to_string(id) + ": right side reaches the hyperplane x_" +
                                std::to_string(nd.axis + 1) + " = " + to_string(nd.threshold));
                for (std::size_t d = 0; d < dim; ++d)
                    ext[id].emplace_back(std::min(l[d].first, r[d].first), std::max(l[d].second, r[d].second));
                ext[nd.left].clear();
                ext[nd.right].clear();
                break;
            }
        }
    }
    for (std::size_t i = 0; i < count; ++i)
        if (seen_cube[i] != 1) return fail(describe(fam, i) + " appears in " + std::to_string(seen_cube[i]) + " leaves");
    if (count == 0)
        for (std::size_t i = 0; i < fam.faces.size(); ++i)
            if (seen_face[i] != 1) return fail("face family #" + std::to_string(i) + " appears in " +
                                               std::to_string(seen_face[i]) + " leaves");
    if (central_L && seen_central != 1) return fail("central cube appears in " + std::to_string(seen_central) + " leaves");
    return rep;
}

}  // namespace uh
