#pragma once

#include "univhol/arith.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uh {

// Axis-aligned cube in R^{2n}: the set |x_i - center_i| <= half_width (closed) or < (open).
struct Hypercube {
    std::vector<Rat> center;
    Rat half_width;
    bool closed = true;
};

// Does the open cube Q(c, w) lie in the closed cube Q(outer)?
bool open_cube_inside(const std::vector<Rat>& c, const Rat& w, const Hypercube& outer);

// Cone F_s, s in 1..4n: coordinate m = ceil(s/2) dominates, nonnegative for odd s.
struct Cone {
    std::uint32_t s = 1;
    std::uint32_t n = 1;
    std::uint32_t coordinate() const { return (s + 1) / 2; }
    int sign() const { return s % 2 == 1 ? 1 : -1; }
    // Signed permutation taking F_1 onto F_s (and its inverse).
    std::vector<Rat> from_first(std::vector<Rat> x) const;
    std::vector<Rat> to_first(std::vector<Rat> y) const;
};

// Cone of a max-norm-1 point (first dominant coordinate on ties).
Cone cone_of(const std::vector<Rat>& theta);

class CubeParamError : public std::invalid_argument {
public:
    CubeParamError(const std::string& what, Int required_R, Int required_N)
        : std::invalid_argument(what), required_R(std::move(required_R)), required_N(std::move(required_N)) {}
    Int required_R;
    Int required_N;
};

struct FaceGridParams {
    std::uint32_t n = 1;
    unsigned long k = 1;
    Rat delta;
    Int R;
    Int l, N, R0;
    Int layers;  // l^{2n-1}
    Rat A, delta0;

    Int r(const Int& j) const { return Int(2 * k + 1) * j + R; }
    Rat half_width() const { return Rat(k) + delta; }
    // Offsets (t_2, ..., t_{2n}) of layer j, row-major with t_2 most significant.
    std::vector<unsigned long> layer_offsets(const Int& j) const;
    Int layer_of(const std::vector<unsigned long>& t) const;
    // Lattice indices s with |t delta0 + s A| <= 1.
    std::pair<Int, Int> lattice_range(unsigned long t) const;
};

// Direct substitution of l, N, R0, A, delta0; no precondition on R.
FaceGridParams face_grid_params(std::uint32_t n, unsigned long k, const Rat& delta, const Int& R);
bool net_inequality_holds(const FaceGridParams& p);  // l delta0 > A
bool spacing_holds(const FaceGridParams& p);         // r_1 A >= 2k+1 > 2(k+delta)

// Cubes Q(P_s(r_j a), k+delta), a in the layer-j grid, j = 1..layers.
struct FaceFamily {
    Cone cone;
    FaceGridParams params;

    Int cube_count() const;
    Int cubes_in_layer(const Int& j) const;
    // Center of the cube at layer j with lattice indices (s_2, ..., s_{2n}).
    std::vector<Rat> center(const Int& j, const std::vector<Int>& lattice) const;
    // Box enclosing every cube of the family: per axis [lo, hi].
    std::vector<std::pair<Rat, Rat>> bounding_box() const;
};

struct CubeRef {
    std::size_t face = 0;  // index into CubeFamily::faces
    Int layer;
    std::vector<Int> lattice;
};

struct CubeFamily {
    std::uint32_t n = 1;
    Rat half_width;
    Int R, N;                      // shell Q(0,R+N) \ Q(0,R)
    unsigned long k = 0;
    Rat delta;
    std::vector<FaceFamily> faces;
    std::vector<Hypercube> cubes;   // materialized cubes (empty when implicit)
    std::vector<CubeRef> provenance;  // parallel to cubes when built from faces

    bool implicit() const { return cubes.empty() && !faces.empty(); }
    Int cube_count() const;
};

constexpr std::size_t kMaterializeLimit = 2000000;

// Single-face family; rejects R < R0 with the required R0.
CubeFamily face_grid(std::uint32_t n, std::uint32_t s, unsigned long k, const Rat& delta, const Int& R,
                     std::size_t materialize_limit = kMaterializeLimit);

struct ShellMinimums {
    Int R0;
    Int N0;
    Int face_width;  // N' of the single-face construction
};
ShellMinimums shell_minimums(std::uint32_t n, unsigned long k, const Rat& delta);

// Faces s = 1..4n placed in sub-shells [R_s, R_{s+1}], R_m = R + (N' + 2k + 2) m.
CubeFamily shell_arrangement(std::uint32_t n, unsigned long k, const Rat& delta, const Int& R, const Int& N,
                             std::size_t materialize_limit = kMaterializeLimit);
CubeFamily build_cubes(std::vector<Hypercube> cubes);

// Every cube lies in Q(0,R+N) minus the closed Q(0,R).
bool inside_shell(const CubeFamily& fam);

struct CubeHit {
    Int m;
    CubeRef ref;
    Hypercube cube;
};
// Finds m with Q(m theta, k) inside a family cube, scanning the r_j ladder of theta's face.
std::optional<CubeHit> containing_cube(const std::vector<Rat>& theta, const CubeFamily& fam);

// n = 1: the delta0-cubes around all grid points of face f cover the face of the unit
// square exactly (1-D interval union).
bool net_covers_face(const CubeFamily& fam, std::size_t f);

struct SeparationNode {
    enum class Kind { Split, Cube, Face, Central };
    Kind kind = Kind::Cube;
    std::uint32_t axis = 0;  // 0-based coordinate
    Rat threshold;
    std::size_t left = 0, right = 0;  // node indices
    std::size_t item = 0;             // cube index or face index
};

// Node 0 is the root. Face leaves stand for a whole implicit face family, whose layers
// and lattice lines are separated by the structural gaps checked in the verifier.
struct SeparationTree {
    std::vector<SeparationNode> nodes;
};

struct ConvexityCertificate {
    bool ok = false;
    SeparationTree tree;
    std::string failure;
    std::vector<std::string> stuck;  // items at the node with no separating hyperplane
};

// Greedy balanced strict splits. With central_L set, Q(0,L) joins the union.
ConvexityCertificate certify_poly_convexity(const CubeFamily& fam, const std::optional<Rat>& central_L = {});

// Independent checks (separate implementation).
struct DisjointReport {
    bool ok = true;
    std::optional<std::pair<std::string, std::string>> overlap;
};
DisjointReport check_disjoint(const CubeFamily& fam);

struct VerifyReport {
    bool ok = true;
    std::string violation;
};
VerifyReport verify_certificate(const CubeFamily& fam, const SeparationTree& tree,
                                const std::optional<Rat>& central_L = {});

nlohmann::json to_json(const FaceGridParams& p);
nlohmann::json to_json(const CubeFamily& fam, bool include_cubes = true);
CubeFamily cube_family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SeparationTree& t);
SeparationTree tree_from_json(const nlohmann::json& j);
std::string describe(const CubeFamily& fam, std::size_t cube);

// SVG of the (x_1, x_2) plane; for n >= 2 only cubes meeting the slice x_3 = ... = 0.
std::string render_svg(const CubeFamily& fam, const std::optional<Rat>& central_L = {});

}  // namespace uh
