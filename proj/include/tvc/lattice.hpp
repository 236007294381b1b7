#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvc/category.hpp"

namespace tvc {

struct lattice_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pin is one attachment slot in the rotation system of a trivalent site:
// either an end of an interior edge or a boundary stub.
struct Pin {
    enum Kind { kEdge, kStub } kind = kEdge;
    int id = -1;    // edge id or stub id
    int end = 0;    // for edges: 0 = tail (stored u side), 1 = head (v side)
    bool operator==(const Pin&) const = default;
};

struct DualEdge {
    int u = -1, v = -1;  // sites; stored direction is u -> v
};

// Boundary stub: a dangling dual edge crossing into a hole.  Its label is
// fixed per sector: the marked stub of a hole carries the hole's boundary
// label, all other stubs carry the trivial label.  Stored direction points
// from the site into the hole.
struct Stub {
    int site = -1;
    int hole = -1;
    bool marked = false;
};

struct WalkStep {
    Pin pin;            // edge (with direction via end) or stub
    bool forward = true;  // for edges: true if traversed u -> v
};

struct FaceWalk {
    std::vector<WalkStep> steps;   // cyclic
    bool is_hole = false;
    int hole_id = -1;   // valid when is_hole
};

// Dual graph of a (possibly degenerate) surface triangulation, stored as a
// rotation system.  Sites are trivalent counting stubs.  Faces are derived;
// faces containing stubs (or explicitly marked) are holes, the rest are
// plaquettes.
struct Lattice {
    int n_sites = 0;
    std::vector<DualEdge> edges;
    std::vector<Stub> stubs;
    std::vector<std::vector<Pin>> rot;  // ccw pin order per site
    int n_holes = 0;

    // derived by refresh_faces()
    std::vector<FaceWalk> faces;
    std::vector<int> plaquettes;  // indices into faces

    void refresh_faces();
    int n_edges() const { return int(edges.size()); }

    // sanity: every site trivalent, pins consistent, faces fresh
    void check_consistent() const;

    // walk of one plaquette as (edge id, forward) pairs plus the outer legs
    // (third pin at each walk site, in step order)
    struct PlaquetteWalk {
        std::vector<int> edge_ids;
        std::vector<bool> forward;
        std::vector<Pin> legs;
        std::vector<int> sites;
    };
    PlaquetteWalk plaquette_walk(int face_index) const;

    bool same_structure(const Lattice& other) const;
};

// Edge-relabeling bijection between two structurally equal lattices.
struct EdgeRelabeling {
    std::vector<int> edge_map;      // my edge -> other edge
    std::vector<bool> flipped;      // true if stored direction reverses
};

// Finds a structure-preserving bijection initial -> final that maps every
// stub to a stub of the same hole and marked flag.  Empty if none exists.
std::optional<EdgeRelabeling> find_relabeling(const Lattice& a, const Lattice& b);

// --- generalized triangulations -------------------------------------------

// A surface triangulation with faces given as ccw edge loops (1..3 sides).
// Parallel edges and repeated vertices are allowed; every edge is used by
// at most two face sides.  Edges used once are boundary edges.
struct TriMesh {
    int n_vertices = 0;
    std::vector<std::array<int, 2>> edge_ends;
    // ccw loops: (edge id, true when traversed along edge_ends order)
    std::vector<std::vector<std::pair<int, bool>>> faces;
    std::map<int, int> boundary_hole;       // boundary edge -> hole id
    std::map<int, int> marked_of_hole;      // hole id -> its marked boundary edge
    int n_holes = 0;
};

// Builds the dual lattice. Boundary edges become stubs.
Lattice dual_lattice(const TriMesh& mesh);

// Vertex-triple form (surface JSON). Hole structure is derived from the
// boundary; marked edges may be supplied per boundary component.
Lattice dual_of_triangulation(const std::vector<std::array<int, 3>>& triangles,
                              const std::map<int, std::array<int, 2>>& marked = {});

// --- constructors -----------------------------------------------------------

// Honeycomb lattice on the closed torus: 2*rows*cols sites, 3*rows*cols
// edges, rows*cols hexagonal plaquettes.
Lattice torus_lattice(int rows, int cols);

// The underlying 2*rows*cols-triangle torus triangulation (for moves/tv).
TriMesh torus_tri_mesh(int rows, int cols);

// Annulus built as a single strip of 2n triangles around the core: 2n sites
// in a ring, one stub per site alternating between the two holes.  Hole 0 is
// the inner hole.  No plaquettes; the admissible space is the annulus code.
Lattice annulus_lattice(int n_rungs);
TriMesh annulus_tri_mesh(int n_rungs);

// Dual of the tetrahedron boundary: 4 sites, 6 edges, 4 triangle plaquettes.
Lattice sphere_tet_lattice();

// Two-strip annulus with n plaquettes around the core (used where an annulus
// with plaquette stabilizers is wanted).
Lattice annulus_two_strip_lattice(int n);

// n-punctured-sphere lattice with 5n-6 edges (stubs included): a rooted tree
// of theta gadgets, one leaf gadget per puncture 1..n-1, root stub = hole 0.
Lattice punctured_sphere_lattice(int n);

// Theta gadget alone (the 4-edge two-punctured sphere): hole 0 = outer.
Lattice theta_lattice();

// surface JSON: { "triangles": [[v,v,v]...], "marked": {"0": [u,v], ...} }
Lattice load_surface(const std::string& json_text);

// --- 3-manifold gluing data --------------------------------------------------

struct manifold_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tetrahedra with local vertex orders plus face gluings.  Face f of a
// tetrahedron is the one opposite local vertex f (so its corners, in order,
// are the other three local vertices ascending).
struct GluedManifold {
    int n_tets = 0;
    struct Gluing {
        int tet_a = -1, face_a = -1;
        int tet_b = -1, face_b = -1;
        std::array<int, 3> perm{};  // corner i of face_a matches corner perm[i] of face_b
    };
    std::vector<Gluing> gluings;

    // derived
    struct EdgeClass {
        // representative slots: (tet, a, b) meaning the local directed pair
        std::vector<std::array<int, 3>> slots;  // each with a<param... (tet, va, vb)
        bool boundary = false;
    };
    int n_edge_classes = 0;
    // slot (tet, va, vb), va<vb -> (class id, +1 if class orientation matches va->vb else -1)
    std::map<std::array<int, 3>, std::pair<int, int>> edge_of_slot;
    std::vector<char> class_on_boundary;
    std::vector<std::array<int, 2>> free_faces;  // (tet, face) not glued

    void build();  // fills derived data; throws manifold_error on bad input
    int n_boundary_faces() const { return int(free_faces.size()); }
};

GluedManifold builtin_s3();
GluedManifold builtin_s3_five_tet();
GluedManifold builtin_s2xs1();
GluedManifold builtin_ball();         // one tetrahedron, nothing glued
GluedManifold builtin_solid_torus();  // boundary: two-triangle torus

GluedManifold load_manifold(const std::string& json_text);

// first integral homology of a closed glued manifold (for tests): returns
// (betti_1, torsion coefficients)
std::pair<int, std::vector<long>> homology_h1(const GluedManifold& m);

}  // namespace tvc
