#pragma once

#include <string>
#include <vector>

#include "qwb/rational.hpp"

namespace qwb {

// Rooted planar map as a half-edge structure. twin is a fixed-point-free
// involution, next rotates counterclockwise around the origin vertex of a
// half-edge. Faces are the orbits of h -> next(twin(h)); the face of such an
// orbit lies to the RIGHT of each half-edge in it, so the root face (the
// external face of a map with boundary) is the orbit of the root half-edge.
// Instances are immutable once built; all derived tables are precomputed.
//
// The map with no half-edges is the vertex map (one vertex, one face).
class PlanarMap {
public:
    // Validates involution, permutation, connectivity and genus 0, then
    // freezes the structure. root must be a valid half-edge id (or -1 with
    // empty tables for the vertex map).
    static PlanarMap build(std::vector<int> twin, std::vector<int> next, int root);
    static PlanarMap vertex_map();

    PlanarMap() = default;

    int half_edge_count() const { return static_cast<int>(twin_.size()); }
    bool is_vertex_map() const { return twin_.empty(); }
    int edge_count() const { return half_edge_count() / 2; }

    int root() const { return root_; }
    int twin(int h) const { return twin_[h]; }
    int next(int h) const { return next_[h]; }
    int prev(int h) const { return prev_[h]; }
    // Face-orbit step; the face of the orbit is on the right of h.
    int phi(int h) const { return next_[twin_[h]]; }

    int vertex_of(int h) const { return vertex_of_[h]; }
    int head_of(int h) const { return vertex_of_[twin_[h]]; }
    int face_of(int h) const { return face_of_[h]; }

    int vertex_count() const { return vertex_count_; }
    int face_count() const { return face_count_; }
    int face_degree(int f) const { return face_degree_[f]; }
    int root_face() const { return root_ < 0 ? 0 : face_of_[root_]; }
    int root_origin() const { return root_ < 0 ? 0 : vertex_of_[root_]; }

    // Half-edges of the face orbit starting at h, in phi order.
    std::vector<int> face_cycle(int h) const;
    // Out half-edges around the origin vertex of h, in next order.
    std::vector<int> vertex_cycle(int h) const;
    // One out half-edge per vertex id.
    int some_out_edge(int v) const { return vertex_rep_[v]; }

    // Copy with vertex ids renamed to perm[old id]; perm must be a
    // permutation of 0..vertex_count()-1. Half-edge and face ids stay put.
    PlanarMap relabel_vertices(const std::vector<int>& perm) const;

private:
    std::vector<int> twin_, next_, prev_;
    std::vector<int> vertex_of_, face_of_;
    std::vector<int> vertex_rep_;
    std::vector<int> face_degree_;
    int root_ = -1;
    int vertex_count_ = 1;
    int face_count_ = 1;

    void derive();
};

struct MapClass {
    bool is_quadrangulation_with_boundary = false;
    int perimeter = 0;      // degree of the root face
    long long size = 0;     // internal faces (total faces minus the root face)
    bool simple_boundary = false;
};

MapClass classify(const PlanarMap& m);

// BFS graph distances from a vertex id.
std::vector<int> distances_from(const PlanarMap& m, int vertex);

// Contour of the root face: half-edges in phi order starting at the root,
// with the origin vertex of each.
struct BoundaryWalk {
    std::vector<int> half_edges;
    std::vector<int> vertices;
    bool simple = false;
};

BoundaryWalk boundary_walk(const PlanarMap& m);

// Max graph distance between boundary vertices. 0 for the vertex map.
int aperture(const PlanarMap& m);

// Submap of the faces whose vertices all lie within distance r of the root
// edge origin, restricted to the component of the root edge. Returns the
// vertex map when r = 0, when no face survives, or when the root edge is
// dropped.
PlanarMap ball(const PlanarMap& m, int r);

// Complete invariant of rooted-map isomorphism: the (next, twin) tables
// rewritten in BFS discovery order from the root.
std::vector<long long> canonical_code(const PlanarMap& m);
// Same, with a marked vertex appended (canonical id of the point).
std::vector<long long> canonical_code_pointed(const PlanarMap& m, int point_vertex);

struct LocalDistance {
    Rat value;          // (1 + s)^{-1} for s = largest radius with equal balls
    bool at_cap = false; // balls still equal at the cap, so value is an upper bound
};

LocalDistance local_distance(const PlanarMap& a, const PlanarMap& b, int r_cap);

// Submap keeping the marked edges (keep_edge is indexed by h/2); rotations
// are the filtered cycles, vertices with no kept arcs disappear, and the
// result is rooted at root_h (which must be kept and reach every kept edge).
PlanarMap submap(const PlanarMap& m, const std::vector<char>& keep_edge, int root_h);

// Text format "PMAP v1", one half-edge per line. Round-trips bit-exactly.
std::string to_pmap(const PlanarMap& m);
PlanarMap from_pmap(const std::string& text);

} // namespace qwb
