#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwb/planar_map.hpp"
#include "qwb/treed_bridge.hpp"

namespace qwb {

// Corner-index successors for a finite cyclic corner sequence: succ[i] is the
// first corner after i (cyclically) whose label is label(i) - 1, or -1 when
// label(i) is minimal (that chord goes to the extra vertex rho).
std::vector<long> successors(const CornerSequence& cs);
long successor(const CornerSequence& cs, long c);

// Lazy variant; always defined (labels are unbounded below along the spine).
LazyCornerSequence::Pos successor(LazyCornerSequence& cs, const LazyCornerSequence::Pos& c);

// Result of drawing every corner-to-successor chord of a finite treed bridge:
// a rooted quadrangulation with boundary, pointed at rho.
struct PhiOutput {
    PlanarMap map;
    int point = 0;                                   // rho vertex id
    std::vector<std::pair<int, int>> vertex_origin;  // (tree slot, node), (-1,-1) for rho
    std::vector<int> labels;                         // shifted labels; rho = min - 1
};

PhiOutput phi_finite(const TreedBridge& tb);

// Vertex-id layout used by phi_finite (tree arenas in slot order, rho last).
int phi_vertex_id(const TreedBridge& tb, int tree, int node);
int phi_rho_id(const TreedBridge& tb);

// Exact external-face contour of the infinite map: 2p contour edges, each
// endpoint resolved to a concrete tree vertex by finitely many scans.
struct BoundaryResolution {
    std::vector<std::pair<int, int>> vertices; // (slot, node) per contour position
    std::vector<int> labels;                   // shifted vertex labels, same indexing
    bool simple = true;                        // no repeated contour vertex
    // Owning corner of each contour edge and an edge index that provably lies
    // on the boundary of the infinite irreducible component.
    std::vector<LazyCornerSequence::Pos> owners;
    long core_edge = 0;
};

BoundaryResolution phi_boundary(LazyTreedBridge& tb, long cap_corners = 1L << 26);

struct HullPolicy {
    int initial_depth = 4;
    int max_doublings = 14;
    long cap_corners = 1L << 26;
};

struct HullOutput {
    PlanarMap partial_map;            // every edge is a true edge of the infinite map
    std::vector<long long> ball_code; // canonical code of ball(partial_map, radius)
    int radius = 0;
    bool self_consistent = false;     // candidate balls agreed under depth doubling
    int depth_used = 0;               // spine depth of the accepted candidate
    long resolved_corners = 0;
};

HullOutput phi_hull(LazyTreedBridge& tb, int r, const HullPolicy& policy = HullPolicy());

// Iterated-successor path from corner c down to rho, as phi_finite vertex
// ids (rho last). Labels along it decrease by exactly 1 per step.
std::vector<int> simple_geodesic(const CornerSequence& cs, const TreedBridge& tb, long c);

// The corner indices visited before reaching rho (starting corner included).
std::vector<long> successor_chain(const CornerSequence& cs, long c);

// Exact bridge spread, bad-tree count among the finite trees, and the
// aperture sandwich bounds lower = delta, upper = (2K+4)(ceil(sqrt p) + delta + 1).
struct ApertureBounds {
    int delta_p = 0;
    int K = 0;
    long long lower = 0;
    long long upper = 0;
};

ApertureBounds aperture_bounds(const LazyTreedBridge& tb);

// PMAP block plus label table and point id; round-trips exactly.
std::string to_text(const PhiOutput& out);
PhiOutput phi_output_from_text(const std::string& text);

} // namespace qwb
