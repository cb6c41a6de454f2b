#pragma once

#include <string>
#include <vector>

#include "qwb/planar_map.hpp"

namespace qwb {

// One maximal simple-boundary piece of a map with boundary.  Pieces meet only
// at pinch vertices of the external contour; every edge lies in exactly one
// piece.  Each piece is returned rooted at the contour edge that leaves its
// attachment vertex (for the piece carrying the map root, that is the root
// edge itself).
struct IrreducibleComponent {
    PlanarMap map;
    int attachment = 0;   // vertex id in the parent map
    long long size = 0;   // number of internal faces
};

// Pieces listed in order of first appearance along the boundary contour,
// starting with the one containing the root edge.
std::vector<IrreducibleComponent> irreducible_components(const PlanarMap& m);

// Decomposition of a map with boundary into a simple-boundary core plus the
// hanging sub-maps at the core's boundary vertices.  parts[i] is the material
// traversed between core contour edges i and i+1 (the vertex map when there
// is none), rooted at the last contour edge of that stretch.  The core keeps
// the original root when the root edge lies on it; otherwise it is rooted at
// the core edge walked immediately before the part carrying the root, that
// part becomes parts[0], and R locates the root among its contour edges.
//   R in 1..perimeter(parts[0])   root = R-th edge of parts[0]'s contour walk
//   R == perimeter(parts[0]) + 1  root = the core root itself
//   R == 0                        no unique largest piece; core is the vertex
//                                 map and parts is empty
struct PruneResult {
    PlanarMap core;
    std::vector<PlanarMap> parts;
    long long R = 0;
};

PruneResult prune(const PlanarMap& m);

// Exact inverse of prune for R >= 1: glues parts[i] into the corner behind
// core contour edge i and restores the root per R.  Throws
// PerimeterMismatchError when the part count differs from the core perimeter
// and InvalidLocatorError when R is out of range.
PlanarMap reassemble(const PruneResult& r);

// Folds a simple boundary of perimeter 2p shut by gluing contour edge i to
// contour edge 2p+1-i (1-based from the root).  The seam is a self-avoiding
// path of p edges starting at the root origin; saw_half_edges walks it in the
// result's ids.  Throws NotSimpleError on a pinched boundary.
struct ZipResult {
    PlanarMap map;
    std::vector<int> saw_vertices;
    std::vector<int> saw_half_edges;
};

ZipResult zip_boundary(const PlanarMap& m);

// Exact inverse: cuts the map open along the given seam path, recreating the
// simple boundary of perimeter 2*saw_half_edges.size().
PlanarMap unzip(const PlanarMap& m, const std::vector<int>& saw_half_edges);

// Small JSON manifest naming the serialized core/part files and R.
std::string prune_manifest(const PruneResult& r, const std::string& core_path,
                           const std::vector<std::string>& part_paths);

}  // namespace qwb
