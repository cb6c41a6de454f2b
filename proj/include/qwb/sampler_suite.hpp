#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qwb/planar_map.hpp"
#include "qwb/rational.hpp"
#include "qwb/rng.hpp"

namespace qwb {

// Uniform rooted quadrangulation with boundary, size n, perimeter 2p, via a
// uniform treed bridge pushed through the corner construction (the marked
// minimum vertex is forgotten).  n = p = 0 yields the vertex map.
PlanarMap sample_uniform_quadrangulation(int n, int p, RandomSource& rng);

// Critically weighted Boltzmann map: P(map) = 12^{-size} z^{half-perimeter}
// over all rooted quadrangulations with boundary (vertex map included), with
// an extra factor 2p+1 when extra_rooted is set.  Exact inverse transform on
// rational cumulative tables; defined for rational 0 < z <= 1/8.  Throws
// ZOutOfRangeError outside that range and TailUnresolvedError when a draw
// lands past the configured table caps.
PlanarMap sample_boltzmann(const Rat& z, bool extra_rooted, RandomSource& rng);

// Pinch decomposition of the boundary of an infinite-volume draw at perimeter
// 2p: the contour splits into the infinite core's contour (core_perimeter
// edges) and one finite stretch per core edge (parts_perimeters, in contour
// order, zeros included).
struct CoreStructure {
    int core_perimeter = 0;
    std::vector<int> parts_perimeters;
};

CoreStructure sample_core_structure(int p, RandomSource& rng,
                                    std::int64_t cap_nodes = std::int64_t(1) << 22,
                                    int cap_spine = 1 << 22,
                                    long cap_corners = 1L << 26);

// Inverse pair linking perimeter-2 maps with simple-boundary maps: star_join
// drapes p quadrangles around a new root origin placed inside the external
// face of a simple-boundary map of perimeter 2p; star_split recognises that
// pattern and removes it, or returns nullopt when the root neighbourhood does
// not carry it.  star_split(star_join(q), p) == q exactly.
PlanarMap star_join(const PlanarMap& simple_boundary_map);
std::optional<PlanarMap> star_split(const PlanarMap& m, int p);

}  // namespace qwb
