#include "doctest.h"

#include <algorithm>
#include <set>

#include "qwb/errors.hpp"
#include "qwb/planar_map.hpp"

using namespace qwb;

namespace {

// Lone edge: one edge, two vertices, one face of degree 2.
PlanarMap lone_edge() { return PlanarMap::build({1, 0}, {0, 1}, 0); }

// 4-cycle rooted so the external face is (0,2,4,6); one internal quad.
PlanarMap square() {
    return PlanarMap::build({1, 0, 3, 2, 5, 4, 7, 6}, {7, 2, 1, 4, 3, 6, 5, 0}, 0);
}

// Double edge between two vertices: both faces are 2-gons.
PlanarMap bigon() { return PlanarMap::build({1, 0, 3, 2}, {2, 3, 0, 1}, 0); }

// Pendant-edge quadrangulation with perimeter 2 (one quad face, 3 vertices).
PlanarMap pendant_quad() {
    return PlanarMap::build({1, 0, 3, 2, 5, 4}, {4, 2, 5, 3, 0, 1}, 4);
}

} // namespace

TEST_CASE("build validates the combinatorial axioms") {
    CHECK_THROWS_AS(PlanarMap::build({0, 1}, {0, 1}, 0), NotInvolutionError);
    CHECK_THROWS_AS(PlanarMap::build({1, 0}, {0, 0}, 0), NotPermutationError);
    CHECK_THROWS_AS(PlanarMap::build({1, 0, 3, 2}, {0, 1, 2, 3}, 0), DisconnectedError);
    // Two interleaved loops at one vertex have genus 1.
    CHECK_THROWS_AS(PlanarMap::build({1, 0, 3, 2}, {2, 3, 1, 0}, 0), NonPlanarError);
    CHECK_THROWS_AS(PlanarMap::build({1, 0}, {0, 1}, 7), FormatError);
    CHECK_NOTHROW(lone_edge());
    CHECK_NOTHROW(square());
}

TEST_CASE("vertex map") {
    PlanarMap vm = PlanarMap::vertex_map();
    CHECK(vm.is_vertex_map());
    CHECK(vm.half_edge_count() == 0);
    CHECK(vm.vertex_count() == 1);
    CHECK(vm.face_count() == 1);
    CHECK(aperture(vm) == 0);
    MapClass c = classify(vm);
    CHECK(c.is_quadrangulation_with_boundary);
    CHECK(c.perimeter == 0);
    CHECK(c.size == 0);
}

TEST_CASE("accessors on the square") {
    PlanarMap m = square();
    CHECK(m.half_edge_count() == 8);
    CHECK(m.edge_count() == 4);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    for (int h = 0; h < 8; ++h) {
        CHECK(m.twin(m.twin(h)) == h);
        CHECK(m.prev(m.next(h)) == h);
        CHECK(m.vertex_of(h) == m.vertex_of(m.next(h)));
        CHECK(m.head_of(h) == m.vertex_of(m.twin(h)));
    }
    CHECK(m.face_degree(m.root_face()) == 4);
    CHECK(m.face_cycle(m.face_of(0)) == std::vector<int>{0, 2, 4, 6});
    CHECK(m.vertex_cycle(m.vertex_of(0)).size() == 2);
    CHECK(m.some_out_edge(m.vertex_of(0)) >= 0);
    CHECK(m.root_origin() == m.vertex_of(0));
}

TEST_CASE("classify recognizes quadrangulations with boundary") {
    MapClass le = classify(lone_edge());
    CHECK(le.is_quadrangulation_with_boundary);
    CHECK(le.perimeter == 2);
    CHECK(le.size == 0);
    CHECK(le.simple_boundary);

    MapClass sq = classify(square());
    CHECK(sq.is_quadrangulation_with_boundary);
    CHECK(sq.perimeter == 4);
    CHECK(sq.size == 1);
    CHECK(sq.simple_boundary);

    MapClass bg = classify(bigon());
    CHECK_FALSE(bg.is_quadrangulation_with_boundary); // internal 2-gon

    MapClass pq = classify(pendant_quad());
    CHECK(pq.is_quadrangulation_with_boundary);
    CHECK(pq.perimeter == 2);
    CHECK(pq.size == 1);
    CHECK(pq.simple_boundary);
}

TEST_CASE("distances and aperture") {
    PlanarMap m = square();
    std::vector<int> d = distances_from(m, m.vertex_of(0));
    std::vector<int> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 1, 2});
    CHECK(aperture(m) == 2); // opposite corners of the 4-cycle
    CHECK(aperture(lone_edge()) == 1);
    CHECK(aperture(pendant_quad()) == 1); // boundary has two vertices, adjacent
}

TEST_CASE("boundary walk follows the root face") {
    PlanarMap m = square();
    BoundaryWalk w = boundary_walk(m);
    CHECK(w.half_edges == std::vector<int>{0, 2, 4, 6});
    CHECK(w.simple);
    std::set<int> verts(w.vertices.begin(), w.vertices.end());
    CHECK(verts.size() == 4);

    // The pendant quadrangulation has a simple 2-gon boundary.
    BoundaryWalk pw = boundary_walk(pendant_quad());
    CHECK(pw.half_edges.size() == 2);
    CHECK(pw.half_edges.front() == 4);
    CHECK(pw.simple);
}

TEST_CASE("ball truncates by face radius") {
    PlanarMap m = square();
    CHECK(ball(m, 0).is_vertex_map());
    // At r = 1 both faces contain the opposite corner (distance 2).
    CHECK(ball(m, 1).is_vertex_map());
    CHECK(canonical_code(ball(m, 2)) == canonical_code(m));
    CHECK(canonical_code(ball(m, 17)) == canonical_code(m));

    // The lone edge survives already at r = 1.
    CHECK(canonical_code(ball(lone_edge(), 1)) == canonical_code(lone_edge()));
    CHECK(ball(PlanarMap::vertex_map(), 3).is_vertex_map());
}

TEST_CASE("canonical codes separate maps and mark points") {
    // Same underlying rooted map, two different marked vertices.
    PlanarMap a = pendant_quad();
    std::vector<long long> plain = canonical_code(a);
    std::vector<long long> at_far = canonical_code_pointed(a, 2);
    std::vector<long long> at_root = canonical_code_pointed(a, 0);
    CHECK(at_far.size() == plain.size() + 1);
    CHECK(std::equal(plain.begin(), plain.end(), at_far.begin()));
    CHECK(at_far != at_root);

    CHECK(canonical_code(square()) != canonical_code(lone_edge()));
    std::vector<long long> vm_plain = canonical_code(PlanarMap::vertex_map());
    std::vector<long long> vm_pointed = canonical_code_pointed(PlanarMap::vertex_map(), 0);
    CHECK(vm_pointed.size() == vm_plain.size() + 1);
    CHECK(std::equal(vm_plain.begin(), vm_plain.end(), vm_pointed.begin()));
}

TEST_CASE("relabel_vertices renames ids and nothing else") {
    PlanarMap m = square();
    std::vector<int> perm{3, 2, 1, 0};
    PlanarMap r = m.relabel_vertices(perm);
    CHECK(r.vertex_count() == 4);
    for (int h = 0; h < m.half_edge_count(); ++h) {
        CHECK(r.twin(h) == m.twin(h));
        CHECK(r.next(h) == m.next(h));
        CHECK(r.vertex_of(h) == perm[m.vertex_of(h)]);
    }
    for (int v = 0; v < 4; ++v)
        CHECK(r.vertex_of(r.some_out_edge(perm[v])) == perm[v]);
    CHECK(canonical_code(r) == canonical_code(m));

    CHECK_THROWS_AS(m.relabel_vertices({0, 1, 2}), FormatError);
    CHECK_THROWS_AS(m.relabel_vertices({0, 0, 1, 2}), FormatError);
    CHECK_THROWS_AS(m.relabel_vertices({0, 1, 2, 9}), FormatError);
}

TEST_CASE("submap keeps marked edges") {
    PlanarMap m = square();
    // Keep the path A-B-C: edges 0 and 1.
    PlanarMap s = submap(m, {1, 1, 0, 0}, 0);
    CHECK(s.vertex_count() == 3);
    CHECK(s.edge_count() == 2);
    CHECK(s.face_count() == 1);
    CHECK(s.face_degree(s.root_face()) == 4); // both sides of the path

    // Root must be kept.
    CHECK_THROWS_AS(submap(m, {0, 1, 1, 0}, 0), Error);
}

TEST_CASE("pmap text round-trips") {
    for (const PlanarMap& m : {lone_edge(), square(), pendant_quad()}) {
        std::string text = to_pmap(m);
        PlanarMap back = from_pmap(text);
        CHECK(back.half_edge_count() == m.half_edge_count());
        CHECK(back.root() == m.root());
        CHECK(canonical_code(back) == canonical_code(m));
        CHECK(to_pmap(back) == text);
    }
    PlanarMap vm = from_pmap(to_pmap(PlanarMap::vertex_map()));
    CHECK(vm.is_vertex_map());
    CHECK_THROWS_AS(from_pmap("nonsense"), FormatError);
    CHECK_THROWS_AS(from_pmap(""), FormatError);
}

TEST_CASE("local distance compares balls") {
    PlanarMap m = square();
    LocalDistance same = local_distance(m, m, 6);
    CHECK(same.at_cap);
    CHECK(same.value == Rat(1, 7));

    // Balls differ already at r = 1 (vertex map vs whole lone edge).
    LocalDistance diff = local_distance(m, lone_edge(), 8);
    CHECK_FALSE(diff.at_cap);
    CHECK(diff.value == Rat(1));

    // Relabeling vertices does not move the map in the local topology.
    LocalDistance rel = local_distance(m, m.relabel_vertices({2, 0, 3, 1}), 5);
    CHECK(rel.at_cap);
}
