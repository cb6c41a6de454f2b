#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "qwb/errors.hpp"
#include "qwb/rng.hpp"
#include "qwb/schaeffer.hpp"

using namespace qwb;

namespace {

TreedBridge tb_from(const std::string& text) { return treed_bridge_from_text(text); }

// Smallest label over the cyclic corner stretch from a to b inclusive.
int arc_min(const CornerSequence& cs, long a, long b) {
    int m = cs.at(a).label;
    for (long i = a; i != b; i = (i + 1) % cs.size()) m = std::min(m, cs.at(i).label);
    return std::min(m, cs.at(b).label);
}

} // namespace

TEST_CASE("successors walk to the next smaller label") {
    // One tree edge, labels 1,0,1 after the bridge shift.
    TreedBridge tb = tb_from("TB 1 +-\nT 1 () -");
    CornerSequence cs = corner_order(tb);
    REQUIRE(cs.size() == 3);
    CHECK(cs.at(0).label == 1);
    CHECK(cs.at(1).label == 0);
    CHECK(cs.at(2).label == 1);
    CHECK(successors(cs) == std::vector<long>{1, -1, 1});
    CHECK(successor(cs, 0) == 1);
    CHECK(successor(cs, 1) == -1);

    // A longer mixed example: every successor carries label one less, and
    // corners at the global minimum point to rho.
    RandomSource rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        TreedBridge r = sample_uniform_treed_bridge(6, 2, rng);
        CornerSequence rcs = corner_order(r);
        int global_min = rcs.at(0).label;
        for (long i = 0; i < rcs.size(); ++i)
            global_min = std::min(global_min, rcs.at(i).label);
        std::vector<long> succ = successors(rcs);
        for (long i = 0; i < rcs.size(); ++i) {
            if (rcs.at(i).label == global_min) {
                CHECK(succ[i] == -1);
            } else {
                REQUIRE(succ[i] >= 0);
                CHECK(rcs.at(succ[i]).label == rcs.at(i).label - 1);
                // No corner strictly between carries a smaller-or-equal label.
                for (long j = (i + 1) % rcs.size(); j != succ[i]; j = (j + 1) % rcs.size())
                    CHECK(rcs.at(j).label > rcs.at(i).label - 1);
            }
        }
    }
}

TEST_CASE("corner construction reproduces the six smallest maps") {
    struct Row {
        const char* text;
        std::vector<int> next;
        int root;
        std::vector<int> labels;
        std::vector<int> dist;
    };
    const std::vector<int> twin{1, 0, 3, 2, 5, 4};
    std::vector<Row> rows{
        {"TB 1 -+\nT 1 () -", {4, 2, 5, 3, 0, 1}, 4, {0, -1, -2}, {2, 1, 0}},
        {"TB 1 -+\nT 1 () 0", {4, 3, 2, 5, 0, 1}, 4, {0, 0, -1}, {1, 1, 0}},
        {"TB 1 -+\nT 1 () +", {4, 5, 2, 0, 3, 1}, 4, {0, 1, -1}, {1, 2, 0}},
        {"TB 1 +-\nT 1 () -", {4, 2, 5, 3, 0, 1}, 1, {1, 0, -1}, {2, 1, 0}},
        {"TB 1 +-\nT 1 () 0", {4, 3, 2, 5, 0, 1}, 1, {1, 1, 0}, {1, 1, 0}},
        {"TB 1 +-\nT 1 () +", {4, 5, 2, 0, 3, 1}, 1, {1, 2, 0}, {1, 2, 0}},
    };
    std::set<std::vector<long long>> codes;
    for (const Row& row : rows) {
        PhiOutput out = phi_finite(tb_from(row.text));
        CHECK(out.map.half_edge_count() == 6);
        for (int h = 0; h < 6; ++h) {
            CHECK(out.map.twin(h) == twin[h]);
            CHECK(out.map.next(h) == row.next[h]);
        }
        CHECK(out.map.root() == row.root);
        CHECK(out.point == 2);
        CHECK(out.labels == row.labels);
        CHECK(distances_from(out.map, out.point) == row.dist);
        codes.insert(canonical_code_pointed(out.map, out.point));

        MapClass cl = classify(out.map);
        CHECK(cl.is_quadrangulation_with_boundary);
        CHECK(cl.perimeter == 2);
        CHECK(cl.size == 1);
    }
    CHECK(codes.size() == 6);

    // Perimeter-2, size-0 case: the lone edge pointed away from the root.
    for (const auto& tb : enumerate_treed_bridges(0, 1)) {
        PhiOutput out = phi_finite(tb);
        CHECK(out.map.half_edge_count() == 2);
        CHECK(out.point == 1);
        CHECK(out.vertex_origin[out.point] == std::pair<int, int>(-1, -1));
    }
}

TEST_CASE("vertex layout: tree arenas in slot order, extra vertex last") {
    RandomSource rng(23);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 1 + static_cast<int>(rng.below(7));
        int p = 1 + static_cast<int>(rng.below(3));
        TreedBridge tb = sample_uniform_treed_bridge(n, p, rng);
        PhiOutput out = phi_finite(tb);
        std::vector<int> down = tb.bridge.down_positions();
        CHECK(out.point == phi_rho_id(tb));
        CHECK(out.point == out.map.vertex_count() - 1);
        int expect = 0;
        for (int k = 0; k < p; ++k)
            for (int v = 0; v < tb.trees[k].tree.node_count(); ++v) {
                CHECK(phi_vertex_id(tb, k, v) == expect);
                CHECK(out.vertex_origin[expect] == std::pair<int, int>(k, v));
                CHECK(out.labels[expect] ==
                      tb.trees[k].labels[v] + tb.bridge.value(down[k]));
                ++expect;
            }
        CHECK(out.vertex_origin[expect] == std::pair<int, int>(-1, -1));
    }
}

TEST_CASE("labels measure the distance to the marked vertex") {
    for (int n = 0; n <= 3; ++n)
        for (int p = 1; p <= 2; ++p)
            for (const auto& tb : enumerate_treed_bridges(n, p)) {
                PhiOutput out = phi_finite(tb);
                MapClass cl = classify(out.map);
                REQUIRE(cl.is_quadrangulation_with_boundary);
                CHECK(cl.perimeter == 2 * p);
                CHECK(cl.size == n);
                std::vector<int> d = distances_from(out.map, out.point);
                for (int v = 0; v < out.map.vertex_count(); ++v)
                    CHECK(d[v] == out.labels[v] - out.labels[out.point]);
            }
}

TEST_CASE("external contour carries the bridge labels") {
    RandomSource rng(29);
    for (int rep = 0; rep < 60; ++rep) {
        int n = static_cast<int>(rng.below(8));
        int p = 1 + static_cast<int>(rng.below(4));
        TreedBridge tb = sample_uniform_treed_bridge(n, p, rng);
        PhiOutput out = phi_finite(tb);
        BoundaryWalk bw = boundary_walk(out.map);
        REQUIRE(static_cast<int>(bw.vertices.size()) == 2 * p);
        for (int i = 0; i < 2 * p; ++i)
            CHECK(out.labels[bw.vertices[i]] == tb.bridge.value(i));
    }
}

TEST_CASE("distinct treed bridges give distinct pointed maps") {
    std::set<std::vector<long long>> codes;
    auto all = enumerate_treed_bridges(2, 1);
    for (const auto& tb : all) {
        PhiOutput out = phi_finite(tb);
        codes.insert(canonical_code_pointed(out.map, out.point));
    }
    CHECK(codes.size() == all.size()); // 36
}

TEST_CASE("successor chains and geodesics") {
    RandomSource rng(37);
    for (int rep = 0; rep < 25; ++rep) {
        TreedBridge tb = sample_uniform_treed_bridge(6, 2, rng);
        CornerSequence cs = corner_order(tb);
        PhiOutput out = phi_finite(tb);
        // Adjacency table of the finite map.
        std::set<std::pair<int, int>> adj;
        for (int h = 0; h < out.map.half_edge_count(); ++h)
            adj.insert({out.map.vertex_of(h), out.map.head_of(h)});

        for (long c = 0; c < cs.size(); c += 3) {
            std::vector<long> chain = successor_chain(cs, c);
            REQUIRE(!chain.empty());
            CHECK(chain.front() == c);
            for (size_t i = 0; i + 1 < chain.size(); ++i)
                CHECK(cs.at(chain[i + 1]).label == cs.at(chain[i]).label - 1);
            CHECK(successor(cs, chain.back()) == -1);

            std::vector<int> path = simple_geodesic(cs, tb, c);
            CHECK(path.size() == chain.size() + 1);
            CHECK(path.back() == out.point);
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                CHECK(out.labels[path[i + 1]] == out.labels[path[i]] - 1);
                CHECK(adj.count({path[i], path[i + 1]}) == 1);
            }
        }
    }
}

TEST_CASE("corners merge at the arc-minimum label") {
    RandomSource rng(41);
    int checked = 0;
    for (int rep = 0; rep < 40; ++rep) {
        TreedBridge tb = sample_uniform_treed_bridge(7, 2, rng);
        CornerSequence cs = corner_order(tb);
        int global_min = cs.at(0).label;
        for (long i = 0; i < cs.size(); ++i)
            global_min = std::min(global_min, cs.at(i).label);
        for (int pairi = 0; pairi < 6; ++pairi) {
            long c1 = static_cast<long>(rng.below(static_cast<std::uint64_t>(cs.size())));
            long c2 = static_cast<long>(rng.below(static_cast<std::uint64_t>(cs.size())));
            std::vector<long> ch1 = successor_chain(cs, c1);
            std::vector<long> ch2 = successor_chain(cs, c2);
            std::set<long> seen(ch2.begin() + 1, ch2.end());
            long merge = -1;
            for (size_t i = 1; i < ch1.size(); ++i)
                if (seen.count(ch1[i])) {
                    merge = ch1[i];
                    break;
                }
            int expect = std::max(arc_min(cs, c1, c2), arc_min(cs, c2, c1)) - 1;
            if (expect < global_min) {
                CHECK(merge == -1); // the chains only meet at the marked vertex
            } else {
                REQUIRE(merge >= 0);
                CHECK(cs.at(merge).label == expect);
            }
            ++checked;
        }
    }
    CHECK(checked == 240);
}

TEST_CASE("infinite boundary resolution matches the bridge") {
    for (int p : {1, 2, 4}) {
        RandomSource rng(100 + p);
        for (int rep = 0; rep < 8; ++rep) {
            LazyTreedBridge tb = sample_infinite_treed_bridge(p, rng);
            BoundaryResolution br = phi_boundary(tb);
            REQUIRE(static_cast<int>(br.labels.size()) == 2 * p);
            REQUIRE(static_cast<int>(br.vertices.size()) == 2 * p);
            std::vector<int> down = tb.bridge.down_positions();
            for (int i = 0; i < 2 * p; ++i) CHECK(br.labels[i] == tb.bridge.value(i));
            for (int k = 0; k < p; ++k)
                CHECK(br.vertices[down[k]] == std::pair<int, int>(k, 0));
            // Consecutive contour vertices differ by one in label.
            for (int i = 0; i < 2 * p; ++i) {
                int j = (i + 1) % (2 * p);
                CHECK(std::abs(br.labels[i] - br.labels[j]) == 1);
            }
            CHECK(br.core_edge >= 0);
            CHECK(br.core_edge < 2 * p);
            // simple iff all resolved contour vertices are distinct.
            std::set<std::pair<int, int>> distinct(br.vertices.begin(), br.vertices.end());
            CHECK(br.simple == (distinct.size() == br.vertices.size()));

            // Owners are corners of the right tree carrying consistent labels.
            LazyCornerSequence cs(tb, 1L << 26);
            for (int i = 0; i < 2 * p; ++i) {
                Corner oc = cs.at(br.owners[i]);
                bool is_down = std::find(down.begin(), down.end(), i) != down.end();
                if (is_down)
                    CHECK(oc.label == br.labels[i]);
                else
                    CHECK(oc.label == br.labels[i] + 1);
            }
        }
    }
}

TEST_CASE("aperture bounds") {
    RandomSource rng(53);
    for (int p : {2, 5, 9}) {
        LazyTreedBridge tb = sample_infinite_treed_bridge(p, rng);
        ApertureBounds ab = aperture_bounds(tb);
        int mn = 0, mx = 0;
        for (int v : tb.bridge.values) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        CHECK(ab.delta_p == mx - mn);
        CHECK(ab.lower == ab.delta_p);
        CHECK(ab.K >= 0);
        CHECK(ab.K <= p - 1);
        int ceil_sqrt = 1;
        while (ceil_sqrt * ceil_sqrt < p) ++ceil_sqrt;
        CHECK(ab.upper == static_cast<long long>(2 * ab.K + 4) * (ceil_sqrt + ab.delta_p + 1));
        CHECK(ab.lower <= ab.upper);
    }
}

TEST_CASE("hull extraction is stable and reproducible") {
    RandomSource a(61), b(61);
    LazyTreedBridge ta = sample_infinite_treed_bridge(2, a);
    LazyTreedBridge tb = sample_infinite_treed_bridge(2, b);
    HullOutput ha = phi_hull(ta, 1);
    HullOutput hb = phi_hull(tb, 1);
    CHECK(ha.radius == 1);
    CHECK(ha.self_consistent);
    CHECK(ha.ball_code == hb.ball_code);
    CHECK(ha.depth_used == hb.depth_used);
    CHECK(!ha.partial_map.is_vertex_map());
    CHECK(ha.resolved_corners > 0);
    // The advertised code is the code of the ball of the partial map.
    CHECK(ha.ball_code == canonical_code(ball(ha.partial_map, ha.radius)));
}

TEST_CASE("corner construction output text round-trips") {
    PhiOutput out = phi_finite(tb_from("TB 1 +-\nT 1 () 0"));
    std::string text = to_text(out);
    PhiOutput back = phi_output_from_text(text);
    CHECK(back.point == out.point);
    CHECK(back.labels == out.labels);
    CHECK(back.vertex_origin == out.vertex_origin);
    CHECK(canonical_code(back.map) == canonical_code(out.map));
    CHECK(to_text(back) == text);
    CHECK_THROWS_AS(phi_output_from_text("garbage"), FormatError);
}
