#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "qwb/errors.hpp"
#include "qwb/exact_enum.hpp"
#include "qwb/rng.hpp"
#include "qwb/sampler_suite.hpp"

using namespace qwb;

TEST_CASE("random source basics") {
    RandomSource a(123), b(123);
    for (int i = 0; i < 50; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomSource r(7);
    for (int i = 0; i < 200; ++i) {
        CHECK(r.below(10) < 10);
        int s = r.label_step();
        CHECK(s >= -1);
        CHECK(s <= 1);
        CHECK(r.bits(5) < 32u);
    }
    // geometric_half: P(0) = 1/2, small values dominate.
    int zeros = 0;
    for (int i = 0; i < 2000; ++i) zeros += r.geometric_half() == 0 ? 1 : 0;
    CHECK(zeros > 850);
    CHECK(zeros < 1150);

    // Derived streams differ from each other and are reproducible.
    RandomSource s0 = RandomSource::stream(99, 0);
    RandomSource s1 = RandomSource::stream(99, 1);
    RandomSource s0b = RandomSource::stream(99, 0);
    CHECK(s0.next_u64() != s1.next_u64());
    RandomSource s0c = RandomSource::stream(99, 0);
    CHECK(s0b.next_u64() == s0c.next_u64());
}

TEST_CASE("uniform quadrangulation sampler") {
    RandomSource rng(201);
    CHECK(sample_uniform_quadrangulation(0, 0, rng).is_vertex_map());
    CHECK_THROWS_AS(sample_uniform_quadrangulation(2, 0, rng), Error);
    CHECK_THROWS_AS(sample_uniform_quadrangulation(-1, 1, rng), Error);

    for (int rep = 0; rep < 40; ++rep) {
        int n = static_cast<int>(rng.below(6));
        int p = 1 + static_cast<int>(rng.below(3));
        PlanarMap m = sample_uniform_quadrangulation(n, p, rng);
        MapClass cl = classify(m);
        CHECK(cl.is_quadrangulation_with_boundary);
        CHECK(cl.perimeter == 2 * p);
        CHECK(cl.size == n);
    }

    // All 9 maps of size 2, perimeter 2 appear, roughly uniformly.
    std::map<std::vector<long long>, int> hist;
    for (int rep = 0; rep < 1800; ++rep)
        hist[canonical_code(sample_uniform_quadrangulation(2, 1, rng))] += 1;
    CHECK(hist.size() == 9);
    for (const auto& kv : hist) CHECK(kv.second > 120); // mean 200 per class

    RandomSource x(31), y(31);
    for (int rep = 0; rep < 10; ++rep)
        CHECK(to_pmap(sample_uniform_quadrangulation(3, 2, x)) ==
              to_pmap(sample_uniform_quadrangulation(3, 2, y)));
}

TEST_CASE("boltzmann sampler hits the exact vacancy rates") {
    RandomSource rng(301);
    CHECK_THROWS_AS(sample_boltzmann(Rat(1, 4), false, rng), ZOutOfRangeError);
    CHECK_THROWS_AS(sample_boltzmann(Rat(0), false, rng), ZOutOfRangeError);
    CHECK_THROWS_AS(sample_boltzmann(Rat(-1, 8), false, rng), ZOutOfRangeError);

    // Subcritical statistics: at z = 1/10, P(vertex map) = 1/Wc(1/10) = 0.82918
    // and 1/vecWc(1/10) = 0.52362 when extra-rooted. 1500 draws, ~5 sigma bands.
    int vacant = 0;
    const int N = 1500;
    for (int i = 0; i < N; ++i) {
        PlanarMap m = sample_boltzmann(Rat(1, 10), false, rng);
        if (m.is_vertex_map())
            ++vacant;
        else
            CHECK(classify(m).is_quadrangulation_with_boundary);
    }
    CHECK(std::abs(vacant / double(N) - 0.82918) < 0.05);

    int vacant2 = 0;
    for (int i = 0; i < N; ++i)
        if (sample_boltzmann(Rat(1, 10), true, rng).is_vertex_map()) ++vacant2;
    CHECK(std::abs(vacant2 / double(N) - 0.52362) < 0.06);

    // At the critical point the perimeter tail is only polynomial, so a rare
    // draw can be huge; keep the batch small and seeded. P(vertex map) = 3/4.
    RandomSource crng(424242);
    int vacant3 = 0;
    for (int i = 0; i < 150; ++i) {
        PlanarMap m = sample_boltzmann(Rat(1, 8), false, crng);
        if (m.is_vertex_map())
            ++vacant3;
        else
            CHECK(classify(m).is_quadrangulation_with_boundary);
    }
    CHECK(std::abs(vacant3 / 150.0 - 0.75) < 0.16);

    RandomSource x(424242), y(424242);
    for (int i = 0; i < 20; ++i)
        CHECK(to_pmap(sample_boltzmann(Rat(1, 8), false, x)) ==
              to_pmap(sample_boltzmann(Rat(1, 8), false, y)));
}

TEST_CASE("core structure of infinite-volume draws") {
    // Perimeter 2: the core contour is the whole boundary.
    RandomSource rng(401);
    for (int rep = 0; rep < 60; ++rep) {
        CoreStructure cs = sample_core_structure(1, rng);
        CHECK(cs.core_perimeter == 2);
        CHECK(cs.parts_perimeters == std::vector<int>{0, 0});
    }

    for (int p : {2, 3, 5}) {
        for (int rep = 0; rep < 40; ++rep) {
            CoreStructure cs = sample_core_structure(p, rng);
            CHECK(cs.core_perimeter >= 2);
            CHECK(cs.core_perimeter <= 2 * p);
            CHECK(cs.core_perimeter % 2 == 0);
            REQUIRE(cs.parts_perimeters.size() ==
                    static_cast<size_t>(cs.core_perimeter));
            int total = cs.core_perimeter;
            for (int len : cs.parts_perimeters) {
                CHECK(len >= 0);
                CHECK(len % 2 == 0);
                total += len;
            }
            CHECK(total == 2 * p);
        }
    }

    CHECK_THROWS_AS(sample_core_structure(0, rng), Error);

    RandomSource x(55), y(55);
    for (int rep = 0; rep < 10; ++rep) {
        CoreStructure a = sample_core_structure(3, x);
        CoreStructure b = sample_core_structure(3, y);
        CHECK(a.core_perimeter == b.core_perimeter);
        CHECK(a.parts_perimeters == b.parts_perimeters);
    }
}

TEST_CASE("star join and split are inverse") {
    PlanarMap square =
        PlanarMap::build({1, 0, 3, 2, 5, 4, 7, 6}, {7, 2, 1, 4, 3, 6, 5, 0}, 0);
    PlanarMap lone = PlanarMap::build({1, 0}, {0, 1}, 0);
    PlanarMap path2 = PlanarMap::build({1, 0, 3, 2}, {0, 2, 1, 3}, 0);

    PlanarMap j1 = star_join(lone);
    MapClass c1 = classify(j1);
    CHECK(c1.is_quadrangulation_with_boundary);
    CHECK(c1.perimeter == 2);
    CHECK(c1.size == 1);
    auto back1 = star_split(j1, 1);
    REQUIRE(back1.has_value());
    CHECK(canonical_code(*back1) == canonical_code(lone));

    PlanarMap j2 = star_join(square);
    MapClass c2 = classify(j2);
    CHECK(c2.perimeter == 2);
    CHECK(c2.size == 3);
    auto back2 = star_split(j2, 2);
    REQUIRE(back2.has_value());
    CHECK(canonical_code(*back2) == canonical_code(square));

    CHECK_FALSE(star_split(j2, 1).has_value()); // wrong spoke count
    CHECK_FALSE(star_split(square, 2).has_value()); // no star at the root
    CHECK_THROWS_AS(star_join(path2), NotSimpleError);
    CHECK_THROWS_AS(star_join(PlanarMap::vertex_map()), NotSimpleError);

    // Random simple-boundary maps round-trip as well.
    RandomSource rng(501);
    int done = 0;
    for (int rep = 0; rep < 60; ++rep) {
        int n = 1 + static_cast<int>(rng.below(6));
        int p = 1 + static_cast<int>(rng.below(3));
        PlanarMap m = sample_uniform_quadrangulation(n, p, rng);
        if (!classify(m).simple_boundary) continue;
        auto round = star_split(star_join(m), p);
        REQUIRE(round.has_value());
        CHECK(canonical_code(*round) == canonical_code(m));
        ++done;
    }
    CHECK(done > 10);
}
