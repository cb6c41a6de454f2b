#include "doctest.h"

#include <cmath>
#include <sstream>

#include "qwb/errors.hpp"
#include "qwb/exact_enum.hpp"
#include "qwb/rational.hpp"

using namespace qwb;

namespace {

SeriesQ monomial(int k, const Rat& a, int order) {
    SeriesQ s;
    s.c.assign(order + 1, Rat(0));
    if (k <= order) s.c[k] = a;
    return s;
}

} // namespace

TEST_CASE("counting formulas at small sizes") {
    // General counts, perimeter 2p, size n.
    CHECK(count_general(0, 0) == 1); // vertex map
    CHECK(count_general(0, 1) == 1);
    CHECK(count_general(1, 1) == 2);
    CHECK(count_general(2, 1) == 9);
    CHECK(count_general(3, 1) == 54);
    CHECK(count_general(2, 2) == 54);
    CHECK(count_general(3, 2) == 378);
    // Size 0 maps are the plane trees with p edges.
    for (int p = 1; p <= 6; ++p) CHECK(count_general(0, p) == cat(p, 1));

    CHECK(count_simple(1, 1) == 2); // a 2-gon boundary is always simple
    CHECK(count_simple(3, 2) == 90);
    CHECK(count_simple(0, 1) == 1);

    CHECK(cat(3, 2) == 14);
    CHECK(cat(1, 1) == 1);
    CHECK(cat(0, 3) == 1);

    for (int n = 0; n <= 5; ++n)
        for (int p = 1; p <= 3; ++p) CHECK(pointed_identity_check(n, p));
}

TEST_CASE("series engine algebra") {
    // 1/(1-z) via divide.
    SeriesQ one = monomial(0, 1, 6);
    SeriesQ geom = one.divide(one - monomial(1, 1, 6));
    for (int k = 0; k <= 6; ++k) CHECK(geom[k] == 1);

    // Derivative and eval of (1+z)^2.
    SeriesQ sq = (one + monomial(1, 1, 6)) * (one + monomial(1, 1, 6));
    CHECK(sq.eval(Rat(3)) == 16);
    CHECK(sq.derivative()[0] == 2);
    CHECK(sq.derivative()[1] == 2);

    // Compose with b(0) = 0: (1/(1-z)) o z^2 = 1 + z^2 + z^4 + ...
    SeriesQ comp = geom.compose(monomial(2, 1, 6));
    for (int k = 0; k <= 6; ++k) CHECK(comp[k] == (k % 2 == 0 ? 1 : 0));

    CHECK(geom.truncated(2).order() == 2);
}

TEST_CASE("square-root series are mutually consistent") {
    const int N = 10;
    SeriesQ s = series_sqrt(N);
    SeriesQ lin = monomial(0, 1, N) - monomial(1, 8, N);
    CHECK((s * s).truncated(N) == lin);
    CHECK(series_half32(N) == (s * lin).truncated(N));

    // 24 z^2 Wc + 1 - 12z reproduces (1-8z)^{3/2}.
    SeriesQ wc = series_Wc(N);
    SeriesQ back = (monomial(2, 24, N) * wc).truncated(N) + monomial(0, 1, N) -
                   monomial(1, 12, N);
    CHECK(back == series_half32(N));

    // 8 z^2 vecWc + (1-8z)^{1/2} = 1 - 4z.
    SeriesQ vec = series_vecWc(N);
    SeriesQ vback = (monomial(2, 8, N) * vec).truncated(N) + s;
    CHECK(vback == monomial(0, 1, N) - monomial(1, 4, N));

    CHECK(half32_coefficient(0) == 1);
    CHECK(half32_coefficient(1) == -12);
    CHECK(half32_coefficient(2) == 24);
    CHECK(half32_coefficient(3) == 32);
    CHECK(half32_coefficient(4) == 96);
}

TEST_CASE("critical boundary weights") {
    SeriesQ wc = series_Wc(8);
    std::vector<Rat> expect{Rat(1),      Rat(4, 3),      Rat(4),    Rat(16), Rat(224, 3),
                            Rat(384),    Rat(2112),      Rat(36608, 3), Rat(73216)};
    for (int p = 0; p <= 8; ++p) {
        CHECK(wc[p] == expect[p]);
        CHECK(wc_coefficient(p) == expect[p]);
    }
    // Companion weights carry the (2p+1) marking factor.
    SeriesQ vec = series_vecWc(5);
    for (int p = 0; p <= 5; ++p) CHECK(vec[p] == Rat(2 * p + 1) * wc[p]);

    CHECK(series_C(3)[1] == 2);
    CHECK(series_C(3)[2] == 24);
    CHECK(series_C(3)[3] == 240);
}

TEST_CASE("series values at rational points are exact quadratics") {
    CHECK(wc_value(Rat(1, 8)).is_rational());
    CHECK(wc_value(Rat(1, 8)).rational_part() == Rat(4, 3));

    Rat z(1, 10);
    Rat lin = 1 - 8 * z;
    QuadQ s32 = sqrt32_value(z);
    QuadQ cube = s32 * s32;
    CHECK(cube.is_rational());
    CHECK(cube.rational_part() == lin * lin * lin);

    // 24 z^2 Wc(z) + 1 - 12z == (1-8z)^{3/2} exactly.
    QuadQ w = wc_value(z);
    QuadQ lhs = w * Rat(24 * z * z) + QuadQ::from_rat(Rat(1 - 12 * z), lin);
    CHECK((lhs - s32).sign() == 0);

    // vecWc: 8 z^2 vecWc(z) = 1 - 4z - (1-8z)^{1/2}.
    QuadQ v = vecwc_value(z) * Rat(8 * z * z);
    QuadQ sq = QuadQ::sqrt_d(lin); // (1-8z)^{1/2}
    CHECK((v + sq - QuadQ::from_rat(Rat(1 - 4 * z), lin)).sign() == 0);

    CHECK_THROWS_AS(wc_value(Rat(1, 4)), ZOutOfRangeError);
    CHECK_THROWS_AS(wc_value(Rat(0)), ZOutOfRangeError);
}

TEST_CASE("substitution identity between general and simple counts") {
    CHECK(identity_GF_check(4, 4));
    CHECK(identity_GF_check(6, 6));
    // Corrupting one simple count must break it.
    bool corrupted = identity_GF_check_with(
        4, 4, [](long n, long p) { return count_general(n, p); },
        [](long n, long p) {
            Int v = count_simple(n, p);
            if (n == 2 && p == 2) v += 1;
            return v;
        });
    CHECK_FALSE(corrupted);
}

TEST_CASE("boundary piece half-perimeter law") {
    Pmf pm = z_pmf(5);
    CHECK(pm.support == std::vector<long long>{0, 1, 2, 3, 4, 5});
    CHECK(pm.mass[0] == Rat(3, 4));
    CHECK(pm.mass[1] == Rat(1, 8));
    CHECK(pm.mass[2] == Rat(3, 64));
    CHECK(pm.mass[3] == Rat(3, 128));
    CHECK(pm.mass[4] == Rat(7, 512));
    CHECK(pm.mass[5] == Rat(9, 1024));

    // The tail bound at R = 0 is tight: P(Z > 0) = 1/4.
    Pmf p0 = z_pmf(0);
    REQUIRE(p0.tail_bound.has_value());
    CHECK(*p0.tail_bound == Rat(1, 4));
    CHECK(p0.total() + *p0.tail_bound == 1);

    // In general the bound dominates the true remainder.
    Pmf p12 = z_pmf(12);
    REQUIRE(p12.tail_bound.has_value());
    CHECK(p12.total() < 1);
    CHECK(p12.total() + *p12.tail_bound > 1);

    // The envelope constant is deterministic and modest.
    Rat a1 = z_tail_constant();
    Rat a2 = z_tail_constant();
    CHECK(a1 == a2);
    CHECK(a1 > Rat(9, 5));
    CHECK(a1 < Rat(2));
}

TEST_CASE("convolutions of the half-perimeter law") {
    CHECK(z_convolution_probability(1, 0) == Rat(3, 4));
    CHECK(z_convolution_probability(1, 2) == Rat(3, 64));
    CHECK(z_convolution_probability(2, 0) == Rat(9, 16));
    CHECK(z_convolution_probability(2, 1) == Rat(3, 16)); // 2 * (3/4)(1/8)
    // Total over all reachable sums is 1: check a partial sum stays below.
    Rat acc = 0;
    for (long s = 0; s <= 10; ++s) acc += z_convolution_probability(3, s);
    CHECK(acc < 1);
    CHECK(acc > Rat(19, 20));
}

TEST_CASE("core perimeter law") {
    Pmf p1 = core_perimeter_law(1, 1);
    CHECK(p1.support == std::vector<long long>{1});
    CHECK(p1.mass[0] == 1);

    Pmf p2 = core_perimeter_law(2, 2);
    CHECK(p2.support == std::vector<long long>{1, 2});
    CHECK(p2.mass[0] == Rat(4, 9));
    CHECK(p2.mass[1] == Rat(5, 9));

    for (int p = 1; p <= 40; ++p) CHECK(core_perimeter_law(p, p).total() == 1);

    // The full-perimeter atom is the probability of a simple boundary.
    for (int p = 1; p <= 6; ++p) {
        Pmf law = core_perimeter_law(p, p);
        CHECK(law.mass.back() == simple_probability(p));
    }
    CHECK(simple_probability(1) == 1);
    CHECK(simple_probability(2) == Rat(5, 9));
}

TEST_CASE("prefactor constants") {
    CHECK(cp_constant(1) == 2);
    CHECK(cp_constant(2) == 24);
    CHECK(cp_constant(3) == 240);
    CHECK(cp_constant(4) == 2240);
    CHECK(ct_constant(1) == 2);
    CHECK(ct_constant(2) == Rat(40, 3));
}

TEST_CASE("perimeter laws of the critical Boltzmann measures") {
    Rat z(1, 10);
    PerimeterLaws laws = perimeter_laws(z, 24);
    CHECK(laws.mean_pz == (1 + 4 * z) / (1 - 8 * z));
    CHECK(laws.pz_atoms.size() == 24);
    CHECK(laws.tilde_atoms.size() == 24);
    CHECK(laws.pz.support.size() == 24);
    for (const Rat& m : laws.pz.mass) CHECK(m > 0);
    for (const Rat& m : laws.tilde_pz.mass) CHECK(m > 0);
    CHECK(laws.pz.total() < 1);
    CHECK(laws.pz.total() > Rat(9, 10));
    CHECK(laws.tilde_pz.total() < 1);
    // Sanity: the numeric mean of the truncated law approaches the exact mean.
    Rat mean_trunc = 0;
    for (size_t i = 0; i < laws.pz.support.size(); ++i)
        mean_trunc += Rat(static_cast<long>(laws.pz.support[i])) * laws.pz.mass[i];
    CHECK(mean_trunc < laws.mean_pz);
}

TEST_CASE("local limit probe and prefactor ratio") {
    auto rows = local_limit_probe({10, 20});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].q == 10);
    CHECK(rows[0].prob > 0);
    CHECK(rows[1].prob > 0);
    CHECK(rows[0].prob > rows[1].prob); // atoms decay with q
    for (const auto& r : rows) {
        double expect = std::cbrt(static_cast<double>(2 * r.q) * (2 * r.q)) *
                        rat_to_double(r.prob);
        CHECK(std::abs(r.scaled - expect) < 1e-9);
    }

    Rat ratio = prefactor_ratio(100);
    CHECK(ratio > Rat(29, 10));
    CHECK(ratio < Rat(31, 10));
}

TEST_CASE("csv emitters") {
    std::ostringstream os;
    emit_pmf_csv(os, z_pmf(2));
    std::string text = os.str();
    CHECK(text.rfind("index,numerator,denominator,float64\n", 0) == 0);
    CHECK(text.find("0,3,4,0.75") != std::string::npos);

    std::ostringstream os2;
    emit_probe_csv(os2, local_limit_probe({5}));
    CHECK(os2.str().rfind("index,numerator,denominator,float64\n", 0) == 0);
}
