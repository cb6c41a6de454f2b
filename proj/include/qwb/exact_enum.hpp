#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "qwb/rational.hpp"

namespace qwb {

// Truncated power series with exact rational coefficients; index k holds the
// coefficient of z^k, up to and including z^order.
struct SeriesQ {
    std::vector<Rat> c;

    SeriesQ() : c(1) {}
    explicit SeriesQ(int order) : c(order + 1) {}

    int order() const { return static_cast<int>(c.size()) - 1; }
    const Rat& operator[](int k) const { return c[k]; }
    Rat& operator[](int k) { return c[k]; }

    SeriesQ truncated(int order) const;
    SeriesQ operator+(const SeriesQ& o) const;
    SeriesQ operator-(const SeriesQ& o) const;
    SeriesQ operator*(const SeriesQ& o) const;
    SeriesQ derivative() const;
    // Substitution a(b(z)); requires b(0) = 0.
    SeriesQ compose(const SeriesQ& b) const;
    // a / b; requires b(0) != 0.
    SeriesQ divide(const SeriesQ& b) const;
    // Evaluation at a rational point (plain truncated-sum value).
    Rat eval(const Rat& z) const;

    bool operator==(const SeriesQ& o) const { return c == o.c; }
};

// Finitely enumerated probability atoms with an optional certified bound on
// the mass that was not enumerated.
struct Pmf {
    std::vector<long long> support;
    std::vector<Rat> mass;
    std::optional<Rat> tail_bound;

    Rat total() const;
};

// Number of rooted quadrangulations with boundary, size n, perimeter 2p.
// (2p)!/(p!(p-1)!) 3^n (2n+p-1)!/(n!(n+p+1)!); the vertex map counts for
// (0,0).
Int count_general(long n, long p);

// Simple-boundary count: 3^{-p}(3p)!/(p!(2p-1)!) 3^n (2n+p-1)!/((n-p+1)!(n+2p)!)
// for n >= 1, zero when n-p+1 < 0, with the (0,0) and (0,1) conventions.
Int count_simple(long n, long p);

// Forests of p plane trees with n edges in total: p/(2n+p) binom(2n+p, n).
Int cat(long n, long p);

// (n+p+1) * count_general(n,p) == binom(2p,p) * 3^n * cat(n,p).
bool pointed_identity_check(long n, long p);

// Integer coefficient of z^k in (1-8z)^{3/2}: 1, -12, 24, 32, 96, ...
Int half32_coefficient(long k);

SeriesQ series_sqrt(int N);   // (1-8z)^{1/2}
SeriesQ series_half32(int N); // (1-8z)^{3/2}
SeriesQ series_Wc(int N);     // ((1-8z)^{3/2} - 1 + 12z) / (24 z^2)
SeriesQ series_vecWc(int N);  // (1 - 4z - (1-8z)^{1/2}) / (8 z^2)
SeriesQ series_C(int N);      // 2z (1-8z)^{-3/2}, i.e. C(z) stripped of 1/sqrt(pi)

// Coefficient of z^p in W_c: the 12^{-n}-weighted count over all sizes at
// fixed perimeter.
Rat wc_coefficient(long p);

// Exact values in Q(sqrt(1-8z)) at a rational point 0 < z <= 1/8.
QuadQ wc_value(const Rat& z);
QuadQ vecwc_value(const Rat& z);
QuadQ sqrt32_value(const Rat& z); // (1-8z)^{3/2}

// Substitutes z W(g,z)^2 into the simple-count series and compares with the
// general-count series, coefficient-exactly up to bivariate order (Ng, Nz).
// The count hooks exist so tests can corrupt one value as a negative control.
bool identity_GF_check(int Ng, int Nz);
bool identity_GF_check_with(int Ng, int Nz,
                            const std::function<Int(long, long)>& general,
                            const std::function<Int(long, long)>& simple);

// Law of the half-perimeter Z of a critically weighted boundary piece:
// P(Z=r) = (3/4) 8^{-r} [z^r]W_c, enumerated through r = R with a certified
// rational tail bound of order R^{-3/2}.
Pmf z_pmf(long R);

// Constant A of the tail envelope P(Z=r) <= (A/2) r^{-5/2}: the empirical
// maximum over r <= 10^4 of a rational upper proxy, then doubled.
Rat z_tail_constant();

// Exact rational P(Z_1 + ... + Z_m = s) for independent copies of Z.
Rat z_convolution_probability(long m, long s);

// Exact core half-perimeter law on q in {1..p}; R must be at least p so the
// convolution support is complete. Masses sum to exactly 1.
Pmf core_perimeter_law(int p, int R);

// Asymptotic-constant ratios with the sqrt(pi) stripped: these are exactly
// rational.
Rat cp_constant(long p);     // C_p sqrt(pi)  = (2p)!/(p!(p-1)!) 2^{p-1}
Rat ct_constant(long q);     // C~_q sqrt(pi) = (3q)!/(q!(2q-1)!) 3^{-q} 2^{q-1}

// P(boundary is simple at perimeter 2p in the infinite-volume law): C~_p/C_p.
Rat simple_probability(long p);

// Boundary-length laws of the z-randomized ensembles. Atoms are exact
// elements of Q(sqrt(1-8z)); the Pmf renderings carry certified rational
// enclosure midpoints (enclosure width < 2^-96) for reporting only.
struct PerimeterLaws {
    std::vector<QuadQ> pz_atoms;    // index i is perimeter p = i+1
    std::vector<QuadQ> tilde_atoms; // index i is half-perimeter q = i+1
    Pmf pz;
    Pmf tilde_pz;
    Rat mean_pz; // exact: (1+4z)/(1-8z)
};
PerimeterLaws perimeter_laws(const Rat& z, int cutoff);

// Scaled atom probabilities (2q)^{2/3} P(Z_1+...+Z_{2q} = 2q); prob is exact,
// scaled is a float rendering for reports.
struct LocalLimitRow {
    long q;
    Rat prob;
    double scaled;
};
std::vector<LocalLimitRow> local_limit_probe(const std::vector<long>& q_list);

// (q^{-1}(9/2)^{-q} C~_q) / ((3q)^{-1} 8^{-3q} C_{3q}); tends to 3.
Rat prefactor_ratio(long q);

// CSV emitters: columns (index, numerator, denominator, float64).
void emit_pmf_csv(std::ostream& os, const Pmf& pmf);
void emit_probe_csv(std::ostream& os, const std::vector<LocalLimitRow>& rows);

} // namespace qwb
