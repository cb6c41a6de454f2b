#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

#include "qwb/errors.hpp"

namespace qwb {

// Exact rational scalar. All enumeration-side results are held in this type;
// doubles appear only in reporting.
using Rat = mpq_class;
using Int = mpz_class;

inline Int factorial(unsigned long n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Int binomial(const Int& n, unsigned long k) {
    Int r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
    if (e < 0) mpq_inv(r.get_mpq_t(), r.get_mpq_t());
    r.canonicalize();
    return r;
}

// floor(sqrt(n)) for n >= 0.
inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// Rational enclosure [lo, hi] with hi - lo <= 2^-prec_bits.
struct RatInterval {
    Rat lo, hi;

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
};

// Enclosure of sqrt(x) for rational x >= 0. Scales to an integer square root:
// with s = floor(sqrt(num*den*4^k)), s/(den*2^k) <= sqrt(x) < (s+1)/(den*2^k).
inline RatInterval sqrt_interval(const Rat& x, unsigned prec_bits = 128) {
    if (sgn(x) < 0) throw Error("sqrt_interval: negative argument");
    if (sgn(x) == 0) return {Rat(0), Rat(0)};
    Int num = x.get_num(), den = x.get_den();
    Int scale = Int(1) << prec_bits;
    Int s = isqrt(num * den * scale * scale);
    Int d = den * scale;
    Rat lo(s, d), hi(s + 1, d);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

// Element of Q(sqrt(d)) for a fixed rational d >= 0: value a + b*sqrt(d).
// Exact field arithmetic; used for generating-function values at rational z
// where surds like (1-8z)^{3/2} appear. d = 0 degenerates to plain rationals.
struct QuadQ {
    Rat a, b, d;

    QuadQ() : a(0), b(0), d(0) {}
    QuadQ(Rat a_, Rat b_, Rat d_) : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {}
    static QuadQ from_rat(const Rat& r, const Rat& d) { return QuadQ(r, Rat(0), d); }
    static QuadQ sqrt_d(const Rat& d) { return QuadQ(Rat(0), Rat(1), d); }

    QuadQ operator+(const QuadQ& o) const { return QuadQ(a + o.a, b + o.b, d); }
    QuadQ operator-(const QuadQ& o) const { return QuadQ(a - o.a, b - o.b, d); }
    QuadQ operator*(const QuadQ& o) const {
        return QuadQ(a * o.a + b * o.b * d, a * o.b + b * o.a, d);
    }
    QuadQ operator*(const Rat& r) const { return QuadQ(a * r, b * r, d); }
    QuadQ inv() const {
        Rat n = a * a - b * b * d;
        if (sgn(n) == 0) throw Error("QuadQ::inv: zero element");
        return QuadQ(a / n, -b / n, d);
    }
    QuadQ operator/(const QuadQ& o) const { return *this * o.inv(); }

    bool is_rational() const { return sgn(b) == 0 || sgn(d) == 0; }
    Rat rational_part() const { return a; }

    // Exact sign. When a and b disagree in sign, whichever of |a|^2 and
    // |b|^2*d is larger decides.
    int sign() const {
        int sa = sgn(a), sb = sgn(b);
        if (sgn(d) == 0 || sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        int c = cmp(Rat(a * a), Rat(b * b * d));
        if (c == 0) return 0;
        return c > 0 ? sa : sb;
    }

    bool operator<(const QuadQ& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadQ& o) const { return (*this - o).sign() <= 0; }
    bool operator==(const QuadQ& o) const { return a == o.a && b == o.b; }

    RatInterval enclosure(unsigned prec_bits = 128) const {
        if (is_rational()) return {a, a};
        RatInterval s = sqrt_interval(d, prec_bits);
        Rat x = b * s.lo, y = b * s.hi;
        if (x > y) std::swap(x, y);
        return {a + x, a + y};
    }

    double to_double() const {
        RatInterval e = enclosure(80);
        return e.mid().get_d();
    }
};

inline QuadQ operator*(const Rat& r, const QuadQ& q) { return q * r; }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

} // namespace qwb
