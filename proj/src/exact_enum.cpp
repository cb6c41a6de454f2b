#include "qwb/exact_enum.hpp"

#include <cmath>
#include <mutex>

#include "qwb/errors.hpp"

namespace qwb {

namespace {

Int rat_to_int(const Rat& r, const char* what) {
    Rat c = r;
    c.canonicalize();
    if (c.get_den() != 1) throw Error(std::string("expected an integer value in ") + what);
    return c.get_num();
}

// Reduced fraction from a possibly non-coprime pair (mpq does not do this).
Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

} // namespace

SeriesQ SeriesQ::truncated(int order) const {
    SeriesQ r(order);
    for (int k = 0; k <= order && k <= this->order(); ++k) r.c[k] = c[k];
    return r;
}

SeriesQ SeriesQ::operator+(const SeriesQ& o) const {
    int N = std::min(order(), o.order());
    SeriesQ r(N);
    for (int k = 0; k <= N; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}

SeriesQ SeriesQ::operator-(const SeriesQ& o) const {
    int N = std::min(order(), o.order());
    SeriesQ r(N);
    for (int k = 0; k <= N; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}

SeriesQ SeriesQ::operator*(const SeriesQ& o) const {
    int N = std::min(order(), o.order());
    SeriesQ r(N);
    for (int i = 0; i <= N; ++i) {
        if (sgn(c[i]) == 0) continue;
        for (int j = 0; i + j <= N; ++j) {
            if (sgn(o.c[j]) == 0) continue;
            r.c[i + j] += c[i] * o.c[j];
        }
    }
    return r;
}

SeriesQ SeriesQ::derivative() const {
    if (order() == 0) return SeriesQ(0);
    SeriesQ r(order() - 1);
    for (int k = 1; k <= order(); ++k) r.c[k - 1] = c[k] * k;
    return r;
}

SeriesQ SeriesQ::compose(const SeriesQ& b) const {
    if (sgn(b.c[0]) != 0) throw FormatError("series composition needs inner constant term 0");
    int N = std::min(order(), b.order());
    SeriesQ r(N);
    r.c[0] = c[order()];
    SeriesQ bt = b.truncated(N);
    for (int k = order() - 1; k >= 0; --k) {
        r = r * bt;
        r.c[0] += c[k];
    }
    return r;
}

SeriesQ SeriesQ::divide(const SeriesQ& b) const {
    if (sgn(b.c[0]) == 0) throw FormatError("series division needs nonzero constant term");
    int N = std::min(order(), b.order());
    SeriesQ q(N);
    for (int k = 0; k <= N; ++k) {
        Rat acc = c[k];
        for (int j = 0; j < k; ++j) acc -= q.c[j] * b.c[k - j];
        q.c[k] = acc / b.c[0];
    }
    return q;
}

Rat SeriesQ::eval(const Rat& z) const {
    Rat r = c[order()];
    for (int k = order() - 1; k >= 0; --k) r = r * z + c[k];
    return r;
}

Rat Pmf::total() const {
    Rat t = 0;
    for (const Rat& m : mass) t += m;
    return t;
}

Int count_general(long n, long p) {
    if (n < 0 || p < 0) throw FormatError("counts need n, p >= 0");
    if (p == 0) return n == 0 ? Int(1) : Int(0);
    Rat r = Rat(factorial(2 * p)) / (Rat(factorial(p)) * Rat(factorial(p - 1)));
    r *= Rat(ipow(Int(3), n));
    r *= Rat(factorial(2 * n + p - 1)) / (Rat(factorial(n)) * Rat(factorial(n + p + 1)));
    return rat_to_int(r, "count_general");
}

Int count_simple(long n, long p) {
    if (n < 0 || p < 0) throw FormatError("counts need n, p >= 0");
    if (p == 0) return n == 0 ? Int(1) : Int(0);
    if (n == 0) return p == 1 ? Int(1) : Int(0);
    if (n - p + 1 < 0) return Int(0);
    Rat r = Rat(factorial(3 * p)) / (Rat(factorial(p)) * Rat(factorial(2 * p - 1)));
    r /= Rat(ipow(Int(3), p));
    r *= Rat(ipow(Int(3), n));
    r *= Rat(factorial(2 * n + p - 1)) / (Rat(factorial(n - p + 1)) * Rat(factorial(n + 2 * p)));
    return rat_to_int(r, "count_simple");
}

Int cat(long n, long p) {
    if (n < 0 || p < 1) throw FormatError("cat needs n >= 0, p >= 1");
    Rat r = make_rat(Int(p), Int(2 * n + p)) * Rat(binomial(Int(2 * n + p), static_cast<unsigned long>(n)));
    return rat_to_int(r, "cat");
}

bool pointed_identity_check(long n, long p) {
    Int lhs = Int(n + p + 1) * count_general(n, p);
    Int rhs = binomial(Int(2 * p), static_cast<unsigned long>(p)) * ipow(Int(3), n) * cat(n, p);
    return lhs == rhs;
}

namespace {

// Cache of the integer coefficients of (1-8z)^{3/2}; grown under a lock so
// concurrent Monte Carlo workers can share it.
std::mutex half32_mutex;
std::vector<Int>& half32_cache() {
    static std::vector<Int> cache{Int(1)};
    return cache;
}

// c_{k+1} = c_k * 4(2k-3) / (k+1); the quotient is always integral.
Int half32_step(const Int& ck, long k) {
    Int num = ck * Int(4 * (2 * k - 3));
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), Int(k + 1).get_mpz_t());
    if (r != 0) throw Error("non-integral coefficient in (1-8z)^{3/2}");
    return q;
}

} // namespace

Int half32_coefficient(long k) {
    if (k < 0) throw FormatError("negative series index");
    std::lock_guard<std::mutex> lock(half32_mutex);
    auto& cache = half32_cache();
    while (static_cast<long>(cache.size()) <= k) {
        long j = static_cast<long>(cache.size()) - 1;
        cache.push_back(half32_step(cache.back(), j));
    }
    return cache[k];
}

SeriesQ series_sqrt(int N) {
    SeriesQ s(N);
    Rat c = 1;
    for (int k = 0; k <= N; ++k) {
        s.c[k] = c;
        c *= make_rat(Int(4 * (2 * k - 1)), Int(k + 1));
    }
    return s;
}

SeriesQ series_half32(int N) {
    SeriesQ s(N);
    for (int k = 0; k <= N; ++k) s.c[k] = Rat(half32_coefficient(k));
    return s;
}

SeriesQ series_Wc(int N) {
    SeriesQ s(N);
    for (int k = 0; k <= N; ++k) s.c[k] = wc_coefficient(k);
    return s;
}

SeriesQ series_vecWc(int N) {
    SeriesQ sq = series_sqrt(N + 2);
    SeriesQ s(N);
    for (int k = 0; k <= N; ++k) s.c[k] = -sq.c[k + 2] / 8;
    return s;
}

SeriesQ series_C(int N) {
    // 2z (1-8z)^{-3/2}; the inverse power has b_{k+1} = b_k * 4(2k+3)/(k+1).
    SeriesQ s(N);
    Rat b = 1;
    for (int k = 0; k + 1 <= N; ++k) {
        s.c[k + 1] = 2 * b;
        b *= make_rat(Int(4 * (2 * k + 3)), Int(k + 1));
    }
    return s;
}

Rat wc_coefficient(long p) {
    if (p < 0) throw FormatError("negative series index");
    return make_rat(half32_coefficient(p + 2), Int(24));
}

QuadQ wc_value(const Rat& z) {
    if (sgn(z) <= 0 || z > Rat(1, 8)) throw ZOutOfRangeError("wc_value needs 0 < z <= 1/8");
    Rat d = 1 - 8 * z;
    Rat den = 24 * z * z;
    return QuadQ((12 * z - 1) / den, d / den, d);
}

QuadQ vecwc_value(const Rat& z) {
    if (sgn(z) <= 0 || z > Rat(1, 8)) throw ZOutOfRangeError("vecwc_value needs 0 < z <= 1/8");
    Rat d = 1 - 8 * z;
    Rat den = 8 * z * z;
    return QuadQ((1 - 4 * z) / den, Rat(-1) / den, d);
}

QuadQ sqrt32_value(const Rat& z) {
    if (sgn(z) <= 0 || z > Rat(1, 8)) throw ZOutOfRangeError("sqrt32_value needs 0 < z <= 1/8");
    Rat d = 1 - 8 * z;
    return QuadQ(Rat(0), d, d);
}

namespace {

using Bivar = std::vector<std::vector<Rat>>; // [i][j] = coeff of g^i z^j

Bivar bv_zero(int Ng, int Nz) { return Bivar(Ng + 1, std::vector<Rat>(Nz + 1)); }

Bivar bv_mul(const Bivar& a, const Bivar& b) {
    int Ng = static_cast<int>(a.size()) - 1;
    int Nz = static_cast<int>(a[0].size()) - 1;
    Bivar r = bv_zero(Ng, Nz);
    for (int i = 0; i <= Ng; ++i)
        for (int j = 0; j <= Nz; ++j) {
            if (sgn(a[i][j]) == 0) continue;
            for (int k = 0; i + k <= Ng; ++k)
                for (int l = 0; j + l <= Nz; ++l) {
                    if (sgn(b[k][l]) == 0) continue;
                    r[i + k][j + l] += a[i][j] * b[k][l];
                }
        }
    return r;
}

} // namespace

bool identity_GF_check_with(int Ng, int Nz,
                            const std::function<Int(long, long)>& general,
                            const std::function<Int(long, long)>& simple) {
    Bivar W = bv_zero(Ng, Nz), Wt = bv_zero(Ng, Nz);
    for (int i = 0; i <= Ng; ++i)
        for (int j = 0; j <= Nz; ++j) {
            W[i][j] = Rat(general(i, j));
            Wt[i][j] = Rat(simple(i, j));
        }
    // u = z W(g,z)^2 has z-valuation >= 1, so composing in the z-slot of the
    // simple-count series is well defined order by order.
    Bivar W2 = bv_mul(W, W);
    Bivar u = bv_zero(Ng, Nz);
    for (int i = 0; i <= Ng; ++i)
        for (int j = 1; j <= Nz; ++j) u[i][j] = W2[i][j - 1];
    Bivar acc = bv_zero(Ng, Nz);
    for (int i = 0; i <= Ng; ++i) acc[i][0] = Wt[i][Nz];
    for (int p = Nz - 1; p >= 0; --p) {
        acc = bv_mul(acc, u);
        for (int i = 0; i <= Ng; ++i) acc[i][0] += Wt[i][p];
    }
    return acc == W;
}

bool identity_GF_check(int Ng, int Nz) {
    return identity_GF_check_with(
        Ng, Nz, [](long n, long p) { return count_general(n, p); },
        [](long n, long p) { return count_simple(n, p); });
}

Rat z_tail_constant() {
    // max over 1 <= r <= 10^4 of P(Z=r) * r^2 (isqrt(r)+1) >= P(Z=r) r^{5/2},
    // doubled. Runs the coefficient recurrence with a rolling value so the
    // large coefficients are never cached.
    // The lambda must not deduce its return type: gmp expression templates
    // would escape with references to locals.
    static const Rat A = []() -> Rat {
        Int c = half32_coefficient(2); // value 24, start of the shifted tail
        Int pow8 = 1;
        Rat best = 0;
        for (long r = 1; r <= 10000; ++r) {
            c = half32_step(c, r + 1);
            pow8 *= 8;
            Rat proxy = make_rat(c * Int(r) * Int(r) * (isqrt(Int(r)) + 1), Int(32) * pow8);
            if (proxy > best) best = proxy;
        }
        return Rat(2) * best;
    }();
    return A;
}

Pmf z_pmf(long R) {
    if (R < 0) throw FormatError("z_pmf needs R >= 0");
    Pmf pmf;
    pmf.support.reserve(R + 1);
    pmf.mass.reserve(R + 1);
    Int c = half32_coefficient(2);
    Int pow8 = 1;
    for (long r = 0; r <= R; ++r) {
        if (r > 0) {
            c = half32_step(c, r + 1);
            pow8 *= 8;
        }
        pmf.support.push_back(r);
        pmf.mass.push_back(make_rat(c, Int(32) * pow8));
    }
    if (R == 0) {
        pmf.tail_bound = Rat(1, 4); // 1 - P(Z=0) exactly
    } else {
        // P(Z=r) <= (A/2) r^{-5/2} envelope, so the tail past R is at most
        // (A/2) * integral_R^inf x^{-5/2} dx = (A/3) R^{-3/2} <= (A/3)/(R isqrt(R)).
        pmf.tail_bound = z_tail_constant() / (3 * Rat(Int(R) * isqrt(Int(R))));
    }
    return pmf;
}

namespace {

// B(z) = sum_{r} c_{r+2} z^r truncated at degree cap: the integer-cleared
// atom weights 32 * 8^r * P(Z=r).
std::vector<Int> z_weight_poly(long cap) {
    std::vector<Int> b;
    b.reserve(cap + 1);
    for (long r = 0; r <= cap; ++r) b.push_back(half32_coefficient(r + 2));
    return b;
}

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b, long cap) {
    std::vector<Int> r(std::min<long>(cap + 1, static_cast<long>(a.size() + b.size()) - 1));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j < r.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

} // namespace

Rat z_convolution_probability(long m, long s) {
    if (m < 0) throw FormatError("negative convolution length");
    if (s < 0) return Rat(0);
    if (m == 0) return s == 0 ? Rat(1) : Rat(0);
    std::vector<Int> base = z_weight_poly(s);
    std::vector<Int> acc{Int(1)};
    long e = m;
    while (e > 0) {
        if (e & 1) acc = poly_mul(acc, base, s);
        e >>= 1;
        if (e > 0) base = poly_mul(base, base, s);
    }
    Int num = static_cast<long>(acc.size()) > s ? acc[s] : Int(0);
    return make_rat(num, ipow(Int(32), m) * ipow(Int(8), s));
}

Rat cp_constant(long p) {
    if (p < 1) throw FormatError("cp_constant needs p >= 1");
    return Rat(factorial(2 * p) * ipow(Int(2), p - 1)) / Rat(factorial(p) * factorial(p - 1));
}

Rat ct_constant(long q) {
    if (q < 1) throw FormatError("ct_constant needs q >= 1");
    return Rat(factorial(3 * q) * ipow(Int(2), q - 1)) /
           Rat(factorial(q) * factorial(2 * q - 1) * ipow(Int(3), q));
}

Rat simple_probability(long p) { return ct_constant(p) / cp_constant(p); }

Pmf core_perimeter_law(int p, int R) {
    if (p < 1) throw FormatError("core law needs p >= 1");
    if (R < p) throw FormatError("core law needs support cutoff R >= p");
    Pmf pmf;
    // mass(q) = [q^{-1}(9/2)^{-q} C~_q] / [p^{-1} 8^{-p} C_p] * P(Z_1+..+Z_{2q} = p-q),
    // with the sqrt(pi) of both constants cancelled; everything is rational.
    Rat denom = cp_constant(p) / (Rat(p) * rat_pow(Rat(8), p));
    std::vector<Int> base = z_weight_poly(p);
    std::vector<Int> b2 = poly_mul(base, base, p);
    std::vector<Int> conv{Int(1)};
    for (int q = 1; q <= p; ++q) {
        conv = poly_mul(conv, b2, p);
        long s = p - q;
        Int num = static_cast<long>(conv.size()) > s ? conv[s] : Int(0);
        Rat prob = make_rat(num, ipow(Int(32), 2 * q) * ipow(Int(8), s));
        Rat pref = ct_constant(q) / (Rat(q) * rat_pow(Rat(9, 2), q));
        pmf.support.push_back(q);
        pmf.mass.push_back(pref / denom * prob);
    }
    return pmf;
}

PerimeterLaws perimeter_laws(const Rat& z, int cutoff) {
    if (sgn(z) <= 0 || z >= Rat(1, 8))
        throw ZOutOfRangeError("perimeter laws need 0 < z < 1/8");
    if (cutoff < 1) throw FormatError("cutoff must be >= 1");
    PerimeterLaws out;
    QuadQ factor = sqrt32_value(z);
    QuadQ wc = wc_value(z);
    QuadQ vec = vecwc_value(z);
    QuadQ zw2 = wc * wc * z;
    QuadQ tilde_base = vec * factor / (wc * (2 * z)); // before the (z W_c^2)^q factor
    QuadQ running(Rat(1), Rat(0), factor.d);
    Rat zpow = 1;
    for (int i = 1; i <= cutoff; ++i) {
        // P(perimeter = p) = z^{p-1} C_p sqrt(pi) (1-8z)^{3/2} / 2
        out.pz_atoms.push_back(factor * (zpow * cp_constant(i) / 2));
        zpow *= z;
        running = running * zw2;
        out.tilde_atoms.push_back(running * tilde_base * ct_constant(i));
    }
    auto render = [](const std::vector<QuadQ>& atoms) {
        Pmf pmf;
        QuadQ sum(Rat(0), Rat(0), atoms.empty() ? Rat(0) : atoms[0].d);
        for (size_t i = 0; i < atoms.size(); ++i) {
            pmf.support.push_back(static_cast<long long>(i) + 1);
            pmf.mass.push_back(atoms[i].enclosure(96).mid());
            sum = sum + atoms[i];
        }
        QuadQ rest = QuadQ(Rat(1), Rat(0), sum.d) - sum;
        Rat hi = rest.enclosure(96).hi;
        pmf.tail_bound = sgn(hi) > 0 ? hi : Rat(0);
        return pmf;
    };
    out.pz = render(out.pz_atoms);
    out.tilde_pz = render(out.tilde_atoms);
    out.mean_pz = (1 + 4 * z) / (1 - 8 * z);
    return out;
}

std::vector<LocalLimitRow> local_limit_probe(const std::vector<long>& q_list) {
    std::vector<LocalLimitRow> rows;
    for (long q : q_list) {
        if (q < 1) throw FormatError("probe needs q >= 1");
        if (q > 200) throw TooLargeError("probe convolutions capped at q = 200");
        Rat prob = z_convolution_probability(2 * q, 2 * q);
        double scaled = std::pow(2.0 * static_cast<double>(q), 2.0 / 3.0) * rat_to_double(prob);
        rows.push_back({q, prob, scaled});
    }
    return rows;
}

Rat prefactor_ratio(long q) {
    if (q < 1) throw FormatError("prefactor ratio needs q >= 1");
    Rat num = ct_constant(q) / (Rat(q) * rat_pow(Rat(9, 2), q));
    Rat den = cp_constant(3 * q) / (Rat(3 * q) * rat_pow(Rat(8), 3 * q));
    return num / den;
}

void emit_pmf_csv(std::ostream& os, const Pmf& pmf) {
    os << "index,numerator,denominator,float64\n";
    for (size_t i = 0; i < pmf.support.size(); ++i) {
        os << pmf.support[i] << ',' << pmf.mass[i].get_num().get_str() << ','
           << pmf.mass[i].get_den().get_str() << ',' << rat_to_double(pmf.mass[i]) << '\n';
    }
}

void emit_probe_csv(std::ostream& os, const std::vector<LocalLimitRow>& rows) {
    os << "index,numerator,denominator,float64\n";
    for (const auto& row : rows) {
        os << row.q << ',' << row.prob.get_num().get_str() << ',' << row.prob.get_den().get_str()
           << ',' << row.scaled << '\n';
    }
}

} // namespace qwb
