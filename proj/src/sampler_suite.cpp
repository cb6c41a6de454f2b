#include "qwb/sampler_suite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <utility>

#include "qwb/errors.hpp"
#include "qwb/exact_enum.hpp"
#include "qwb/schaeffer.hpp"
#include "qwb/treed_bridge.hpp"

namespace qwb {

PlanarMap sample_uniform_quadrangulation(int n, int p, RandomSource& rng) {
    if (n == 0 && p == 0) return PlanarMap::vertex_map();
    if (p < 1 || n < 0) throw Error("sample_uniform_quadrangulation: need n >= 0, p >= 1");
    TreedBridge tb = sample_uniform_treed_bridge(n, p, rng);
    return phi_finite(tb).map;
}

namespace {

Rat dyadic(const Int& a, unsigned k) { return Rat(a) / Rat(ipow(Int(2), k)); }

// Smallest idx with U * total < cum(idx), for U uniform on [0,1) revealed one
// bit at a time; exact, so the selected index has probability
// (cum(idx) - cum(idx-1)) / total.
long draw_smallest(RandomSource& rng, const Rat& d, const QuadQ& total,
                   const std::function<Rat(long)>& cum, long cap, const char* what) {
    Int num = 0;
    unsigned bits = 0;
    long idx = 0;
    while (true) {
        if (idx > cap) throw TailUnresolvedError(std::string(what) + ": draw fell past the table cap");
        QuadQ c = QuadQ::from_rat(cum(idx), d);
        while (true) {
            QuadQ lo = total * dyadic(num, bits);
            QuadQ hi = total * dyadic(num + 1, bits);
            if (hi <= c) return idx;
            if (!(lo < c)) {
                ++idx;
                break;
            }
            num = num * 2 + (rng.bit() ? 1 : 0);
            ++bits;
            if (bits > 4096) throw Error("draw_smallest: dyadic refinement stuck");
        }
    }
}

constexpr long kPerimeterCap = 100000;
constexpr long kSizeCap = 2000000;

struct CondTable {
    std::vector<Rat> cum;  // cumulative 12^{-n} q_{n,p} over n = 0..
    Rat term;
    long n = 0;
};

struct BoltzTable {
    Rat z;
    bool extra = false;
    Rat d;        // 1 - 8z
    QuadQ total;  // W_c(z), or its (2p+1)-weighted variant
    std::vector<Rat> zpow{Rat(1)};
    std::vector<Rat> wp;
    std::vector<Rat> marg_cum;
    std::map<long, CondTable> cond;

    const Rat& marginal_cum(long p) {
        while (static_cast<long>(marg_cum.size()) <= p) {
            long k = static_cast<long>(marg_cum.size());
            wp.push_back(wc_coefficient(k));
            while (static_cast<long>(zpow.size()) <= k) zpow.push_back(zpow.back() * z);
            Rat mass = wp[k] * zpow[k];
            if (extra) mass *= Rat(2 * k + 1);
            marg_cum.push_back((k == 0 ? Rat(0) : marg_cum[k - 1]) + mass);
        }
        return marg_cum[p];
    }

    const Rat& conditional_cum(long p, long n) {
        CondTable& t = cond[p];
        if (t.cum.empty()) {
            t.term = Rat(count_general(0, p));
            t.cum.push_back(t.term);
            t.n = 0;
        }
        while (static_cast<long>(t.cum.size()) <= n) {
            long m = t.n;
            t.term *= Rat(Int(2 * m + p) * Int(2 * m + p + 1));
            t.term /= Rat(Int(4) * Int(m + 1) * Int(m + p + 2));
            t.n = m + 1;
            t.cum.push_back(t.cum.back() + t.term);
        }
        return t.cum[n];
    }
};

std::map<std::pair<Rat, bool>, BoltzTable>& boltz_cache() {
    static std::map<std::pair<Rat, bool>, BoltzTable> cache;
    return cache;
}
std::mutex& boltz_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

PlanarMap sample_boltzmann(const Rat& z, bool extra_rooted, RandomSource& rng) {
    if (sgn(z) <= 0 || z > Rat(1, 8)) throw ZOutOfRangeError("sample_boltzmann: need 0 < z <= 1/8");

    long p, n;
    {
        std::lock_guard<std::mutex> lock(boltz_mutex());
        BoltzTable& tab = boltz_cache()[{z, extra_rooted}];
        if (tab.wp.empty()) {
            tab.z = z;
            tab.extra = extra_rooted;
            tab.d = Rat(1) - Rat(8) * z;
            tab.total = extra_rooted ? vecwc_value(z) : wc_value(z);
        }
        p = draw_smallest(
            rng, tab.d, tab.total, [&](long k) { return tab.marginal_cum(k); }, kPerimeterCap,
            "boltzmann perimeter");
        if (p == 0) return PlanarMap::vertex_map();
        QuadQ wtot = QuadQ::from_rat(tab.wp[p], Rat(0));
        n = draw_smallest(
            rng, Rat(0), wtot, [&](long k) { return tab.conditional_cum(p, k); }, kSizeCap,
            "boltzmann size");
    }
    return sample_uniform_quadrangulation(static_cast<int>(n), static_cast<int>(p), rng);
}

CoreStructure sample_core_structure(int p, RandomSource& rng, std::int64_t cap_nodes,
                                    int cap_spine, long cap_corners) {
    if (p < 1) throw Error("sample_core_structure: p must be positive");
    LazyTreedBridge tb = sample_infinite_treed_bridge(p, rng, cap_nodes, cap_spine);
    BoundaryResolution br = phi_boundary(tb, cap_corners);
    const int twop = 2 * p;
    auto vert = [&](int t) { return br.vertices[(t + br.core_edge) % twop]; };

    // A contour edge is pinched off exactly when some return stretch of a
    // repeated vertex covers it without covering the known on-core edge
    // (slot 0 after rotation).
    std::map<std::pair<int, int>, std::vector<int>> visits;
    for (int t = 0; t < twop; ++t) visits[vert(t)].push_back(t);
    std::vector<char> off(twop, 0);
    for (const auto& [v, pos] : visits) {
        const int k = static_cast<int>(pos.size());
        if (k < 2) continue;
        for (int a = 0; a < k; ++a) {
            int i = pos[a], j = pos[(a + 1) % k];
            int len = (j - i + twop) % twop;
            if ((twop - i) % twop < len) continue;  // covers slot 0
            for (int s = 0; s < len; ++s) off[(i + s) % twop] = 1;
        }
    }

    std::vector<int> core_pos;
    for (int t = 0; t < twop; ++t)
        if (!off[t]) core_pos.push_back(t);
    if (core_pos.empty() || core_pos[0] != 0)
        throw Error("sample_core_structure: decomposition lost its anchor edge");
    if (core_pos.size() % 2 != 0) throw Error("sample_core_structure: odd core perimeter");
    std::set<std::pair<int, int>> seen;
    for (int t : core_pos)
        if (!seen.insert(vert(t)).second)
            throw Error("sample_core_structure: core contour is not simple");

    CoreStructure cs;
    cs.core_perimeter = static_cast<int>(core_pos.size());
    for (std::size_t a = 0; a < core_pos.size(); ++a) {
        int from = core_pos[a];
        int to = core_pos[(a + 1) % core_pos.size()];
        cs.parts_perimeters.push_back((to - from + twop) % twop - 1);
    }
    return cs;
}

PlanarMap star_join(const PlanarMap& q) {
    if (q.is_vertex_map()) throw NotSimpleError("star_join: map has no boundary");
    MapClass cl = classify(q);
    if (!cl.simple_boundary) throw NotSimpleError("star_join: boundary is pinched");
    BoundaryWalk bw = boundary_walk(q);
    const int twop = static_cast<int>(bw.half_edges.size());
    const int p = twop / 2;
    const int H = q.half_edge_count();

    // New arcs: companion spoke C (halves H, H+1) and spokes S_i (halves
    // H+2+2i at the centre, H+3+2i at boundary vertex 2i).
    const int c_out = H, c_in = H + 1;
    auto s_o = [&](int i) { return H + 2 + 2 * i; };
    auto s_w = [&](int i) { return H + 3 + 2 * i; };
    std::vector<int> twin(H + 2 * p + 2), nxt(H + 2 * p + 2);
    for (int h = 0; h < H; ++h) {
        twin[h] = q.twin(h);
        nxt[h] = q.next(h);
    }
    twin[c_out] = c_in;
    twin[c_in] = c_out;
    for (int i = 0; i < p; ++i) {
        twin[s_o(i)] = s_w(i);
        twin[s_w(i)] = s_o(i);
    }
    // Centre rotation: c_out, S_{p-1}, ..., S_0.
    nxt[c_out] = s_o(p - 1);
    for (int i = p - 1; i > 0; --i) nxt[s_o(i)] = s_o(i - 1);
    nxt[s_o(0)] = c_out;
    // Each spoke fills the external corner of its boundary vertex; the two
    // parallel halves at the root corner enclose the new external 2-gon.
    for (int i = 1; i < p; ++i) {
        nxt[q.twin(bw.half_edges[2 * i - 1])] = s_w(i);
        nxt[s_w(i)] = bw.half_edges[2 * i];
    }
    nxt[q.twin(bw.half_edges[twop - 1])] = c_in;
    nxt[c_in] = s_w(0);
    nxt[s_w(0)] = bw.half_edges[0];
    return PlanarMap::build(std::move(twin), std::move(nxt), c_out);
}

std::optional<PlanarMap> star_split(const PlanarMap& m, int p) {
    if (p < 1 || m.is_vertex_map()) return std::nullopt;
    if (m.face_degree(m.root_face()) != 2) return std::nullopt;
    const int hr = m.root();
    const int o = m.vertex_of(hr);
    const int g = m.phi(hr);
    if (g == m.twin(hr)) return std::nullopt;  // lone-edge 2-gon
    if (m.vertex_of(g) != m.head_of(hr) || m.head_of(g) != o) return std::nullopt;

    std::vector<int> spokes;
    for (int cur = m.next(hr); cur != hr; cur = m.next(cur)) spokes.push_back(cur);
    std::reverse(spokes.begin(), spokes.end());
    if (static_cast<int>(spokes.size()) != p) return std::nullopt;
    if (spokes.front() != m.twin(g)) return std::nullopt;

    std::vector<int> boundary;
    for (int i = 0; i < p; ++i) {
        int s = spokes[i];
        if (m.face_degree(m.face_of(s)) != 4) return std::nullopt;
        int b0 = m.phi(s);
        int b1 = m.phi(b0);
        int closing = m.phi(b1);
        if (closing != (i + 1 < p ? m.twin(spokes[i + 1]) : m.twin(hr))) return std::nullopt;
        boundary.push_back(b0);
        boundary.push_back(b1);
    }
    std::set<int> star_edges{hr / 2};
    for (int s : spokes) star_edges.insert(s / 2);
    for (int b : boundary)
        if (star_edges.count(b / 2)) return std::nullopt;

    std::vector<char> keep(m.edge_count(), 1);
    for (int e : star_edges) keep[e] = 0;
    PlanarMap out;
    try {
        out = submap(m, keep, boundary[0]);
    } catch (const Error&) {
        return std::nullopt;
    }
    MapClass cl = classify(out);
    if (!cl.simple_boundary || cl.perimeter != 2 * p) return std::nullopt;
    if (canonical_code(star_join(out)) != canonical_code(m)) return std::nullopt;
    return out;
}

}  // namespace qwb
