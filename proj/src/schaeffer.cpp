#include "qwb/schaeffer.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "qwb/errors.hpp"

namespace qwb {

namespace {

using Pos = LazyCornerSequence::Pos;

// Corner-to-successor chords, one per corner. succ[i] = -1 when label(i) is
// minimal. incoming[q] lists the corners whose chord lands in the sector of
// corner q, nearest predecessor first; rho_corners are the minimal-label
// corners in contour order. Labels never drop by more than 1 along the cyclic
// sequence, so the successor of i is simply the next corner with a smaller
// label, which a monotone stack finds in linear time.
struct SuccessorTables {
    std::vector<long> succ;
    std::vector<std::vector<long>> incoming;
    std::vector<long> rho_corners;
};

SuccessorTables successor_tables(const CornerSequence& cs) {
    const long M = cs.size();
    SuccessorTables t;
    t.succ.assign(M, -1);
    t.incoming.resize(M);
    std::vector<long> stack;
    for (long s = 0; s < 2 * M; ++s) {
        long i = s % M;
        int li = cs.at(i).label;
        while (!stack.empty() && cs.at(stack.back()).label > li) {
            long j = stack.back();
            if (cs.at(j).label != li + 1)
                throw Error("corner labels dropped by more than one along the contour");
            stack.pop_back();
            if (t.succ[j] == -1) {
                t.succ[j] = i;
                t.incoming[i].push_back(j);
            }
        }
        if (s < M) stack.push_back(i);
    }
    for (long i = 0; i < M; ++i)
        if (t.succ[i] == -1) t.rho_corners.push_back(i);
    if (t.rho_corners.empty()) throw Error("corner sequence has no minimal label");
    return t;
}

std::vector<int> tree_offsets(const TreedBridge& tb) {
    std::vector<int> off(tb.tree_count() + 1, 0);
    for (int k = 0; k < tb.tree_count(); ++k)
        off[k + 1] = off[k] + tb.trees[k].tree.node_count();
    return off;
}

} // namespace

std::vector<long> successors(const CornerSequence& cs) { return successor_tables(cs).succ; }

long successor(const CornerSequence& cs, long c) {
    if (c < 0 || c >= cs.size()) throw FormatError("corner index out of range");
    return successor_tables(cs).succ[c];
}

LazyCornerSequence::Pos successor(LazyCornerSequence& cs, const LazyCornerSequence::Pos& c) {
    return cs.find_forward(cs.forward(c), cs.at(c).label - 1);
}

int phi_vertex_id(const TreedBridge& tb, int tree, int node) {
    return tree_offsets(tb)[tree] + node;
}

int phi_rho_id(const TreedBridge& tb) { return tree_offsets(tb).back(); }

PhiOutput phi_finite(const TreedBridge& tb) {
    tb.validate();
    const CornerSequence cs = corner_order(tb);
    const long M = cs.size();
    const int p = tb.tree_count();
    const std::vector<int> off = tree_offsets(tb);
    const int V = off.back() + 1;
    const int rho = V - 1;

    SuccessorTables st = successor_tables(cs);

    // Corners of each tree vertex in contour order (= increasing index, since
    // a vertex lives in a single tree block).
    std::vector<std::vector<long>> vcorners(V - 1);
    for (long i = 0; i < M; ++i) {
        const Corner& c = cs.at(i);
        vcorners[off[c.tree] + c.node].push_back(i);
    }

    // One chord per corner: half-edge 2i leaves the vertex of corner i, its
    // twin 2i+1 leaves the vertex of succ(i) (or rho). Around a tree vertex
    // the clockwise order is: sectors in contour order, and inside a sector
    // the landing chords nearest-predecessor-first, then the outgoing chord.
    // next() turns counterclockwise, so each clockwise list is reversed.
    const int H = static_cast<int>(2 * M);
    std::vector<int> twin(H), next(H, -1);
    for (long i = 0; i < M; ++i) {
        twin[2 * i] = static_cast<int>(2 * i + 1);
        twin[2 * i + 1] = static_cast<int>(2 * i);
    }
    std::vector<int> cw;
    for (int v = 0; v < V - 1; ++v) {
        cw.clear();
        for (long q : vcorners[v]) {
            for (long j : st.incoming[q]) cw.push_back(static_cast<int>(2 * j + 1));
            cw.push_back(static_cast<int>(2 * q));
        }
        std::reverse(cw.begin(), cw.end());
        for (std::size_t t = 0; t < cw.size(); ++t)
            next[cw[t]] = cw[(t + 1) % cw.size()];
    }
    // At rho the counterclockwise order is the contour order of the minimal
    // corners themselves.
    for (std::size_t t = 0; t < st.rho_corners.size(); ++t) {
        int a = static_cast<int>(2 * st.rho_corners[t] + 1);
        int b = static_cast<int>(2 * st.rho_corners[(t + 1) % st.rho_corners.size()] + 1);
        next[a] = b;
    }

    // The chord leaving the last root corner of tree k is the boundary edge
    // of the bridge step leaving the k-th down position; advancing the
    // external face orbit advances the bridge step by one. The root edge is
    // the boundary edge of step 0.
    std::vector<int> down = tb.bridge.down_positions();
    int steps = ((0 - down[0]) % (2 * p) + 2 * p) % (2 * p);
    int root = static_cast<int>(2 * cs.tree_last(0));
    for (int s = 0; s < steps; ++s) root = next[twin[root]];

    PhiOutput out;
    out.map = PlanarMap::build(std::move(twin), std::move(next), root);
    if (out.map.face_degree(out.map.root_face()) != 2 * p)
        throw Error("external face degree does not match the bridge length");

    // build() numbers vertices by half-edge scan order; rename them to the
    // advertised layout (tree arenas in slot order, rho last).
    std::vector<int> perm(V, -1);
    for (int v = 0; v < V - 1; ++v)
        perm[out.map.vertex_of(static_cast<int>(2 * vcorners[v].front()))] = v;
    perm[out.map.vertex_of(static_cast<int>(2 * st.rho_corners.front() + 1))] = rho;
    out.map = out.map.relabel_vertices(perm);

    out.point = rho;
    out.vertex_origin.assign(V, {-1, -1});
    out.labels.assign(V, 0);
    int min_label = cs.at(0).label;
    for (long i = 0; i < M; ++i) min_label = std::min(min_label, cs.at(i).label);
    for (long i = 0; i < M; ++i) {
        const Corner& c = cs.at(i);
        out.vertex_origin[off[c.tree] + c.node] = {c.tree, c.node};
        out.labels[off[c.tree] + c.node] = c.label;
    }
    out.labels[rho] = min_label - 1;
    return out;
}

std::vector<long> successor_chain(const CornerSequence& cs, long c) {
    if (c < 0 || c >= cs.size()) throw FormatError("corner index out of range");
    std::vector<long> succ = successors(cs);
    std::vector<long> chain;
    long cur = c;
    while (cur != -1) {
        chain.push_back(cur);
        cur = succ[cur];
        if (static_cast<long>(chain.size()) > cs.size())
            throw Error("successor chain failed to terminate");
    }
    return chain;
}

std::vector<int> simple_geodesic(const CornerSequence& cs, const TreedBridge& tb, long c) {
    std::vector<int> off_path;
    for (long i : successor_chain(cs, c)) {
        const Corner& cr = cs.at(i);
        off_path.push_back(phi_vertex_id(tb, cr.tree, cr.node));
    }
    off_path.push_back(phi_rho_id(tb));
    return off_path;
}

// ---------------------------------------------------------------------------
// Lazy resolution. Half-edges of the infinite map are named by their owning
// corner plus a side: {c, out} leaves the vertex of c, {c, in} leaves the
// vertex of succ(c). Rotations are resolved per vertex exactly as in the
// finite case; the landing chords of a sector are recovered by scanning
// backward until the first label <= the sector label (every corner in between
// with label + 1 lands here, nearest first).
// ---------------------------------------------------------------------------

namespace {

struct LazyArc {
    Pos corner;
    bool out;

    bool operator==(const LazyArc& o) const { return corner == o.corner && out == o.out; }
};

long long pos_key(const Pos& p) { return (static_cast<long long>(p.zone) << 48) | p.idx; }
long long vertex_key(int slot, int node) {
    return (static_cast<long long>(slot) << 32) | static_cast<unsigned>(node);
}

// Thrown while building a depth-limited candidate when a scan would need
// corners beyond the snapshot; never escapes to callers.
struct Unresolved {};

class Resolver {
public:
    explicit Resolver(LazyCornerSequence& cs) : cs_(cs) {}

    LazyCornerSequence& cs() { return cs_; }

    void set_limits(long a_limit, long b_limit) {
        a_limit_ = a_limit;
        b_limit_ = b_limit;
    }
    void clear_limits() { a_limit_ = b_limit_ = -1; }

    Corner corner(const Pos& p) {
        if (p.zone == 0) {
            if (a_limit_ >= 0 && p.idx >= a_limit_) throw Unresolved{};
        } else {
            if (b_limit_ >= 0 && p.idx >= b_limit_) throw Unresolved{};
        }
        return cs_.at(p);
    }

    Pos succ(const Pos& p) {
        long long key = pos_key(p);
        auto it = succ_.find(key);
        if (it != succ_.end()) return it->second;
        int target = corner(p).label - 1;
        Pos q = cs_.forward(p);
        while (corner(q).label != target) q = cs_.forward(q);
        succ_.emplace(key, q);
        return q;
    }

    std::pair<int, int> endpoint(const LazyArc& a) {
        Corner c = a.out ? corner(a.corner) : corner(succ(a.corner));
        return {c.tree, c.node};
    }

    const std::vector<LazyArc>& rotation(int slot, int node) {
        long long key = vertex_key(slot, node);
        auto it = rot_.find(key);
        if (it != rot_.end()) return it->second;
        std::vector<LazyArc> cw;
        for (const Pos& q : corners_of(slot, node)) {
            int lq = corner(q).label;
            Pos j = cs_.backward(q);
            while (true) {
                Corner cj = corner(j);
                if (cj.label <= lq) break;
                if (cj.label == lq + 1) cw.push_back({j, false});
                j = cs_.backward(j);
            }
            cw.push_back({q, true});
        }
        std::reverse(cw.begin(), cw.end());
        return rot_.emplace(key, std::move(cw)).first->second;
    }

    LazyArc phi(const LazyArc& a) {
        LazyArc t{a.corner, !a.out};
        std::pair<int, int> v = endpoint(t);
        const std::vector<LazyArc>& rot = rotation(v.first, v.second);
        for (std::size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == t) return rot[(i + 1) % rot.size()];
        throw Error("half-edge missing from its vertex rotation");
    }

private:
    // Corner positions of a vertex in contour order: zone A ascending, then
    // zone B by descending reversed index. A node's corners all materialize
    // when its spine level is consumed, so any indexed vertex is complete.
    std::vector<Pos> corners_of(int slot, int node) {
        sync();
        auto it = index_.find(vertex_key(slot, node));
        if (it == index_.end()) throw Error("vertex has no realized corners");
        const Lists& ls = it->second;
        std::vector<Pos> out;
        for (long i : ls.a) {
            if (a_limit_ >= 0 && i >= a_limit_) throw Unresolved{};
            out.push_back({0, i});
        }
        for (auto rit = ls.b.rbegin(); rit != ls.b.rend(); ++rit) {
            if (b_limit_ >= 0 && *rit >= b_limit_) throw Unresolved{};
            out.push_back({1, *rit});
        }
        return out;
    }

    void sync() {
        for (; synced_a_ < cs_.a_size(); ++synced_a_) {
            const Corner& c = cs_.a_at(synced_a_);
            index_[vertex_key(c.tree, c.node)].a.push_back(synced_a_);
        }
        for (; synced_b_ < cs_.b_size(); ++synced_b_) {
            const Corner& c = cs_.brev_at(synced_b_);
            index_[vertex_key(c.tree, c.node)].b.push_back(synced_b_);
        }
    }

    struct Lists {
        std::vector<long> a, b;
    };

    LazyCornerSequence& cs_;
    long a_limit_ = -1, b_limit_ = -1;
    long synced_a_ = 0, synced_b_ = 0;
    std::unordered_map<long long, Lists> index_;
    std::unordered_map<long long, Pos> succ_;
    std::unordered_map<long long, std::vector<LazyArc>> rot_;
};

// External-face orbit, one arc per bridge step, starting at the step that
// leaves the infinite slot's down position.
std::vector<LazyArc> external_orbit(Resolver& r, int p) {
    LazyArc h{r.cs().infinite_last(), true};
    std::vector<LazyArc> orbit;
    for (int s = 0; s < 2 * p; ++s) {
        orbit.push_back(h);
        h = r.phi(h);
    }
    if (!(h == orbit[0])) throw Error("external contour failed to close");
    return orbit;
}

} // namespace

BoundaryResolution phi_boundary(LazyTreedBridge& tb, long cap_corners) {
    LazyCornerSequence cs(tb, cap_corners);
    const int p = tb.tree_count();
    const int twop = 2 * p;

    // The external orbit needs no rotations: the arc at a down position is the
    // out-chord of that tree's last root corner, and the run of up positions
    // preceding a down position d carries the in-chords of the successor chain
    // of tree_first(slot(d)), one chord per step back.
    std::vector<int> down = tb.bridge.down_positions();
    std::vector<int> slot_of(twop, -1);
    for (int k = 0; k < p; ++k) slot_of[down[k]] = k;

    BoundaryResolution out;
    out.vertices.resize(twop);
    out.labels.resize(twop);
    out.owners.resize(twop);
    for (int k = 0; k < p; ++k) {
        const int d = down[k];
        out.vertices[d] = {k, 0};
        out.labels[d] = tb.bridge.value(d);
        out.owners[d] = k == tb.i0 ? cs.infinite_last() : cs.tree_last(k);
        Pos c = k == tb.i0 ? cs.infinite_first() : cs.tree_first(k);
        for (int j = 0;; ++j) {
            int s = ((d - 1 - j) % twop + twop) % twop;
            if (slot_of[s] >= 0) break; // the up run before d ended
            out.owners[s] = c;
            out.labels[s] = tb.bridge.value(s);
            c = successor(cs, c);
            const Corner& cc = cs.at(c);
            out.vertices[s] = {cc.tree, cc.node};
        }
    }
    out.simple = true;
    for (int s = 0; s < twop && out.simple; ++s)
        for (int t = s + 1; t < twop; ++t)
            if (out.vertices[s] == out.vertices[t]) {
                out.simple = false;
                break;
            }

    // The chord drawn nearest the spine's infinite end bounds the region
    // containing it, so its contour edge lies on the infinite component:
    // deepest zone-A owner if any, else deepest zone-B owner.
    long best = 0;
    for (int s = 1; s < 2 * p; ++s) {
        const Pos& o = out.owners[s];
        const Pos& b = out.owners[best];
        if ((o.zone == 0 && b.zone != 0) || (o.zone == b.zone && o.idx > b.idx)) best = s;
    }
    out.core_edge = best;
    return out;
}

ApertureBounds aperture_bounds(const LazyTreedBridge& tb) {
    const int p = tb.tree_count();
    ApertureBounds out;
    int lo = 0, hi = 0;
    for (int v : tb.bridge.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.delta_p = hi - lo;
    for (int k = 0; k < p; ++k) {
        if (k == tb.i0) continue;
        int disp = 0;
        for (int l : tb.finite[k].labels) disp = std::max(disp, std::abs(l));
        if (static_cast<long long>(disp) * disp > p) ++out.K;
    }
    int s = 0;
    while (static_cast<long long>(s) * s < p) ++s; // ceil(sqrt p)
    out.lower = out.delta_p;
    out.upper = static_cast<long long>(2 * out.K + 4) * (s + out.delta_p + 1);
    return out;
}

namespace {

struct Candidate {
    PlanarMap map;
    std::vector<long long> code;
};

// Candidate hull at a fixed realization snapshot: resolve the external orbit
// and every rotation within r+1 steps of the root origin using only corners
// below the snapshot limits, close the region off, and take the radius-r
// ball. Fails (nullopt) as soon as any scan would leave the snapshot.
std::optional<Candidate> try_candidate(Resolver& r, LazyTreedBridge& tb, int radius,
                                       long a_limit, long b_limit) {
    struct LimitGuard {
        Resolver& r;
        ~LimitGuard() { r.clear_limits(); }
    } guard{r};
    r.set_limits(a_limit, b_limit);
    const int p = tb.tree_count();
    try {
        std::vector<LazyArc> orbit = external_orbit(r, p);
        int dpos = tb.bridge.down_positions()[tb.i0];
        LazyArc root_arc = orbit[((0 - dpos) % (2 * p) + 2 * p) % (2 * p)];

        std::unordered_map<long long, int> dist;
        std::vector<std::pair<int, int>> order;
        std::deque<std::pair<int, int>> queue;
        std::pair<int, int> v0 = r.endpoint(root_arc);
        dist[vertex_key(v0.first, v0.second)] = 0;
        order.push_back(v0);
        queue.push_back(v0);
        while (!queue.empty()) {
            std::pair<int, int> v = queue.front();
            queue.pop_front();
            int dv = dist[vertex_key(v.first, v.second)];
            if (dv > radius + 1) continue;
            for (const LazyArc& a : r.rotation(v.first, v.second)) {
                std::pair<int, int> u = r.endpoint({a.corner, !a.out});
                long long uk = vertex_key(u.first, u.second);
                if (dist.count(uk)) continue;
                dist[uk] = dv + 1;
                if (dv + 1 <= radius + 1) order.push_back(u);
                queue.push_back(u);
            }
        }

        auto inside = [&](const std::pair<int, int>& v) {
            auto it = dist.find(vertex_key(v.first, v.second));
            return it != dist.end() && it->second <= radius + 1;
        };

        // Keep the chords with both endpoints inside; 2e is the out half.
        std::unordered_map<long long, int> edge_id;
        for (const std::pair<int, int>& v : order)
            for (const LazyArc& a : r.rotation(v.first, v.second)) {
                std::pair<int, int> u = r.endpoint({a.corner, !a.out});
                if (!inside(u)) continue;
                long long key = pos_key(a.corner);
                if (!edge_id.count(key))
                    edge_id.emplace(key, static_cast<int>(edge_id.size()));
            }
        auto arc_id = [&](const LazyArc& a) {
            return 2 * edge_id.at(pos_key(a.corner)) + (a.out ? 0 : 1);
        };

        const int H = static_cast<int>(2 * edge_id.size());
        std::vector<int> twin(H), next(H, -1);
        for (int e = 0; e < H / 2; ++e) {
            twin[2 * e] = 2 * e + 1;
            twin[2 * e + 1] = 2 * e;
        }
        std::vector<int> cycle;
        for (const std::pair<int, int>& v : order) {
            cycle.clear();
            for (const LazyArc& a : r.rotation(v.first, v.second)) {
                std::pair<int, int> u = r.endpoint({a.corner, !a.out});
                if (inside(u)) cycle.push_back(arc_id(a));
            }
            for (std::size_t t = 0; t < cycle.size(); ++t)
                next[cycle[t]] = cycle[(t + 1) % cycle.size()];
        }

        Candidate cand;
        cand.map = PlanarMap::build(std::move(twin), std::move(next), arc_id(root_arc));
        cand.code = canonical_code(ball(cand.map, radius));
        return cand;
    } catch (const Unresolved&) {
        return std::nullopt;
    }
}

} // namespace

HullOutput phi_hull(LazyTreedBridge& tb, int r, const HullPolicy& policy) {
    if (r < 0) throw FormatError("hull radius must be nonnegative");
    LazyCornerSequence cs(tb, policy.cap_corners);
    Resolver res(cs);
    int depth = std::max(policy.initial_depth, 1);
    std::optional<Candidate> prev;
    for (int round = 0; ; ++round) {
        cs.ensure_depth(depth);
        std::optional<Candidate> cur = try_candidate(res, tb, r, cs.a_size(), cs.b_size());
        if (prev && cur && prev->code == cur->code) {
            HullOutput out;
            out.partial_map = std::move(cur->map);
            out.ball_code = std::move(cur->code);
            out.radius = r;
            out.self_consistent = true;
            out.depth_used = depth;
            out.resolved_corners = cs.realized_corners();
            return out;
        }
        if (round >= policy.max_doublings)
            throw NotConvergedError("hull candidates kept changing under depth doubling");
        prev = std::move(cur);
        depth *= 2;
    }
}

std::string to_text(const PhiOutput& out) {
    std::ostringstream os;
    os << to_pmap(out.map);
    os << "LABELS";
    for (int l : out.labels) os << ' ' << l;
    os << '\n';
    os << "ORIGINS";
    for (const std::pair<int, int>& o : out.vertex_origin) os << ' ' << o.first << ' ' << o.second;
    os << '\n';
    os << "POINT " << out.point << '\n';
    return os.str();
}

PhiOutput phi_output_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line, pmap_part;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("LABELS", 0) == 0) {
            found = true;
            break;
        }
        pmap_part += line;
        pmap_part += '\n';
    }
    if (!found) throw FormatError("missing LABELS line");
    PhiOutput out;
    out.map = from_pmap(pmap_part);
    const int V = out.map.vertex_count();

    std::istringstream ls(line.substr(6));
    out.labels.resize(V);
    for (int i = 0; i < V; ++i)
        if (!(ls >> out.labels[i])) throw FormatError("bad label table");

    if (!std::getline(in, line) || line.rfind("ORIGINS", 0) != 0)
        throw FormatError("missing ORIGINS line");
    std::istringstream osrc(line.substr(7));
    out.vertex_origin.resize(V);
    for (int i = 0; i < V; ++i)
        if (!(osrc >> out.vertex_origin[i].first >> out.vertex_origin[i].second))
            throw FormatError("bad origin table");

    if (!std::getline(in, line) || line.rfind("POINT", 0) != 0)
        throw FormatError("missing POINT line");
    std::istringstream ps(line.substr(5));
    if (!(ps >> out.point) || out.point < 0 || out.point >= V)
        throw FormatError("bad point id");
    return out;
}

} // namespace qwb
