#include "qwb/planar_map.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "qwb/errors.hpp"

namespace qwb {

PlanarMap PlanarMap::vertex_map() { return PlanarMap(); }

PlanarMap PlanarMap::build(std::vector<int> twin, std::vector<int> next, int root) {
    const int h = static_cast<int>(twin.size());
    if (twin.size() != next.size()) throw FormatError("build: twin/next size mismatch");
    if (h == 0) {
        if (root != -1) throw FormatError("build: root on empty map");
        return PlanarMap();
    }
    if (h % 2 != 0) throw NotInvolutionError("build: odd number of half-edges");
    if (root < 0 || root >= h) throw FormatError("build: root out of range");

    for (int i = 0; i < h; ++i) {
        int t = twin[i];
        if (t < 0 || t >= h) throw NotInvolutionError("build: twin out of range");
        if (t == i) throw NotInvolutionError("build: twin has a fixed point");
        if (twin[t] != i) throw NotInvolutionError("build: twin not an involution");
    }
    {
        std::vector<char> seen(h, 0);
        for (int i = 0; i < h; ++i) {
            int n = next[i];
            if (n < 0 || n >= h) throw NotPermutationError("build: next out of range");
            if (seen[n]) throw NotPermutationError("build: next not injective");
            seen[n] = 1;
        }
    }

    PlanarMap m;
    m.twin_ = std::move(twin);
    m.next_ = std::move(next);
    m.root_ = root;
    m.derive();
    return m;
}

void PlanarMap::derive() {
    const int h = half_edge_count();
    prev_.assign(h, -1);
    for (int i = 0; i < h; ++i) prev_[next_[i]] = i;

    // Connectivity over {twin, next}.
    {
        std::vector<char> vis(h, 0);
        std::vector<int> stack = {root_};
        vis[root_] = 1;
        int count = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : {twin_[x], next_[x]}) {
                if (!vis[y]) {
                    vis[y] = 1;
                    ++count;
                    stack.push_back(y);
                }
            }
        }
        if (count != h) throw DisconnectedError("build: map is not connected");
    }

    vertex_of_.assign(h, -1);
    vertex_rep_.clear();
    for (int i = 0; i < h; ++i) {
        if (vertex_of_[i] >= 0) continue;
        int id = static_cast<int>(vertex_rep_.size());
        vertex_rep_.push_back(i);
        for (int x = i; vertex_of_[x] < 0; x = next_[x]) vertex_of_[x] = id;
    }
    vertex_count_ = static_cast<int>(vertex_rep_.size());

    face_of_.assign(h, -1);
    face_degree_.clear();
    for (int i = 0; i < h; ++i) {
        if (face_of_[i] >= 0) continue;
        int id = static_cast<int>(face_degree_.size());
        int deg = 0;
        for (int x = i; face_of_[x] < 0; x = next_[twin_[x]]) {
            face_of_[x] = id;
            ++deg;
        }
        face_degree_.push_back(deg);
    }
    face_count_ = static_cast<int>(face_degree_.size());

    long long euler = static_cast<long long>(vertex_count_) - h / 2 + face_count_;
    if (euler != 2) throw NonPlanarError("build: Euler characteristic is not 2");
}

PlanarMap PlanarMap::relabel_vertices(const std::vector<int>& perm) const {
    const int n = vertex_count_;
    if (static_cast<int>(perm.size()) != n)
        throw FormatError("relabel_vertices: permutation has the wrong length");
    std::vector<char> seen(n, 0);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[v])
            throw FormatError("relabel_vertices: not a permutation");
        seen[v] = 1;
    }
    PlanarMap out = *this;
    for (int h = 0; h < half_edge_count(); ++h) out.vertex_of_[h] = perm[vertex_of_[h]];
    for (int v = 0; v < n; ++v) out.vertex_rep_[perm[v]] = vertex_rep_[v];
    return out;
}

std::vector<int> PlanarMap::face_cycle(int h) const {
    std::vector<int> out;
    int x = h;
    do {
        out.push_back(x);
        x = phi(x);
    } while (x != h);
    return out;
}

std::vector<int> PlanarMap::vertex_cycle(int h) const {
    std::vector<int> out;
    int x = h;
    do {
        out.push_back(x);
        x = next_[x];
    } while (x != h);
    return out;
}

MapClass classify(const PlanarMap& m) {
    MapClass c;
    if (m.is_vertex_map()) {
        c.is_quadrangulation_with_boundary = true;
        c.simple_boundary = true;
        return c;
    }
    int rf = m.root_face();
    c.perimeter = m.face_degree(rf);
    c.size = m.face_count() - 1;
    c.is_quadrangulation_with_boundary = true;
    for (int f = 0; f < m.face_count(); ++f) {
        if (f != rf && m.face_degree(f) != 4) {
            c.is_quadrangulation_with_boundary = false;
            break;
        }
    }
    BoundaryWalk w = boundary_walk(m);
    c.simple_boundary = w.simple;
    return c;
}

std::vector<int> distances_from(const PlanarMap& m, int vertex) {
    if (vertex < 0 || vertex >= m.vertex_count()) throw UnknownVertexError("distances_from: bad vertex");
    std::vector<int> dist(m.vertex_count(), -1);
    dist[vertex] = 0;
    std::queue<int> q;
    q.push(vertex);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (m.is_vertex_map()) break;
        int h0 = m.some_out_edge(v);
        int x = h0;
        do {
            int u = m.head_of(x);
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                q.push(u);
            }
            x = m.next(x);
        } while (x != h0);
    }
    return dist;
}

BoundaryWalk boundary_walk(const PlanarMap& m) {
    BoundaryWalk w;
    if (m.is_vertex_map()) {
        w.vertices = {0};
        w.simple = true;
        return w;
    }
    w.half_edges = m.face_cycle(m.root());
    w.vertices.reserve(w.half_edges.size());
    for (int h : w.half_edges) w.vertices.push_back(m.vertex_of(h));
    std::vector<int> sorted = w.vertices;
    std::sort(sorted.begin(), sorted.end());
    w.simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    return w;
}

int aperture(const PlanarMap& m) {
    if (m.is_vertex_map()) return 0;
    BoundaryWalk w = boundary_walk(m);
    std::vector<int> verts = w.vertices;
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    int best = 0;
    for (int v : verts) {
        std::vector<int> d = distances_from(m, v);
        for (int u : verts) best = std::max(best, d[u]);
    }
    return best;
}

PlanarMap ball(const PlanarMap& m, int r) {
    if (m.is_vertex_map() || r <= 0) return PlanarMap::vertex_map();
    const int h = m.half_edge_count();
    std::vector<int> dist = distances_from(m, m.root_origin());

    std::vector<char> face_keep(m.face_count(), 1);
    for (int i = 0; i < h; ++i)
        if (dist[m.vertex_of(i)] > r) face_keep[m.face_of(i)] = 0;

    std::vector<char> keep(h, 0);
    bool any = false;
    for (int i = 0; i < h; ++i) {
        keep[i] = face_keep[m.face_of(i)] || face_keep[m.face_of(m.twin(i))];
        any = any || keep[i];
    }
    if (!any || !keep[m.root()]) return PlanarMap::vertex_map();

    // Component of the root inside the kept submap, with next restricted by
    // skipping dropped half-edges around each vertex.
    auto next_kept = [&](int x) {
        int y = m.next(x);
        while (!keep[y]) y = m.next(y);
        return y;
    };
    std::vector<int> id(h, -1), order;
    id[m.root()] = 0;
    order.push_back(m.root());
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int x = order[qi];
        for (int y : {m.twin(x), next_kept(x)}) {
            if (id[y] < 0) {
                id[y] = static_cast<int>(order.size());
                order.push_back(y);
            }
        }
    }
    int nh = static_cast<int>(order.size());
    std::vector<int> twin(nh), next(nh);
    for (int k = 0; k < nh; ++k) {
        twin[k] = id[m.twin(order[k])];
        next[k] = id[next_kept(order[k])];
    }
    return PlanarMap::build(std::move(twin), std::move(next), 0);
}

std::vector<long long> canonical_code(const PlanarMap& m) {
    if (m.is_vertex_map()) return {0};
    const int h = m.half_edge_count();
    std::vector<int> id(h, -1), order;
    id[m.root()] = 0;
    order.push_back(m.root());
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int x = order[qi];
        for (int y : {m.next(x), m.twin(x)}) {
            if (id[y] < 0) {
                id[y] = static_cast<int>(order.size());
                order.push_back(y);
            }
        }
    }
    std::vector<long long> code;
    code.reserve(2 * h + 1);
    code.push_back(h);
    for (int k = 0; k < h; ++k) {
        code.push_back(id[m.next(order[k])]);
        code.push_back(id[m.twin(order[k])]);
    }
    return code;
}

std::vector<long long> canonical_code_pointed(const PlanarMap& m, int point_vertex) {
    if (point_vertex < 0 || point_vertex >= m.vertex_count())
        throw UnknownVertexError("canonical_code_pointed: bad vertex");
    if (m.is_vertex_map()) return {0, 0};
    const int h = m.half_edge_count();
    std::vector<int> id(h, -1), order;
    id[m.root()] = 0;
    order.push_back(m.root());
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int x = order[qi];
        for (int y : {m.next(x), m.twin(x)}) {
            if (id[y] < 0) {
                id[y] = static_cast<int>(order.size());
                order.push_back(y);
            }
        }
    }
    std::vector<long long> code = canonical_code(m);
    long long point_id = -1;
    for (int k = 0; k < h; ++k) {
        if (m.vertex_of(order[k]) == point_vertex) {
            point_id = k;
            break;
        }
    }
    code.push_back(point_id);
    return code;
}

LocalDistance local_distance(const PlanarMap& a, const PlanarMap& b, int r_cap) {
    int s = 0;
    while (s < r_cap) {
        if (canonical_code(ball(a, s + 1)) != canonical_code(ball(b, s + 1))) break;
        ++s;
    }
    LocalDistance d;
    d.value = Rat(1, 1 + s);
    d.at_cap = (s == r_cap);
    return d;
}

PlanarMap submap(const PlanarMap& m, const std::vector<char>& keep_edge, int root_h) {
    if (root_h < 0 || root_h >= m.half_edge_count() || !keep_edge[root_h / 2])
        throw Error("submap: root must be a kept half-edge");
    std::vector<int> new_id(m.half_edge_count(), -1);
    int next_free = 0;
    for (int e = 0; e < m.edge_count(); ++e)
        if (keep_edge[e]) {
            new_id[2 * e] = next_free++;
            new_id[2 * e + 1] = next_free++;
        }
    std::vector<int> twin(next_free), nxt(next_free);
    for (int h = 0; h < m.half_edge_count(); ++h) {
        if (new_id[h] < 0) continue;
        twin[new_id[h]] = new_id[m.twin(h)];
        int j = m.next(h);
        while (!keep_edge[j / 2]) j = m.next(j);
        nxt[new_id[h]] = new_id[j];
    }
    return PlanarMap::build(std::move(twin), std::move(nxt), new_id[root_h]);
}

std::string to_pmap(const PlanarMap& m) {
    std::ostringstream os;
    os << "PMAP v1 " << m.half_edge_count() << " " << m.root() << "\n";
    for (int i = 0; i < m.half_edge_count(); ++i)
        os << i << " " << m.twin(i) << " " << m.next(i) << "\n";
    return os.str();
}

PlanarMap from_pmap(const std::string& text) {
    std::istringstream is(text);
    std::string tag, ver;
    int h = 0, root = 0;
    if (!(is >> tag >> ver >> h >> root) || tag != "PMAP" || ver != "v1")
        throw FormatError("from_pmap: bad header");
    if (h < 0) throw FormatError("from_pmap: negative size");
    std::vector<int> twin(h), next(h);
    for (int k = 0; k < h; ++k) {
        int id, t, n;
        if (!(is >> id >> t >> n) || id != k) throw FormatError("from_pmap: bad record");
        twin[k] = t;
        next[k] = n;
    }
    return PlanarMap::build(std::move(twin), std::move(next), root);
}

} // namespace qwb
