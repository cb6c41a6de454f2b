#include "qwb/pruning.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "qwb/errors.hpp"

namespace qwb {

namespace {

struct Dsu {
    std::vector<int> up;
    explicit Dsu(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void unite(int a, int b) { up[find(a)] = find(b); }
};

// Component id per edge: internal faces sharing an edge are merged, a
// boundary edge joins its internal side, and an edge with the external face
// on both sides is a piece of its own.
struct Pieces {
    std::vector<int> comp_of_edge;
    std::vector<long long> size;  // internal faces per component id
    int count = 0;
};

Pieces split_pieces(const PlanarMap& m) {
    const int ext = m.root_face();
    Dsu dsu(m.face_count());
    for (int e = 0; e < m.edge_count(); ++e) {
        int f1 = m.face_of(2 * e), f2 = m.face_of(2 * e + 1);
        if (f1 != ext && f2 != ext) dsu.unite(f1, f2);
    }
    Pieces p;
    p.comp_of_edge.assign(m.edge_count(), -1);
    std::map<int, int> id_of_class;
    for (int e = 0; e < m.edge_count(); ++e) {
        int f1 = m.face_of(2 * e), f2 = m.face_of(2 * e + 1);
        int in = f1 != ext ? f1 : f2;
        if (in == ext) {
            p.comp_of_edge[e] = p.count++;  // bare bridge edge
            p.size.push_back(0);
        } else {
            int c = dsu.find(in);
            auto it = id_of_class.find(c);
            if (it == id_of_class.end()) {
                it = id_of_class.emplace(c, p.count++).first;
                p.size.push_back(0);
            }
            p.comp_of_edge[e] = it->second;
        }
    }
    for (int f = 0; f < m.face_count(); ++f)
        if (f != ext) p.size[id_of_class.at(dsu.find(f))] += 1;
    return p;
}

}  // namespace

std::vector<IrreducibleComponent> irreducible_components(const PlanarMap& m) {
    std::vector<IrreducibleComponent> out;
    if (m.is_vertex_map()) return out;
    Pieces pieces = split_pieces(m);
    BoundaryWalk bw = boundary_walk(m);
    const int len = static_cast<int>(bw.half_edges.size());
    std::vector<int> first_pos(pieces.count, -1);
    std::vector<int> order;
    for (int t = 0; t < len; ++t) {
        int c = pieces.comp_of_edge[bw.half_edges[t] / 2];
        if (first_pos[c] < 0) {
            first_pos[c] = t;
            order.push_back(c);
        }
    }
    for (int c : order) {
        IrreducibleComponent ic;
        int h = bw.half_edges[first_pos[c]];
        std::vector<char> keep(m.edge_count(), 0);
        for (int e = 0; e < m.edge_count(); ++e) keep[e] = pieces.comp_of_edge[e] == c;
        ic.map = submap(m, keep, h);
        ic.attachment = m.vertex_of(h);
        ic.size = pieces.size[c];
        out.push_back(std::move(ic));
    }
    return out;
}

PruneResult prune(const PlanarMap& m) {
    PruneResult res;
    res.core = PlanarMap::vertex_map();
    res.R = 0;
    if (m.is_vertex_map()) return res;

    Pieces pieces = split_pieces(m);
    long long best = *std::max_element(pieces.size.begin(), pieces.size.end());
    int winners = 0, core_comp = -1;
    for (int c = 0; c < pieces.count; ++c)
        if (pieces.size[c] == best) {
            ++winners;
            core_comp = c;
        }
    if (winners != 1) return res;  // tie: nothing to prune around

    BoundaryWalk bw = boundary_walk(m);
    const int len = static_cast<int>(bw.half_edges.size());
    auto comp_at = [&](int t) { return pieces.comp_of_edge[bw.half_edges[t] / 2]; };

    std::vector<int> core_pos;
    for (int t = 0; t < len; ++t)
        if (comp_at(t) == core_comp) core_pos.push_back(t);
    const int twoq = static_cast<int>(core_pos.size());

    // Core root: the original root edge when it lies on the core, otherwise
    // the last core edge walked before the stretch containing position 0.
    int k1_idx = 0;
    if (comp_at(0) != core_comp) k1_idx = twoq - 1;  // core_pos.back() precedes pos 0 cyclically

    std::vector<char> keep(m.edge_count(), 0);
    for (int e = 0; e < m.edge_count(); ++e) keep[e] = pieces.comp_of_edge[e] == core_comp;
    res.core = submap(m, keep, bw.half_edges[core_pos[k1_idx]]);
    MapClass core_cl = classify(res.core);
    if (!core_cl.simple_boundary) throw Error("prune: core contour is not simple");

    // Each non-core piece lives inside exactly one stretch between
    // consecutive core edges; index stretches by the core edge they follow.
    std::vector<int> gap_of_comp(pieces.count, -1);
    std::vector<std::vector<int>> gap_pos(twoq);
    for (int g = 0; g < twoq; ++g) {
        int from = core_pos[(k1_idx + g) % twoq];
        int to = core_pos[(k1_idx + g + 1) % twoq];
        for (int t = (from + 1) % len; t != to; t = (t + 1) % len) {
            gap_pos[g].push_back(t);
            int c = comp_at(t);
            if (gap_of_comp[c] >= 0 && gap_of_comp[c] != g)
                throw Error("prune: piece spans two core corners");
            gap_of_comp[c] = g;
        }
    }

    for (int g = 0; g < twoq; ++g) {
        if (gap_pos[g].empty()) {
            res.parts.push_back(PlanarMap::vertex_map());
            continue;
        }
        std::vector<char> part_keep(m.edge_count(), 0);
        for (int e = 0; e < m.edge_count(); ++e)
            part_keep[e] = pieces.comp_of_edge[e] != core_comp && gap_of_comp[pieces.comp_of_edge[e]] == g;
        res.parts.push_back(submap(m, part_keep, bw.half_edges[gap_pos[g].back()]));
    }

    if (comp_at(0) == core_comp) {
        res.R = static_cast<long long>(gap_pos[0].size()) + 1;
    } else {
        // Root sits inside parts[0]; R is its 1-based slot in the part's
        // contour walk, which starts at the stretch's last edge.
        const auto& gp = gap_pos[0];
        long long L = static_cast<long long>(gp.size());
        long long j = std::find(gp.begin(), gp.end(), 0) - gp.begin() + 1;
        res.R = (j % L) + 1;
    }
    return res;
}

PlanarMap reassemble(const PruneResult& r) {
    if (r.R < 1) throw InvalidLocatorError("reassemble: root locator must be at least 1");
    if (r.core.is_vertex_map()) throw InvalidLocatorError("reassemble: core is the vertex map");
    MapClass cl = classify(r.core);
    if (static_cast<int>(r.parts.size()) != cl.perimeter)
        throw PerimeterMismatchError("reassemble: need one part per core contour edge");
    const int twoq = cl.perimeter;

    long long L1 = r.parts.empty() || r.parts[0].is_vertex_map()
                       ? 0
                       : classify(r.parts[0]).perimeter;
    if (r.R > L1 + 1) throw InvalidLocatorError("reassemble: root locator out of range");

    int total = r.core.half_edge_count();
    std::vector<int> offset(r.parts.size(), 0);
    for (std::size_t i = 0; i < r.parts.size(); ++i) {
        offset[i] = total;
        total += r.parts[i].half_edge_count();
    }
    std::vector<int> twin(total), nxt(total);
    for (int h = 0; h < r.core.half_edge_count(); ++h) {
        twin[h] = r.core.twin(h);
        nxt[h] = r.core.next(h);
    }
    for (std::size_t i = 0; i < r.parts.size(); ++i)
        for (int h = 0; h < r.parts[i].half_edge_count(); ++h) {
            twin[offset[i] + h] = offset[i] + r.parts[i].twin(h);
            nxt[offset[i] + h] = offset[i] + r.parts[i].next(h);
        }

    // Splice each part into the corner behind its core edge: the contour
    // must run core edge i, the part's walk, then core edge i+1.
    BoundaryWalk kb = boundary_walk(r.core);
    int root = kb.half_edges[0];
    for (int i = 0; i < twoq; ++i) {
        const PlanarMap& part = r.parts[i];
        if (part.is_vertex_map()) continue;
        BoundaryWalk pb = boundary_walk(part);
        int part_root = offset[i] + pb.half_edges[0];
        int part_second = offset[i] + pb.half_edges[1 % pb.half_edges.size()];
        int k_i = kb.half_edges[i];
        int k_next = kb.half_edges[(i + 1) % twoq];
        nxt[r.core.twin(k_i)] = part_second;
        nxt[twin[part_root]] = k_next;
        if (i == 0 && r.R <= L1) root = offset[0] + pb.half_edges[r.R - 1];
    }
    return PlanarMap::build(std::move(twin), std::move(nxt), root);
}

ZipResult zip_boundary(const PlanarMap& m) {
    MapClass cl = classify(m);
    if (cl.perimeter == 0) throw NotSimpleError("zip: map has no boundary");
    if (!cl.simple_boundary) throw NotSimpleError("zip: boundary is pinched");
    BoundaryWalk bw = boundary_walk(m);
    const int twop = static_cast<int>(bw.half_edges.size());
    const int p = twop / 2;

    ZipResult out;
    if (m.edge_count() == 1) {  // lone edge: folding glues it onto itself
        out.map = m;
        out.saw_half_edges = {m.root()};
        out.saw_vertices = {m.root_origin(), m.head_of(m.root())};
        return out;
    }

    std::vector<int> pos(m.half_edge_count(), -1);
    for (int t = 0; t < twop; ++t) pos[bw.half_edges[t]] = t;

    std::vector<int> twin(m.half_edge_count()), nxt(m.half_edge_count());
    for (int h = 0; h < m.half_edge_count(); ++h) {
        twin[h] = m.twin(h);
        nxt[h] = m.next(h);
    }
    // Glue contour edge t to contour edge 2p-1-t: both external halves drop
    // and the two internal halves become each other's twin.
    for (int t = 0; t < p; ++t) {
        int a = m.twin(bw.half_edges[t]);
        int b = m.twin(bw.half_edges[twop - 1 - t]);
        twin[a] = b;
        twin[b] = a;
    }
    std::vector<int> new_id(m.half_edge_count(), -1);
    int free_id = 0;
    for (int h = 0; h < m.half_edge_count(); ++h)
        if (pos[h] < 0) new_id[h] = free_id++;

    std::vector<int> twin2(free_id), nxt2(free_id);
    for (int h = 0; h < m.half_edge_count(); ++h) {
        if (new_id[h] < 0) continue;
        twin2[new_id[h]] = new_id[twin[h]];
        int j = m.next(h);
        // Rotations of the two vertices folded together merge where the
        // dropped external halves used to sit.
        while (pos[j] >= 0) j = m.next(bw.half_edges[(twop - pos[j]) % twop]);
        nxt2[new_id[h]] = new_id[j];
    }
    int root2 = new_id[m.twin(bw.half_edges[twop - 1])];
    out.map = PlanarMap::build(std::move(twin2), std::move(nxt2), root2);
    for (int i = 0; i < p; ++i)
        out.saw_half_edges.push_back(new_id[m.twin(bw.half_edges[twop - 1 - i])]);
    out.saw_vertices.push_back(out.map.vertex_of(out.saw_half_edges[0]));
    for (int i = 0; i < p; ++i)
        out.saw_vertices.push_back(out.map.head_of(out.saw_half_edges[i]));
    return out;
}

PlanarMap unzip(const PlanarMap& m, const std::vector<int>& saw) {
    const int p = static_cast<int>(saw.size());
    if (p < 1) throw FormatError("unzip: empty seam");
    for (int i = 0; i < p; ++i) {
        if (saw[i] < 0 || saw[i] >= m.half_edge_count())
            throw FormatError("unzip: seam half-edge out of range");
        if (i + 1 < p && m.head_of(saw[i]) != m.vertex_of(saw[i + 1]))
            throw FormatError("unzip: seam is not a path");
    }
    if (p == 1 && m.edge_count() == 1) return m;  // lone edge folded onto itself

    const int H = m.half_edge_count();
    std::vector<int> twin(H + 2 * p), nxt(H + 2 * p);
    for (int h = 0; h < H; ++h) {
        twin[h] = m.twin(h);
        nxt[h] = m.next(h);
    }
    auto X = [&](int i) { return H + i; };          // new external half at contour slot i
    auto Y = [&](int j) { return H + p + j; };      // new external half at slot 2p-1-j
    std::vector<int> t(p);
    for (int i = 0; i < p; ++i) t[i] = m.twin(saw[i]);

    for (int i = 0; i < p; ++i) {
        twin[X(i)] = t[i];
        twin[t[i]] = X(i);
        twin[Y(i)] = saw[i];
        twin[saw[i]] = Y(i);
    }
    // Split each interior seam vertex back into its two boundary copies; the
    // cut runs between the two seam arcs in the merged rotation.
    nxt[saw[0]] = X(0);
    nxt[X(0)] = m.next(saw[0]);
    for (int i = 1; i < p; ++i) {
        nxt[t[i - 1]] = X(i);
        nxt[X(i)] = m.next(saw[i]);
        nxt[saw[i]] = Y(i - 1);
        nxt[Y(i - 1)] = m.next(t[i - 1]);
    }
    nxt[t[p - 1]] = Y(p - 1);
    nxt[Y(p - 1)] = m.next(t[p - 1]);
    return PlanarMap::build(std::move(twin), std::move(nxt), X(0));
}

std::string prune_manifest(const PruneResult& r, const std::string& core_path,
                           const std::vector<std::string>& part_paths) {
    nlohmann::json j;
    j["core"] = core_path;
    j["parts"] = part_paths;
    j["root_locator"] = r.R;
    j["core_perimeter"] = r.core.is_vertex_map() ? 0 : classify(r.core).perimeter;
    return j.dump(2);
}

}  // namespace qwb
