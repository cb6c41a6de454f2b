#include "qwb/treed_bridge.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "qwb/errors.hpp"
#include "qwb/exact_enum.hpp"

namespace qwb {

std::vector<int> Bridge::down_positions() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(values.size()); ++i)
        if (step(i) == -1) out.push_back(i);
    return out;
}

void Bridge::validate() const {
    if (values.empty() || values.size() % 2 != 0) throw FormatError("bridge length must be even");
    if (values[0] != 0) throw FormatError("bridge must start at 0");
    int down = 0;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) {
        int s = step(i);
        if (s != 1 && s != -1) throw FormatError("bridge steps must be +-1");
        if (s == -1) ++down;
    }
    if (down != half_length()) throw FormatError("bridge must have exactly p down-steps");
}

int TreedBridge::total_size() const {
    int n = 0;
    for (const auto& t : trees) n += t.tree.size();
    return n;
}

void TreedBridge::validate() const {
    bridge.validate();
    if (tree_count() != bridge.half_length())
        throw FormatError("treed bridge needs one tree per down-step");
    for (const auto& t : trees) t.validate();
}

namespace {

std::vector<int> bridge_shifts(const Bridge& b) {
    std::vector<int> shifts;
    for (int i : b.down_positions()) shifts.push_back(b.value(i));
    return shifts;
}

} // namespace

CornerSequence CornerSequence::build(const TreedBridge& tb) {
    tb.validate();
    CornerSequence cs;
    std::vector<int> shifts = bridge_shifts(tb.bridge);
    for (int k = 0; k < tb.tree_count(); ++k) {
        cs.first_.push_back(static_cast<long>(cs.corners_.size()));
        for (const TreeCorner& c : contour_corners(tb.trees[k]))
            cs.corners_.push_back({k, c.node, c.label + shifts[k]});
        cs.last_.push_back(static_cast<long>(cs.corners_.size()) - 1);
    }
    return cs;
}

CornerSequence corner_order(const TreedBridge& tb) { return CornerSequence::build(tb); }

LazyCornerSequence::LazyCornerSequence(LazyTreedBridge& tb, long cap_corners)
    : tb_(tb), cap_corners_(cap_corners) {
    shifts_ = bridge_shifts(tb_.bridge);
    int p = tb_.tree_count();
    finite_first_.assign(p, -1);
    finite_last_.assign(p, -1);
    // Zone B ends, cyclically, with the finite trees that follow the infinite
    // slot; the reversed store is therefore filled with the last tree first.
    for (int j = p - 1; j >= 1; --j) {
        int slot = (tb_.i0 + j) % p;
        std::vector<TreeCorner> block = contour_corners(tb_.finite[slot]);
        finite_last_[slot] = static_cast<long>(Brev_.size());
        for (auto it = block.rbegin(); it != block.rend(); ++it)
            Brev_.push_back({slot, it->node, it->label + shifts_[slot]});
        finite_first_[slot] = static_cast<long>(Brev_.size()) - 1;
    }
    consume_levels();
}

void LazyCornerSequence::consume_levels() {
    const PlaneTree& arena = tb_.spine.arena();
    const std::vector<int>& labels = tb_.spine.labels();
    int shift = shifts_[tb_.i0];
    while (consumed_levels_ < tb_.spine.realized_depth()) {
        const LazySpineTree::Level& lv = tb_.spine.level(consumed_levels_);
        // Left flank in contour order: a corner of the spine vertex before
        // each left subtree and one more before descending the spine.
        A_.push_back({tb_.i0, lv.node, labels[lv.node] + shift});
        for (int root : lv.left_roots) {
            for (const TreeCorner& c : subtree_contour(arena, labels, root))
                A_.push_back({tb_.i0, c.node, c.label + shift});
            A_.push_back({tb_.i0, lv.node, labels[lv.node] + shift});
        }
        // Right flank, reversed into the B store (deepest level last).
        std::vector<Corner> fwd;
        fwd.push_back({tb_.i0, lv.node, labels[lv.node] + shift});
        for (int root : lv.right_roots) {
            for (const TreeCorner& c : subtree_contour(arena, labels, root))
                fwd.push_back({tb_.i0, c.node, c.label + shift});
            fwd.push_back({tb_.i0, lv.node, labels[lv.node] + shift});
        }
        if (consumed_levels_ == 0) infinite_last_brev_ = static_cast<long>(Brev_.size());
        for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) Brev_.push_back(*it);
        ++consumed_levels_;
        if (realized_corners() > cap_corners_)
            throw ResourceCapError("corner sequence exceeded the corner cap");
    }
}

void LazyCornerSequence::ensure_depth(int depth) {
    tb_.spine.ensure_depth(depth);
    consume_levels();
}

void LazyCornerSequence::ensure_A(long idx) {
    while (static_cast<long>(A_.size()) <= idx) {
        tb_.spine.extend();
        consume_levels();
    }
}

void LazyCornerSequence::ensure_B(long idx) {
    while (static_cast<long>(Brev_.size()) <= idx) {
        tb_.spine.extend();
        consume_levels();
    }
}

Corner LazyCornerSequence::at(const Pos& p) {
    if (p.zone == 0) {
        ensure_A(p.idx);
        return A_[p.idx];
    }
    ensure_B(p.idx);
    return Brev_[p.idx];
}

LazyCornerSequence::Pos LazyCornerSequence::forward(const Pos& p) {
    if (p.zone == 1) return p.idx == 0 ? Pos{0, 0} : Pos{1, p.idx - 1};
    return Pos{0, p.idx + 1};
}

LazyCornerSequence::Pos LazyCornerSequence::backward(const Pos& p) {
    if (p.zone == 0) return p.idx == 0 ? Pos{1, 0} : Pos{0, p.idx - 1};
    return Pos{1, p.idx + 1};
}

LazyCornerSequence::Pos LazyCornerSequence::infinite_first() { return Pos{0, 0}; }

LazyCornerSequence::Pos LazyCornerSequence::infinite_last() {
    if (infinite_last_brev_ < 0) {
        tb_.spine.ensure_depth(1);
        consume_levels();
    }
    return Pos{1, infinite_last_brev_};
}

LazyCornerSequence::Pos LazyCornerSequence::tree_first(int k) {
    if (k == tb_.i0) throw FormatError("tree_first: use infinite_first for the infinite slot");
    return Pos{1, finite_first_[k]};
}

LazyCornerSequence::Pos LazyCornerSequence::tree_last(int k) {
    if (k == tb_.i0) throw FormatError("tree_last: use infinite_last for the infinite slot");
    return Pos{1, finite_last_[k]};
}

LazyCornerSequence::Pos LazyCornerSequence::find_forward(Pos p, int label) {
    while (true) {
        if (at(p).label == label) return p;
        p = forward(p);
    }
}

Bridge sample_bridge(int p, RandomSource& rng) {
    if (p < 1) throw FormatError("bridges need p >= 1");
    std::vector<int> inc(2 * p, -1);
    for (int i = 0; i < p; ++i) inc[i] = 1;
    for (int i = 2 * p - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(inc[i], inc[j]);
    }
    Bridge b;
    b.values.resize(2 * p);
    b.values[0] = 0;
    for (int i = 1; i < 2 * p; ++i) b.values[i] = b.values[i - 1] + inc[i - 1];
    return b;
}

TreedBridge sample_uniform_treed_bridge(int n, int p, RandomSource& rng) {
    TreedBridge tb;
    tb.bridge = sample_bridge(p, rng);
    std::vector<PlaneTree> forest = sample_uniform_forest(n, p, rng);
    tb.trees.reserve(p);
    for (auto& t : forest) tb.trees.push_back(uniform_labeling(t, rng));
    return tb;
}

LazyTreedBridge sample_infinite_treed_bridge(int p, RandomSource& rng, std::int64_t cap_nodes,
                                             int cap_depth) {
    Bridge b = sample_bridge(p, rng);
    int i0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
    std::vector<LabeledTree> finite(p);
    for (int k = 0; k < p; ++k) {
        if (k == i0) continue;
        finite[k] = uniform_labeling(sample_gw_tree(rng, cap_nodes), rng);
    }
    LazySpineTree spine(RandomSource::stream(rng.next_u64(), 0), cap_nodes, cap_depth);
    return LazyTreedBridge(std::move(b), i0, std::move(finite), std::move(spine));
}

namespace {

void compositions(int n, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        cur.push_back(n);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int k = 0; k <= n; ++k) {
        cur.push_back(k);
        compositions(n - k, parts - 1, cur, emit);
        cur.pop_back();
    }
}

} // namespace

std::vector<TreedBridge> enumerate_treed_bridges(int n, int p) {
    if (n < 0 || p < 1) throw FormatError("enumeration needs n >= 0, p >= 1");
    Int guard = binomial(Int(2 * p), static_cast<unsigned long>(p)) * ipow(Int(3), n) * cat(n, p);
    if (guard > 10000000) throw TooLargeError("treed bridge enumeration guard exceeded");

    std::vector<Bridge> bridges;
    std::vector<int> inc(2 * p);
    for (int i = 0; i < 2 * p; ++i) inc[i] = i < p ? -1 : 1;
    do {
        Bridge b;
        b.values.resize(2 * p);
        b.values[0] = 0;
        for (int i = 1; i < 2 * p; ++i) b.values[i] = b.values[i - 1] + inc[i - 1];
        bridges.push_back(b);
    } while (std::next_permutation(inc.begin(), inc.end()));

    // All shape forests: a composition of n over the p slots, then every
    // shape tuple for that composition.
    std::vector<std::vector<PlaneTree>> forests;
    std::vector<int> cur;
    compositions(n, p, cur, [&](const std::vector<int>& parts) {
        std::vector<std::vector<PlaneTree>> per_slot;
        for (int e : parts) per_slot.push_back(enumerate_plane_trees(e));
        std::vector<int> pick(p, 0);
        while (true) {
            std::vector<PlaneTree> forest;
            for (int k = 0; k < p; ++k) forest.push_back(per_slot[k][pick[k]]);
            forests.push_back(std::move(forest));
            int k = p - 1;
            while (k >= 0 && ++pick[k] == static_cast<int>(per_slot[k].size())) pick[k--] = 0;
            if (k < 0) break;
        }
    });

    std::vector<TreedBridge> out;
    for (const Bridge& b : bridges) {
        for (const auto& forest : forests) {
            long edges = 0;
            for (const auto& t : forest) edges += t.size();
            long combos = 1;
            for (long e = 0; e < edges; ++e) combos *= 3;
            for (long code = 0; code < combos; ++code) {
                TreedBridge tb;
                tb.bridge = b;
                long c = code;
                for (const auto& shape : forest) {
                    LabeledTree lt;
                    lt.tree = shape;
                    lt.labels.assign(shape.nodes.size(), 0);
                    for (int v = 1; v < shape.node_count(); ++v) {
                        int d = static_cast<int>(c % 3) - 1;
                        c /= 3;
                        lt.labels[v] = lt.labels[shape.nodes[v].parent] + d;
                    }
                    tb.trees.push_back(std::move(lt));
                }
                out.push_back(std::move(tb));
            }
        }
    }
    return out;
}

BridgeDistance bridge_distance(const TreedBridge& a, const TreedBridge& b, int h_cap) {
    if (!(a.bridge == b.bridge)) return {Rat(1), false};
    Rat best = 0;
    for (int k = 0; k < a.tree_count(); ++k) {
        TreeDistance d = tree_distance(a.trees[k], b.trees[k], h_cap);
        if (d.value > best) best = d.value;
    }
    return {best, best == Rat(1, 1 + h_cap)};
}

std::string to_text(const TreedBridge& tb) {
    tb.validate();
    std::ostringstream os;
    os << "TB " << tb.tree_count() << ' ';
    for (int i = 0; i < 2 * tb.tree_count(); ++i) os << (tb.bridge.step(i) > 0 ? '+' : '-');
    for (const auto& t : tb.trees) os << '\n' << to_text(t);
    return os.str();
}

TreedBridge treed_bridge_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw FormatError("empty treed bridge record");
    std::istringstream hs(header);
    std::string tag, steps;
    int p = 0;
    if (!(hs >> tag >> p >> steps) || tag != "TB" || p < 1)
        throw FormatError("bad treed bridge header");
    if (static_cast<int>(steps.size()) != 2 * p) throw FormatError("step word length mismatch");
    TreedBridge tb;
    tb.bridge.values.resize(2 * p);
    tb.bridge.values[0] = 0;
    for (int i = 1; i < 2 * p; ++i) {
        char c = steps[i - 1];
        if (c != '+' && c != '-') throw FormatError("bad step character");
        tb.bridge.values[i] = tb.bridge.values[i - 1] + (c == '+' ? 1 : -1);
    }
    char closing = steps[2 * p - 1];
    if (closing != '+' && closing != '-') throw FormatError("bad step character");
    if (tb.bridge.values[2 * p - 1] + (closing == '+' ? 1 : -1) != 0)
        throw FormatError("step word does not close the bridge");
    for (int k = 0; k < p; ++k) {
        std::string line;
        if (!std::getline(is, line)) throw FormatError("missing tree record");
        tb.trees.push_back(labeled_tree_from_text(line));
    }
    std::string extra;
    if (std::getline(is, extra) && !extra.empty()) throw FormatError("trailing data");
    tb.validate();
    return tb;
}

} // namespace qwb
