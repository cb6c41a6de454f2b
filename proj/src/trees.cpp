#include "qwb/trees.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "qwb/errors.hpp"

namespace qwb {

std::vector<int> PlaneTree::preorder() const {
    std::vector<int> order;
    order.reserve(nodes.size());
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        // push children in reverse so the first child pops first
        std::vector<int> cs = children(v);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back(*it);
    }
    return order;
}

void LabeledTree::validate() const {
    if (labels.size() != tree.nodes.size())
        throw FormatError("label count does not match node count");
    if (labels.empty() || labels[0] != 0) throw FormatError("root label must be 0");
    for (int v = 1; v < tree.node_count(); ++v) {
        int d = labels[v] - labels[tree.nodes[v].parent];
        if (d < -1 || d > 1) throw FormatError("label increment out of range");
    }
}

namespace {

// Shared iterative contour walk; emits one corner per visit of each node.
void contour_walk(const PlaneTree& t, const std::vector<int>& labels, int root,
                  std::vector<TreeCorner>& out) {
    struct Frame {
        int node;
        int child; // next child to descend into, -1 when exhausted
    };
    std::vector<Frame> stack;
    stack.push_back({root, t.nodes[root].first_child});
    out.push_back({root, labels[root]});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.child >= 0) {
            int c = f.child;
            f.child = t.nodes[c].next_sibling;
            stack.push_back({c, t.nodes[c].first_child});
            out.push_back({c, labels[c]});
        } else {
            stack.pop_back();
            if (!stack.empty()) out.push_back({stack.back().node, labels[stack.back().node]});
        }
    }
}

} // namespace

std::vector<TreeCorner> contour_corners(const LabeledTree& t) {
    std::vector<TreeCorner> out;
    out.reserve(2 * t.tree.size() + 1);
    contour_walk(t.tree, t.labels, 0, out);
    return out;
}

std::vector<TreeCorner> subtree_contour(const PlaneTree& t, const std::vector<int>& labels, int v) {
    std::vector<TreeCorner> out;
    contour_walk(t, labels, v, out);
    return out;
}

namespace {

// Builds the p trees encoded by a lattice word with n up steps and n+p down
// steps in which every strict prefix stays above -p. Each descent below the
// current tree's root closes that tree.
std::vector<PlaneTree> forest_from_word(const std::vector<signed char>& word, int p) {
    std::vector<PlaneTree> forest;
    forest.reserve(p);
    PlaneTree cur;
    int node = 0;
    for (signed char s : word) {
        if (s > 0) {
            node = cur.add_child(node);
        } else if (node != 0) {
            node = cur.nodes[node].parent;
        } else {
            forest.push_back(std::move(cur));
            cur = PlaneTree();
            node = 0;
        }
    }
    if (static_cast<int>(forest.size()) != p) throw Error("forest word did not close p trees");
    return forest;
}

} // namespace

std::vector<PlaneTree> sample_uniform_forest(int n, int p, RandomSource& rng) {
    if (n < 0 || p < 1) throw FormatError("forest needs n >= 0, p >= 1");
    const int N = 2 * n + p;
    std::vector<signed char> w(N, -1);
    for (int i = 0; i < n; ++i) w[i] = 1;
    // Fisher-Yates shuffle: uniform arrangement of the multiset of steps.
    for (int i = N - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(w[i], w[j]);
    }
    // Prefix sums S_1..S_N (S_N = -p) and their running minima.
    std::vector<int> S(N + 1, 0);
    for (int i = 1; i <= N; ++i) S[i] = S[i - 1] + w[i - 1];
    std::vector<int> premin(N + 1, 0), sufmin(N + 2, 1 << 30);
    premin[0] = 1 << 30;
    for (int i = 1; i <= N; ++i) premin[i] = std::min(premin[i - 1], S[i]);
    for (int i = N; i >= 1; --i) sufmin[i] = std::min(sufmin[i + 1], S[i]);
    // Exactly p cyclic rotations of the word stay above -p on all strict
    // prefixes; every rotation class hits each valid word once, so picking a
    // uniform good rotation of a uniform arrangement is uniform over forests.
    std::vector<int> good;
    {
        int min_inner = 1 << 30;
        for (int j = 1; j <= N - 1; ++j) min_inner = std::min(min_inner, S[j]);
        if (min_inner > -p) good.push_back(0);
    }
    for (int r = 1; r <= N - 1; ++r) {
        bool ahead = sufmin[r + 1] > S[r] - p;
        bool behind = (r == 1) || premin[r - 1] > S[r];
        if (ahead && behind) good.push_back(r);
    }
    if (static_cast<int>(good.size()) != p) throw Error("cycle lemma rotation count mismatch");
    int r = good[static_cast<size_t>(rng.below(good.size()))];
    std::vector<signed char> rot(N);
    for (int i = 0; i < N; ++i) rot[i] = w[(r + i) % N];
    return forest_from_word(rot, p);
}

PlaneTree sample_uniform_tree(int n, RandomSource& rng) {
    return std::move(sample_uniform_forest(n, 1, rng)[0]);
}

PlaneTree sample_gw_tree(RandomSource& rng, std::int64_t cap_nodes) {
    PlaneTree t;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        int k = rng.geometric_half();
        for (int i = 0; i < k; ++i) {
            if (t.node_count() >= cap_nodes)
                throw ResourceCapError("tree growth exceeded the node cap");
            queue.push_back(t.add_child(v));
        }
    }
    return t;
}

LabeledTree uniform_labeling(const PlaneTree& t, RandomSource& rng) {
    LabeledTree lt;
    lt.tree = t;
    lt.labels.assign(t.nodes.size(), 0);
    for (int v : t.preorder()) {
        if (v == 0) continue;
        lt.labels[v] = lt.labels[t.nodes[v].parent] + rng.label_step();
    }
    return lt;
}

namespace {

void gen_dyck(std::string& cur, int open, int close, int n, std::vector<std::string>& out) {
    if (open == n && close == n) {
        out.push_back(cur);
        return;
    }
    if (open < n) {
        cur.push_back('(');
        gen_dyck(cur, open + 1, close, n, out);
        cur.pop_back();
    }
    if (close < open) {
        cur.push_back(')');
        gen_dyck(cur, open, close + 1, n, out);
        cur.pop_back();
    }
}

PlaneTree tree_from_parens(const std::string& w) {
    PlaneTree t;
    int node = 0;
    for (char c : w) {
        if (c == '(') {
            node = t.add_child(node);
        } else if (c == ')') {
            if (node == 0) throw FormatError("unbalanced shape word");
            node = t.nodes[node].parent;
        } else {
            throw FormatError("shape word must consist of parentheses");
        }
    }
    if (node != 0) throw FormatError("unbalanced shape word");
    return t;
}

} // namespace

std::vector<PlaneTree> enumerate_plane_trees(int n) {
    if (n < 0) throw FormatError("negative edge count");
    if (n > 12) throw TooLargeError("plane tree enumeration capped at 12 edges");
    std::vector<std::string> words;
    std::string cur;
    gen_dyck(cur, 0, 0, n, words);
    std::vector<PlaneTree> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(tree_from_parens(w));
    return out;
}

LazySpineTree::LazySpineTree(RandomSource rng, std::int64_t cap_nodes, int cap_depth)
    : labels_{0}, rng_(rng), cap_nodes_(cap_nodes), cap_depth_(cap_depth) {}

int LazySpineTree::grow_gw_subtree(int parent) {
    // Root of the grafted subtree, then a critical geometric(1/2) growth
    // below it; every new edge draws a fresh uniform {-1,0,+1} increment.
    auto add = [&](int par) {
        if (tree_.node_count() >= cap_nodes_)
            throw ResourceCapError("spine tree exceeded the node cap");
        int id = tree_.add_child(par);
        labels_.push_back(labels_[par] + rng_.label_step());
        return id;
    };
    int root = add(parent);
    std::deque<int> queue{root};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        int k = rng_.geometric_half();
        for (int i = 0; i < k; ++i) queue.push_back(add(v));
    }
    return root;
}

void LazySpineTree::extend() {
    if (realized_depth() >= cap_depth_)
        throw ResourceCapError("spine tree exceeded the depth cap");
    int u = frontier_;
    // Left and right grafted-subtree counts at a spine vertex are independent
    // geometric(1/2): the size-biased offspring law with a uniform spine slot
    // factorizes exactly this way.
    int L = rng_.geometric_half();
    int R = rng_.geometric_half();
    Level lv;
    lv.node = u;
    for (int i = 0; i < L; ++i) lv.left_roots.push_back(grow_gw_subtree(u));
    if (tree_.node_count() >= cap_nodes_)
        throw ResourceCapError("spine tree exceeded the node cap");
    lv.spine_child = tree_.add_child(u);
    labels_.push_back(labels_[u] + rng_.label_step());
    for (int i = 0; i < R; ++i) lv.right_roots.push_back(grow_gw_subtree(u));
    frontier_ = lv.spine_child;
    levels_.push_back(std::move(lv));
}

void LazySpineTree::ensure_depth(int depth) {
    while (realized_depth() < depth) extend();
}

namespace {

// Canonical serialization of the truncation of a labeled tree at depth h.
std::string truncation_word(const LabeledTree& t, int h) {
    std::string out;
    struct Frame {
        int node;
        int child;
        int depth;
    };
    std::vector<Frame> stack{{0, t.tree.nodes[0].first_child, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.child >= 0 && f.depth < h) {
            int c = f.child;
            f.child = t.tree.nodes[c].next_sibling;
            int d = t.labels[c] - t.labels[f.node];
            out.push_back('(');
            out.push_back(d < 0 ? '-' : (d > 0 ? '+' : '0'));
            stack.push_back({c, t.tree.nodes[c].first_child, f.depth + 1});
        } else {
            out.push_back(')');
            stack.pop_back();
        }
    }
    return out;
}

} // namespace

TreeDistance tree_distance(const LabeledTree& a, const LabeledTree& b, int h_cap) {
    if (h_cap < 0) throw FormatError("negative depth cap");
    int s = 0;
    while (s < h_cap && truncation_word(a, s + 1) == truncation_word(b, s + 1)) ++s;
    return {Rat(1, 1 + s), s == h_cap};
}

std::string to_text(const LabeledTree& t) {
    t.validate();
    int n = t.tree.size();
    std::ostringstream os;
    os << "T " << n;
    if (n == 0) return os.str();
    std::string shape, incs;
    struct Frame {
        int node;
        int child;
    };
    std::vector<Frame> stack{{0, t.tree.nodes[0].first_child}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.child >= 0) {
            int c = f.child;
            f.child = t.tree.nodes[c].next_sibling;
            shape.push_back('(');
            int d = t.labels[c] - t.labels[f.node];
            incs.push_back(d < 0 ? '-' : (d > 0 ? '+' : '0'));
            stack.push_back({c, t.tree.nodes[c].first_child});
        } else {
            if (stack.size() > 1) shape.push_back(')');
            stack.pop_back();
        }
    }
    os << ' ' << shape << ' ' << incs;
    return os.str();
}

LabeledTree labeled_tree_from_text(const std::string& line) {
    std::istringstream is(line);
    std::string tag;
    int n = -1;
    if (!(is >> tag >> n) || tag != "T" || n < 0) throw FormatError("bad tree record");
    LabeledTree out;
    if (n == 0) {
        std::string extra;
        if (is >> extra) throw FormatError("trailing data in tree record");
        return out;
    }
    std::string shape, incs;
    if (!(is >> shape >> incs)) throw FormatError("truncated tree record");
    std::string extra;
    if (is >> extra) throw FormatError("trailing data in tree record");
    if (static_cast<int>(shape.size()) != 2 * n || static_cast<int>(incs.size()) != n)
        throw FormatError("tree record length mismatch");
    out.tree = tree_from_parens(shape);
    out.labels.assign(out.tree.nodes.size(), 0);
    // Increment characters follow the shape word's '(' order, which is the
    // preorder of non-root nodes (node ids are assigned in that order).
    for (int v = 1; v <= n; ++v) {
        char c = incs[v - 1];
        int d = c == '+' ? 1 : (c == '-' ? -1 : (c == '0' ? 0 : 2));
        if (d == 2) throw FormatError("bad increment character");
        out.labels[v] = out.labels[out.tree.nodes[v].parent] + d;
    }
    out.validate();
    return out;
}

} // namespace qwb
