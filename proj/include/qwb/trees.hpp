#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwb/rational.hpp"
#include "qwb/rng.hpp"

namespace qwb {

// Plane tree in a first-child / next-sibling arena. Node 0 is the root.
// size() counts edges.
struct PlaneTree {
    struct Node {
        int parent = -1;
        int first_child = -1;
        int next_sibling = -1;
    };
    std::vector<Node> nodes;

    PlaneTree() : nodes(1) {}

    int node_count() const { return static_cast<int>(nodes.size()); }
    int size() const { return node_count() - 1; }

    int add_child(int parent) {
        int id = node_count();
        nodes.push_back(Node{parent, -1, -1});
        int c = nodes[parent].first_child;
        if (c < 0) {
            nodes[parent].first_child = id;
        } else {
            while (nodes[c].next_sibling >= 0) c = nodes[c].next_sibling;
            nodes[c].next_sibling = id;
        }
        return id;
    }

    int child_count(int v) const {
        int n = 0;
        for (int c = nodes[v].first_child; c >= 0; c = nodes[c].next_sibling) ++n;
        return n;
    }

    std::vector<int> children(int v) const {
        std::vector<int> out;
        for (int c = nodes[v].first_child; c >= 0; c = nodes[c].next_sibling) out.push_back(c);
        return out;
    }

    // Nodes in depth-first (preorder) order.
    std::vector<int> preorder() const;
};

// Plane tree with integer vertex labels. Root label 0, |increment| <= 1 along
// every edge.
struct LabeledTree {
    PlaneTree tree;
    std::vector<int> labels;

    LabeledTree() : labels{0} {}

    void validate() const;
};

struct TreeCorner {
    int node;
    int label;
};

// Corners in depth-first contour order: a corner of a node per visit, 2n+1
// corners for a tree with n edges. Labels are the node labels.
std::vector<TreeCorner> contour_corners(const LabeledTree& t);

// Corner sequence of the subtree rooted at v (node labels from `labels`).
std::vector<TreeCorner> subtree_contour(const PlaneTree& t, const std::vector<int>& labels, int v);

// Exact uniform plane tree with n edges via the cycle lemma (no rejection).
PlaneTree sample_uniform_tree(int n, RandomSource& rng);

// Exact uniform ordered forest of p trees with n edges in total.
std::vector<PlaneTree> sample_uniform_forest(int n, int p, RandomSource& rng);

// Critical geometric Galton-Watson tree, offspring P(k) = 2^{-k-1}.
// Throws ResourceCapError past cap_nodes.
PlaneTree sample_gw_tree(RandomSource& rng, std::int64_t cap_nodes);

// Independent uniform {-1,0,+1} increments on the edges, root label 0.
LabeledTree uniform_labeling(const PlaneTree& t, RandomSource& rng);

// All plane trees with n edges (Catalan many). Guarded for small n.
std::vector<PlaneTree> enumerate_plane_trees(int n);

// Uniform infinite labeled tree of the local limit: a spine with independent
// geometric(1/2) counts of critical GW trees grafted left and right of each
// spine vertex, fresh uniform label increments on every new edge. Realized
// lazily one spine level at a time from an owned deterministic stream.
class LazySpineTree {
public:
    struct Level {
        int node = -1;                 // spine vertex at this depth
        std::vector<int> left_roots;   // subtrees grafted left of the spine child
        std::vector<int> right_roots;  // subtrees grafted right of the spine child
        int spine_child = -1;
    };

    LazySpineTree(RandomSource rng, std::int64_t cap_nodes, int cap_depth);

    // Realizes the children of the deepest spine vertex. Throws
    // ResourceCapError when caps are exceeded.
    void extend();
    void ensure_depth(int depth);

    int realized_depth() const { return static_cast<int>(levels_.size()); }
    const Level& level(int h) const { return levels_[h]; }
    const PlaneTree& arena() const { return tree_; }
    const std::vector<int>& labels() const { return labels_; }
    int root_node() const { return 0; }
    // Deepest spine vertex, whose children are not yet realized.
    int frontier_node() const { return frontier_; }

private:
    PlaneTree tree_;
    std::vector<int> labels_;
    std::vector<Level> levels_;
    int frontier_ = 0;
    RandomSource rng_;
    std::int64_t cap_nodes_;
    int cap_depth_;

    int grow_gw_subtree(int parent);
};

// Local distance on labeled trees: (1+h)^{-1} for the largest h <= h_cap with
// equal labeled truncations at depth h.
struct TreeDistance {
    Rat value;
    bool at_cap = false;
};

TreeDistance tree_distance(const LabeledTree& a, const LabeledTree& b, int h_cap);

// One-line record: edge count, balanced-parenthesis shape word, increment
// word over {+,0,-}. Round-trips exactly.
std::string to_text(const LabeledTree& t);
LabeledTree labeled_tree_from_text(const std::string& line);

} // namespace qwb
