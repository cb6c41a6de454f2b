#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwb/rational.hpp"
#include "qwb/rng.hpp"
#include "qwb/trees.hpp"

namespace qwb {

// Cyclic +-1 walk x_1..x_{2p} with x_1 = 0 and exactly p down-steps
// (positions i, 0-based, with x_{i+1} = x_i - 1 cyclically).
struct Bridge {
    std::vector<int> values;

    int half_length() const { return static_cast<int>(values.size()) / 2; }
    int value(int i) const { return values[i]; } // 0-based position
    int step(int i) const {                      // +1 or -1 increment leaving position i
        return values[(i + 1) % values.size()] - values[i];
    }
    std::vector<int> down_positions() const;
    void validate() const;

    bool operator==(const Bridge& o) const { return values == o.values; }
};

// Bridge with one labeled plane tree grafted on each down-step; the k-th tree
// rides the k-th down-step in position order.
struct TreedBridge {
    Bridge bridge;
    std::vector<LabeledTree> trees;

    int tree_count() const { return static_cast<int>(trees.size()); }
    int total_size() const;
    void validate() const;
};

// Same but the tree at slot i0 is the lazily grown infinite one.
struct LazyTreedBridge {
    Bridge bridge;
    int i0; // 0-based infinite slot
    std::vector<LabeledTree> finite; // size p; slot i0 unused
    LazySpineTree spine;

    LazyTreedBridge(Bridge b, int slot, std::vector<LabeledTree> fin, LazySpineTree sp)
        : bridge(std::move(b)), i0(slot), finite(std::move(fin)), spine(std::move(sp)) {}

    int tree_count() const { return static_cast<int>(finite.size()); }
};

// A corner owned by tree `tree` (0-based slot) at arena node `node`, with the
// label already shifted by the bridge value at the owning down-step.
struct Corner {
    int tree;
    int node;
    int label;

    bool operator==(const Corner& o) const {
        return tree == o.tree && node == o.node && label == o.label;
    }
};

// Concatenated contour corners of the trees in slot order; 2|tree_k|+1
// corners per tree, cyclic as a whole.
class CornerSequence {
public:
    static CornerSequence build(const TreedBridge& tb);

    long size() const { return static_cast<long>(corners_.size()); }
    const Corner& at(long i) const { return corners_[i]; }
    int tree_count() const { return static_cast<int>(first_.size()); }
    long tree_first(int k) const { return first_[k]; } // leftmost root corner of tree k
    long tree_last(int k) const { return last_[k]; }   // rightmost root corner of tree k

private:
    std::vector<Corner> corners_;
    std::vector<long> first_, last_;
};

// Demand-driven cyclic corner order around a lazy treed bridge. Zone A is the
// forward-infinite part: the corners of the infinite tree's left spine ray,
// starting at its first root corner, growing as the spine is realized. Zone B
// is the backward-infinite rest (right spine ray, then the finite trees in
// cyclic order), stored reversed in `Brev` so it also grows by appending.
// Cyclic forward order: ... -> Brev[1] -> Brev[0] -> A[0] -> A[1] -> ...
class LazyCornerSequence {
public:
    struct Pos {
        int zone; // 0 = A, 1 = B (index into the reversed store)
        long idx;

        bool operator==(const Pos& o) const { return zone == o.zone && idx == o.idx; }
        bool operator!=(const Pos& o) const { return !(*this == o); }
    };

    LazyCornerSequence(LazyTreedBridge& tb, long cap_corners);

    Corner at(const Pos& p);
    Pos forward(const Pos& p);  // next corner clockwise; may extend zone A
    Pos backward(const Pos& p); // previous corner; may extend zone B

    Pos infinite_first(); // first root corner of the infinite tree (A[0])
    Pos infinite_last();  // last root corner of the infinite tree (in B)
    Pos tree_first(int k); // finite slots only
    Pos tree_last(int k);

    // First corner at or after p (clockwise) with the given label; extends
    // the spine as needed, guarded by the corner cap.
    Pos find_forward(Pos p, int label);

    long realized_corners() const {
        return static_cast<long>(A_.size() + Brev_.size());
    }
    long a_size() const { return static_cast<long>(A_.size()); }
    long b_size() const { return static_cast<long>(Brev_.size()); }
    const Corner& a_at(long i) const { return A_[i]; }
    const Corner& brev_at(long i) const { return Brev_[i]; }
    int consumed_depth() const { return consumed_levels_; }
    void ensure_depth(int depth); // realize and consume spine levels 0..depth-1
    LazyTreedBridge& bridge() { return tb_; }
    int shift(int k) const { return shifts_[k]; }

private:
    LazyTreedBridge& tb_;
    std::vector<Corner> A_, Brev_;
    std::vector<long> finite_first_, finite_last_; // Brev indices per slot (-1 for i0)
    long infinite_last_brev_ = -1;
    std::vector<int> shifts_;
    int consumed_levels_ = 0;
    long cap_corners_;

    void consume_levels();
    void ensure_A(long idx);
    void ensure_B(long idx);
};

Bridge sample_bridge(int p, RandomSource& rng);
TreedBridge sample_uniform_treed_bridge(int n, int p, RandomSource& rng);
LazyTreedBridge sample_infinite_treed_bridge(int p, RandomSource& rng,
                                             std::int64_t cap_nodes = 1 << 22,
                                             int cap_depth = 1 << 22);

// Exhaustive duplicate-free list; guarded by binom(2p,p) 3^n Cat(n,p) <= 10^7.
std::vector<TreedBridge> enumerate_treed_bridges(int n, int p);

CornerSequence corner_order(const TreedBridge& tb);

struct BridgeDistance {
    Rat value;
    bool at_cap = false;
};
// 1 when the bridges differ, otherwise the max slot-wise tree distance.
BridgeDistance bridge_distance(const TreedBridge& a, const TreedBridge& b, int h_cap);

// Multi-line record: signed step word, then one tree record per down-step.
std::string to_text(const TreedBridge& tb);
TreedBridge treed_bridge_from_text(const std::string& text);

} // namespace qwb
