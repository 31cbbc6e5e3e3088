#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexseq/alphabet.hpp"
#include "lexseq/penalty.hpp"

namespace lexseq {

/// One trie node. Children are kept sorted by symbol so traversal order is
/// deterministic everywhere (serialization, norms, merges). Copies clone
/// the whole subtree.
struct TreeNode {
    std::vector<double> score;  // length k
    std::vector<std::pair<Symbol, std::unique_ptr<TreeNode>>> children;

    TreeNode() = default;
    TreeNode(const TreeNode& other);
    TreeNode& operator=(const TreeNode& other);
    TreeNode(TreeNode&&) noexcept = default;
    TreeNode& operator=(TreeNode&&) noexcept = default;

    const TreeNode* child(Symbol s) const;
    TreeNode* child(Symbol s);
};

/// Node paths (contexts, most-recent symbol first) visited when scoring a
/// prefix: the root, then (x_{t-1}), (x_{t-1}, x_{t-2}), ... down to
/// min(prefix length, cap-1) context symbols. cap <= 0 means unbounded.
std::vector<std::vector<Symbol>> psi_path(std::span<const Symbol> prefix, int cap);

/// Smallest index attaining the maximum of z (1-based).
Symbol argmax_symbol(std::span<const double> z);

/// A sparse context tree over [k]: each node holds a score vector in R^k
/// and a prefix is scored by summing the vectors of the materialized nodes
/// along its history path. Parameters live inside a weighted-norm ball,
/// with depth d costing penalty.weight(d) per unit of squared score.
class ContextTreeModel {
public:
    ContextTreeModel(int k, PenaltyProfile penalty = PenaltyProfile::quadratic(),
                     int depth_cap = 0);

    int k() const { return k_; }
    const PenaltyProfile& penalty() const { return penalty_; }
    int depth_cap() const { return depth_cap_; }

    /// Score vector for the given prefix; missing nodes contribute zero.
    std::vector<double> predict_scores(std::span<const Symbol> prefix) const;

    /// argmax prediction for the prefix (ties broken toward 1).
    Symbol predict(std::span<const Symbol> prefix) const;

    /// sqrt(sum over nodes of p_depth * ||score||^2); cached, O(1).
    double weighted_norm() const;

    /// Norm recomputed from the stored scores (cache audit).
    double recompute_weighted_norm() const;

    /// Radial projection onto {norm <= budget}. No-op inside the ball.
    void project_to_ball(double budget);

    /// score -= step * g on every node of psi_path(prefix), creating
    /// missing nodes with zero scores.
    void apply_update(std::span<const Symbol> prefix, std::span<const double> g, double step);

    /// this += c * other (merges tries node by node).
    void add_scaled(const ContextTreeModel& other, double c);

    /// Visits every materialized node breadth-first, children in symbol
    /// order; path is the node's context, depth = path length + 1.
    void for_each_node(
        const std::function<void(std::span<const Symbol> path, int depth,
                                 std::span<const double> score)>& fn) const;

    std::size_t node_count() const;

    const TreeNode& root() const { return root_; }

    /// Text form:
    ///   LEXPST 1 k=<k> penalty=<tag> cap=<D|inf>
    ///   <depth> <path symbols | - for root> <k scores>
    /// one line per materialized node, breadth-first, shortest round-trip
    /// decimals. deserialize() inverts it exactly.
    std::string serialize() const;
    static ContextTreeModel deserialize(const std::string& text);

    bool operator==(const ContextTreeModel& other) const;

private:
    /// Number of context symbols consumed for a prefix of this length.
    std::size_t walk_limit(std::size_t prefix_len) const;

    int k_;
    PenaltyProfile penalty_;
    int depth_cap_;  // <= 0: unbounded
    TreeNode root_;
    double norm_sq_ = 0.0;  // maintained incrementally; reset on projection
};

}  // namespace lexseq
