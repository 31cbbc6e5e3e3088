#include "lexseq/context_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

namespace {

struct ChildLess {
    bool operator()(const std::pair<Symbol, std::unique_ptr<TreeNode>>& entry, Symbol s) const {
        return entry.first < s;
    }
};

}  // namespace

TreeNode::TreeNode(const TreeNode& other) : score(other.score) {
    children.reserve(other.children.size());
    for (const auto& [sym, child] : other.children)
        children.emplace_back(sym, std::make_unique<TreeNode>(*child));
}

TreeNode& TreeNode::operator=(const TreeNode& other) {
    if (this != &other) {
        TreeNode copy(other);
        score = std::move(copy.score);
        children = std::move(copy.children);
    }
    return *this;
}

const TreeNode* TreeNode::child(Symbol s) const {
    auto it = std::lower_bound(children.begin(), children.end(), s, ChildLess{});
    return (it != children.end() && it->first == s) ? it->second.get() : nullptr;
}

TreeNode* TreeNode::child(Symbol s) {
    auto it = std::lower_bound(children.begin(), children.end(), s, ChildLess{});
    return (it != children.end() && it->first == s) ? it->second.get() : nullptr;
}

std::vector<std::vector<Symbol>> psi_path(std::span<const Symbol> prefix, int cap) {
    const std::size_t len = prefix.size();
    const std::size_t steps =
        cap > 0 ? std::min(len, static_cast<std::size_t>(cap - 1)) : len;
    std::vector<std::vector<Symbol>> paths;
    paths.reserve(steps + 1);
    paths.emplace_back();  // root
    for (std::size_t j = 1; j <= steps; ++j) {
        std::vector<Symbol> path(paths.back());
        path.push_back(prefix[len - j]);
        paths.push_back(std::move(path));
    }
    return paths;
}

Symbol argmax_symbol(std::span<const double> z) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i)
        if (z[i] > z[best]) best = i;
    return static_cast<Symbol>(best + 1);
}

ContextTreeModel::ContextTreeModel(int k, PenaltyProfile penalty, int depth_cap)
    : k_(k), penalty_(penalty), depth_cap_(depth_cap) {
    if (k < 2) throw std::invalid_argument("context tree needs k >= 2");
    root_.score.assign(static_cast<std::size_t>(k), 0.0);
}

std::size_t ContextTreeModel::walk_limit(std::size_t prefix_len) const {
    if (depth_cap_ > 0)
        return std::min(prefix_len, static_cast<std::size_t>(depth_cap_ - 1));
    return prefix_len;
}

std::vector<double> ContextTreeModel::predict_scores(std::span<const Symbol> prefix) const {
    std::vector<double> z(root_.score);
    const TreeNode* node = &root_;
    const std::size_t steps = walk_limit(prefix.size());
    for (std::size_t j = 1; j <= steps; ++j) {
        node = node->child(prefix[prefix.size() - j]);
        if (node == nullptr) break;
        for (std::size_t c = 0; c < z.size(); ++c) z[c] += node->score[c];
    }
    return z;
}

Symbol ContextTreeModel::predict(std::span<const Symbol> prefix) const {
    const auto z = predict_scores(prefix);
    return argmax_symbol(z);
}

double ContextTreeModel::weighted_norm() const {
    return std::sqrt(std::max(0.0, norm_sq_));
}

double ContextTreeModel::recompute_weighted_norm() const {
    double total = 0.0;
    for_each_node([&](std::span<const Symbol>, int depth, std::span<const double> score) {
        double sq = 0.0;
        for (double v : score) sq += v * v;
        total += penalty_.weight(depth) * sq;
    });
    return std::sqrt(total);
}

void ContextTreeModel::project_to_ball(double budget) {
    if (!(budget > 0.0)) throw std::invalid_argument("norm budget must be positive");
    // The cached norm drifts by at most ~1e-11 relative under incremental
    // maintenance, so it can answer the common inside-the-ball case in
    // O(1). A triggered projection recomputes exactly before scaling.
    if (weighted_norm() <= budget) return;
    const double norm = recompute_weighted_norm();
    norm_sq_ = norm * norm;
    if (norm <= budget) return;
    const double factor = budget / norm;

    std::deque<TreeNode*> queue{&root_};
    while (!queue.empty()) {
        TreeNode* node = queue.front();
        queue.pop_front();
        for (double& v : node->score) v *= factor;
        for (auto& [sym, child] : node->children) queue.push_back(child.get());
    }
    norm_sq_ = budget * budget;
}

void ContextTreeModel::apply_update(std::span<const Symbol> prefix, std::span<const double> g,
                                    double step) {
    if (g.size() != static_cast<std::size_t>(k_))
        throw std::invalid_argument("gradient dimension mismatch");
    if (step == 0.0) return;  // identity; do not materialize nodes
    TreeNode* node = &root_;
    int depth = 1;
    const std::size_t steps = walk_limit(prefix.size());
    for (std::size_t j = 0; j <= steps; ++j) {
        if (j > 0) {
            const Symbol s = prefix[prefix.size() - j];
            TreeNode* next = node->child(s);
            if (next == nullptr) {
                auto it = std::lower_bound(node->children.begin(), node->children.end(), s,
                                           ChildLess{});
                auto fresh = std::make_unique<TreeNode>();
                fresh->score.assign(static_cast<std::size_t>(k_), 0.0);
                next = fresh.get();
                node->children.insert(it, {s, std::move(fresh)});
            }
            node = next;
            ++depth;
        }
        const double w = penalty_.weight(depth);
        for (std::size_t c = 0; c < g.size(); ++c) {
            const double before = node->score[c];
            const double after = before - step * g[c];
            node->score[c] = after;
            norm_sq_ += w * (after * after - before * before);
        }
    }
}

namespace {

void add_scaled_rec(TreeNode& dst, const TreeNode& src, double c) {
    for (std::size_t i = 0; i < dst.score.size(); ++i) dst.score[i] += c * src.score[i];
    for (const auto& [sym, child] : src.children) {
        TreeNode* target = dst.child(sym);
        if (target == nullptr) {
            auto it = std::lower_bound(dst.children.begin(), dst.children.end(), sym,
                                       ChildLess{});
            auto fresh = std::make_unique<TreeNode>();
            fresh->score.assign(dst.score.size(), 0.0);
            target = fresh.get();
            dst.children.insert(it, {sym, std::move(fresh)});
        }
        add_scaled_rec(*target, *child, c);
    }
}

}  // namespace

void ContextTreeModel::add_scaled(const ContextTreeModel& other, double c) {
    if (other.k_ != k_) throw std::invalid_argument("alphabet size mismatch");
    add_scaled_rec(root_, other.root_, c);
    const double norm = recompute_weighted_norm();
    norm_sq_ = norm * norm;
}

void ContextTreeModel::for_each_node(
    const std::function<void(std::span<const Symbol>, int, std::span<const double>)>& fn) const {
    struct Item {
        const TreeNode* node;
        std::vector<Symbol> path;
    };
    std::deque<Item> queue;
    queue.push_back({&root_, {}});
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        fn(item.path, static_cast<int>(item.path.size()) + 1, item.node->score);
        for (const auto& [sym, child] : item.node->children) {
            std::vector<Symbol> path(item.path);
            path.push_back(sym);
            queue.push_back({child.get(), std::move(path)});
        }
    }
}

std::size_t ContextTreeModel::node_count() const {
    std::size_t n = 0;
    for_each_node([&](std::span<const Symbol>, int, std::span<const double>) { ++n; });
    return n;
}

std::string ContextTreeModel::serialize() const {
    std::string out = "LEXPST 1 k=" + std::to_string(k_) + " penalty=" + penalty_.tag() +
                      " cap=" + (depth_cap_ > 0 ? std::to_string(depth_cap_) : "inf") + "\n";
    for_each_node([&](std::span<const Symbol> path, int depth, std::span<const double> score) {
        out += std::to_string(depth);
        if (path.empty()) {
            out += " -";
        } else {
            for (Symbol s : path) {
                out += ' ';
                out += std::to_string(s);
            }
        }
        for (double v : score) {
            out += ' ';
            out += format_double(v);
        }
        out += '\n';
    });
    return out;
}

ContextTreeModel ContextTreeModel::deserialize(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty model text", 1);

    const auto header = split_tokens(lines[0]);
    if (header.size() != 5 || header[0] != "LEXPST" || header[1] != "1" ||
        !header[2].starts_with("k=") || !header[3].starts_with("penalty=") ||
        !header[4].starts_with("cap="))
        throw ParseError("malformed model header", 1);

    std::uint64_t k = 0;
    if (!parse_u64(header[2].substr(2), k) || k < 2)
        throw ParseError("malformed alphabet size", 1);
    PenaltyProfile penalty = PenaltyProfile::parse(std::string(header[3].substr(8)));
    int cap = 0;
    const std::string_view cap_text = header[4].substr(4);
    if (cap_text != "inf") {
        std::uint64_t v = 0;
        if (!parse_u64(cap_text, v) || v < 1) throw ParseError("malformed depth cap", 1);
        cap = static_cast<int>(v);
    }

    ContextTreeModel model(static_cast<int>(k), penalty, cap);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto toks = split_tokens(lines[li]);
        if (toks.empty()) continue;
        std::uint64_t depth = 0;
        if (!parse_u64(toks[0], depth) || depth < 1)
            throw ParseError("malformed node depth", li + 1);
        const std::size_t path_len = static_cast<std::size_t>(depth - 1);
        const std::size_t expected = 1 + std::max<std::size_t>(path_len, 1) + k;
        if (toks.size() != expected)
            throw ParseError("wrong field count for node line", li + 1);

        TreeNode* node = &model.root_;
        if (depth == 1) {
            if (toks[1] != "-") throw ParseError("root line must use '-' path", li + 1);
        } else {
            for (std::size_t p = 0; p < path_len; ++p) {
                std::uint64_t sym = 0;
                if (!parse_u64(toks[1 + p], sym) || sym < 1 || sym > k)
                    throw ParseError("path symbol out of range", li + 1);
                const Symbol s = static_cast<Symbol>(sym);
                TreeNode* next = node->child(s);
                if (next == nullptr) {
                    auto it = std::lower_bound(node->children.begin(), node->children.end(), s,
                                               ChildLess{});
                    auto fresh = std::make_unique<TreeNode>();
                    fresh->score.assign(static_cast<std::size_t>(k), 0.0);
                    next = fresh.get();
                    node->children.insert(it, {s, std::move(fresh)});
                }
                node = next;
            }
        }
        const std::size_t score_at = 1 + std::max<std::size_t>(path_len, 1);
        for (std::size_t c = 0; c < k; ++c) {
            double v = 0.0;
            if (!parse_double(toks[score_at + c], v))
                throw ParseError("non-numeric score field", li + 1);
            node->score[c] = v;
        }
    }
    const double norm = model.recompute_weighted_norm();
    model.norm_sq_ = norm * norm;
    return model;
}

namespace {

bool nodes_equal(const TreeNode& a, const TreeNode& b) {
    if (a.score != b.score) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (a.children[i].first != b.children[i].first) return false;
        if (!nodes_equal(*a.children[i].second, *b.children[i].second)) return false;
    }
    return true;
}

}  // namespace

bool ContextTreeModel::operator==(const ContextTreeModel& other) const {
    return k_ == other.k_ && penalty_ == other.penalty_ && depth_cap_ == other.depth_cap_ &&
           nodes_equal(root_, other.root_);
}

}  // namespace lexseq
