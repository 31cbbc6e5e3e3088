#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lexseq/context_tree.hpp"
#include "lexseq/dataset.hpp"

namespace lexseq {

enum class LossKind { LogLoss, ZeroOne };

/// Multiclass margin log-loss: log sum_{y'} exp(1[y' != y] - z_y + z_{y'}).
/// Computed with max-subtracted log-sum-exp; finite for finite z.
double log_loss(std::span<const double> z, Symbol y);

/// Gradient of log_loss w.r.t. z: softmax(margin terms) minus one-hot(y).
/// Components sum to zero.
std::vector<double> log_loss_grad(std::span<const double> z, Symbol y);

/// 1 when the argmax prediction of z differs from y, else 0.
double zero_one(std::span<const double> z, Symbol y);

/// Average per-position loss of a model over a sequence; position t uses
/// the prefix x_{1:t-1} (the t=1 term scores with the root alone).
double sequence_loss(const ContextTreeModel& model, const Sequence& x, LossKind kind);

/// Minimum sequence_loss over a pool and the smallest index attaining it
/// (1-based).
std::pair<double, int> hindsight_loss(std::span<const ContextTreeModel> pool, const Sequence& x,
                                      LossKind kind = LossKind::LogLoss);

}  // namespace lexseq
