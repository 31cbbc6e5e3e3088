#pragma once

#include <vector>

#include "lexseq/context_tree.hpp"
#include "lexseq/dataset.hpp"

namespace lexseq {

/// Configuration for the training-free baseline: per-sequence projected
/// online gradient descent on a fresh context tree. By default the
/// learner is conservative: it only takes a step after a prediction
/// mistake; set conservative = false to update on every round.
struct OnlinePstConfig {
    PenaltyProfile penalty = PenaltyProfile::quadratic();
    int depth_cap = 0;         // <= 0: unbounded
    double norm_budget = 10.0;
    double eta0 = 1.0;         // step t uses eta0 / sqrt(t)
    bool conservative = true;
    bool validate_feasibility = false;
};

struct OnlinePstTrace {
    std::vector<Symbol> predictions;
    std::vector<double> losses;  // 0-1 per step
    double mean_loss = 0.0;
};

/// Starts from an all-zero model; at each step predicts, records the 0-1
/// loss, then takes one projected log-loss gradient step on the revealed
/// symbol. Never sees any training corpus.
OnlinePstTrace online_pst_run(const Sequence& x, int k, const OnlinePstConfig& config);

}  // namespace lexseq
