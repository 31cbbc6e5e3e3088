#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lexseq/context_tree.hpp"
#include "lexseq/dataset.hpp"
#include "lexseq/losses.hpp"

namespace lexseq {

/// eta = sqrt(log(r) / T); zero for a single expert.
double default_eta(int experts, std::size_t horizon);

/// The additive regret term sqrt(4 log(r) / T).
double wm_regret_bound(int experts, std::size_t horizon);

enum class WmMode {
    Expected,  // per-round loss = sum_i w_i * 1[expert i errs]; deterministic
    Sampled,   // draw one expert from w each round (seeded)
};

struct WmOptions {
    double eta = -1.0;  // < 0: use default_eta(r, T)
    WmMode mode = WmMode::Expected;
    std::uint64_t seed = 0;                      // Sampled mode only
    LossKind weight_loss = LossKind::ZeroOne;    // loss fed to the weight update
    // eta_t = sqrt(log r / t); carries no regret-bound claim and takes
    // precedence over a fixed eta.
    bool anytime_eta = false;
};

struct WmReport {
    std::vector<double> per_step_loss;  // length T
    double avg_loss = 0.0;              // mean of per_step_loss
    double best_expert_loss = 0.0;      // min_i (mistakes_i / T)
    double regret_bound = 0.0;          // sqrt(4 log r / T)
    std::vector<double> final_weights;  // on the simplex
};

/// Runs the multiplicative-weights forecaster over a pool of context trees
/// on one sequence. Weights start uniform, update as
/// w_{t+1}[i] proportional to w_t[i] * exp(-eta * loss_i_t), and are
/// renormalized every round. With weight_loss = LogLoss the per-expert
/// losses are scaled by 1/log(1 + (k-1)e) before the update.
WmReport wm_run(std::span<const ContextTreeModel> pool, const Sequence& x,
                const WmOptions& options = {});

/// Same forecaster over a fixed prediction table: predictions[i][t] is
/// expert i's guess for position t+1. Supports zero-one weight loss only.
WmReport wm_run_predictions(const std::vector<std::vector<Symbol>>& predictions,
                            const Sequence& x, const WmOptions& options = {});

}  // namespace lexseq
