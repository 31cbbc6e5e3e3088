#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lexseq/dataset.hpp"
#include "lexseq/lex.hpp"
#include "lexseq/lmm.hpp"
#include "lexseq/online_pst.hpp"
#include "lexseq/weighted_majority.hpp"

namespace lexseq {

struct EvalOptions {
    WmMode mode = WmMode::Expected;
    std::uint64_t seed = 0;      // Sampled mode only
    double eta = -1.0;           // >= 0 pins a fixed learning rate
    // Default schedule: eta_t = sqrt(log r / t). It concentrates much
    // faster than the horizon-tuned constant on easy pools while losing
    // nothing measurable elsewhere; set false for sqrt(log r / T).
    bool anytime_eta = true;
};

/// Online accuracy aggregated over a test set. For pool predictors the
/// per-sequence accuracy is 1 minus the expected Weighted Majority loss;
/// point predictors (LMM, online PST) use plain 0-1 accuracy, with the WM
/// diagnostic fields mirroring it and a zero regret bound.
struct EvalReport {
    std::string predictor_id;
    std::vector<double> per_sequence_accuracy;
    double mean_accuracy = 0.0;
    double mean_wm_loss = 0.0;
    double mean_best_expert_loss = 0.0;
    double mean_regret_bound = 0.0;
    double wall_ms = 0.0;  // filled by callers that time the run
};

EvalReport evaluate_pool(const ExpertPool& pool, const Dataset& test,
                         const EvalOptions& options = {});

EvalReport evaluate_lmm(const LmmModel& model, const Dataset& test);

EvalReport evaluate_online_pst(const OnlinePstConfig& config, const Dataset& test);

/// Mean online 0-1 accuracy of an arbitrary per-step predictor
/// (prefix -> symbol); the hook tests and oracles evaluate through.
double mean_online_accuracy(
    const Dataset& test,
    const std::function<Symbol(const Sequence&, std::size_t t)>& predict);

}  // namespace lexseq
