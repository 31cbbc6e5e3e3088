#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexseq/context_tree.hpp"
#include "lexseq/dataset.hpp"
#include "lexseq/losses.hpp"
#include "lexseq/rng.hpp"

namespace lexseq {

struct TrainConfig {
    int experts = 2;       // r
    double norm_budget = 10.0;
    PenaltyProfile penalty = PenaltyProfile::quadratic();
    int depth_cap = 0;     // <= 0: unbounded
    double sgd_eta0 = 1.0;
    int sgd_epochs = 2;    // epochs per M-step
    bool per_position_updates = false;  // default: one step per sequence
    int outer_iters = 50;
    double objective_tol = 1e-5;
    std::uint64_t seed = 1;
    bool validate_feasibility = false;  // test hook: throw if an M-step breaks the ball
};

/// Hex digest of every training-relevant config field.
std::string config_digest(const TrainConfig& config);

/// Ordered experts plus the ball radius they were trained in.
struct ExpertPool {
    std::vector<ContextTreeModel> experts;
    double norm_budget = 0.0;
    std::string provenance;  // config digest of the producing run

    int size() const { return static_cast<int>(experts.size()); }
    std::span<const ContextTreeModel> span() const { return experts; }
};

/// expert_of_sequence[i] in [1, r] for each training sequence.
using Assignment = std::vector<int>;

/// Objectives after every half-step of the alternation.
struct TrainTrace {
    double initial_objective = 0.0;
    std::vector<double> after_m_step;   // assigned objective, current clusters
    std::vector<double> after_e_step;   // assigned objective after reassigning
    int outer_iterations = 0;
    bool assignment_converged = false;
};

struct TrainResult {
    ExpertPool pool;
    Assignment assignment;
    TrainTrace trace;
};

/// Mean over sequences of the best per-expert average log-loss.
double objective(const ExpertPool& pool, const Dataset& dataset);

/// Mean over sequences of the assigned expert's average log-loss.
double assigned_objective(const ExpertPool& pool, const Dataset& dataset,
                          const Assignment& assignment);

/// Seeded random balanced partition; cluster sizes differ by at most one.
Assignment init_assignment(std::size_t m, int r, std::uint64_t seed);

/// Best expert per sequence under log-loss, ties toward the lowest index.
Assignment reassign(const ExpertPool& pool, const Dataset& dataset);

/// One pass over the sequences in a seeded shuffled order: per sequence,
/// one projected gradient step on its average log-loss. update_count is
/// the expert's cumulative step counter tau; the step size is
/// eta0 / sqrt(tau).
void sgd_epoch(ContextTreeModel& expert, std::span<const Sequence* const> sequences,
               const TrainConfig& config, Rng& rng, std::uint64_t& update_count);

/// Alternating minimization: SGD epochs per expert on its cluster, then
/// reassign; stops on an assignment fixed point, an objective improvement
/// below tolerance, or the outer iteration cap.
TrainResult train_lex(const Dataset& dataset, const TrainConfig& config);

/// Trains a single-expert pool on the full dataset (the r=1 special case).
TrainResult train_onelex(const Dataset& dataset, TrainConfig config);

/// Appends a single-expert model trained on the full dataset, growing the
/// pool to r+1 experts.
void augment_pool(ExpertPool& pool, const Dataset& dataset, const TrainConfig& config);

// Pool files: a manifest listing r, B and the config digest, then one
// expert file (context-tree format) per line, index order, paths relative
// to the manifest.
std::string serialize_pool_manifest(const ExpertPool& pool,
                                    const std::vector<std::string>& expert_files);
void save_pool(const std::string& path, const ExpertPool& pool);
ExpertPool load_pool(const std::string& path);

}  // namespace lexseq
