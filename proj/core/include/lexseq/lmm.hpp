#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexseq/dataset.hpp"

namespace lexseq {

/// Mixture of r order-d Markov chains over [k]. Transition rows are kept
/// sparsely, keyed by the contexts observed in training; contexts a chain
/// never saw fall back to the uniform distribution. Sequence starts are
/// left-padded with the sentinel symbol 0 so every position has a full
/// length-d context.
struct LmmModel {
    int components = 1;  // r
    int order = 0;       // d
    int k = 2;
    double alpha = 0.0;  // additive smoothing used at fit time
    std::vector<double> prior;  // pi, length r
    // transitions[q][context] = probability row over [k]
    std::vector<std::map<std::vector<Symbol>, std::vector<double>>> transitions;

    /// Length-d context preceding 1-based position t (0-padded).
    static std::vector<Symbol> context_at(std::span<const Symbol> prefix, int order);

    /// log theta_q(x | ctx); uniform fallback for unseen contexts.
    double log_prob(int component, const std::vector<Symbol>& ctx, Symbol x) const;

    /// Stored row for (component, ctx) or nullptr when unseen.
    const std::vector<double>* row(int component, const std::vector<Symbol>& ctx) const;
};

struct LmmFitOptions {
    int components = 2;
    int order = 1;
    double alpha = 0.1;
    int max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 1;
};

struct LmmFitResult {
    LmmModel model;
    std::vector<double> loglik_trace;  // one entry per EM iteration
    int iterations = 0;
};

/// EM fit from a seeded random responsibility matrix. M-steps set the
/// prior from mean responsibilities and transition rows from
/// responsibility-weighted counts; E-steps run in log space. Stops at
/// max_iters or when the total log-likelihood improves by less than tol.
/// The iterations use the exact (unsmoothed) M-step maximizer, which makes
/// the log-likelihood trace nondecreasing; the returned model's rows are
/// rebuilt once with additive smoothing alpha.
LmmFitResult lmm_em_fit(const Dataset& dataset, const LmmFitOptions& options);

/// Incremental filtered state over one growing prefix.
class LmmFilter {
public:
    explicit LmmFilter(const LmmModel& model);

    /// Posterior over components given the symbols observed so far; equals
    /// the prior before any observation. When every component assigns zero
    /// likelihood the prior is returned.
    std::vector<double> posterior() const;

    /// MAP component, then the most likely next symbol under it (ties
    /// toward the lowest index in both steps).
    Symbol predict() const;

    /// Mixture next-symbol distribution with posterior component weights.
    std::vector<double> predictive() const;

    void observe(Symbol x);

private:
    const LmmModel* model_;
    std::vector<double> log_joint_;
    std::vector<Symbol> context_;
};

std::vector<double> lmm_posterior(const LmmModel& model, std::span<const Symbol> prefix);
Symbol lmm_predict(const LmmModel& model, std::span<const Symbol> prefix);
std::vector<double> lmm_predictive(const LmmModel& model, std::span<const Symbol> prefix);

/// Header "LMM 1 r d k alpha", the prior line, then one row per stored
/// transition: "q <d context symbols> <k probabilities>", sorted by
/// (q, context); exact decimal round-trip.
std::string serialize_lmm(const LmmModel& model);
LmmModel deserialize_lmm(const std::string& text);
void save_lmm(const std::string& path, const LmmModel& model);
LmmModel load_lmm(const std::string& path);

}  // namespace lexseq
