#include "lexseq/weighted_majority.hpp"

#include <cmath>
#include <stdexcept>

#include "lexseq/rng.hpp"

namespace lexseq {

double default_eta(int experts, std::size_t horizon) {
    if (experts < 1 || horizon < 1) throw std::invalid_argument("need r >= 1 and T >= 1");
    if (experts == 1) return 0.0;
    return std::sqrt(std::log(static_cast<double>(experts)) / static_cast<double>(horizon));
}

double wm_regret_bound(int experts, std::size_t horizon) {
    if (experts < 1 || horizon < 1) throw std::invalid_argument("need r >= 1 and T >= 1");
    return std::sqrt(4.0 * std::log(static_cast<double>(experts)) /
                     static_cast<double>(horizon));
}

namespace {

struct RoundLosses {
    std::span<const double> errors;        // 0-1 indicators per expert
    std::span<const double> weight_losses; // losses fed to the update
};

/// Shared driver; next_round fills the per-expert losses for round t.
template <typename NextRound>
WmReport run_core(std::size_t experts, std::size_t horizon, const WmOptions& options,
                  NextRound&& next_round) {
    if (experts == 0) throw std::invalid_argument("empty pool");
    const double fixed_eta =
        options.eta >= 0.0 ? options.eta : default_eta(static_cast<int>(experts), horizon);

    std::vector<double> weights(experts, 1.0 / static_cast<double>(experts));
    std::vector<double> cumulative_errors(experts, 0.0);
    Rng rng(options.seed);

    WmReport report;
    report.per_step_loss.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        const RoundLosses losses = next_round(t);

        double step_loss = 0.0;
        if (options.mode == WmMode::Expected) {
            for (std::size_t i = 0; i < experts; ++i) step_loss += weights[i] * losses.errors[i];
        } else {
            const double u = uniform01(rng);
            std::size_t drawn = experts - 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < experts; ++i) {
                acc += weights[i];
                if (u < acc) {
                    drawn = i;
                    break;
                }
            }
            step_loss = losses.errors[drawn];
        }
        report.per_step_loss.push_back(step_loss);

        const double eta = options.anytime_eta
                               ? default_eta(static_cast<int>(experts), t + 1)
                               : fixed_eta;
        double sum = 0.0;
        for (std::size_t i = 0; i < experts; ++i) {
            weights[i] *= std::exp(-eta * losses.weight_losses[i]);
            sum += weights[i];
        }
        for (double& w : weights) w /= sum;

        for (std::size_t i = 0; i < experts; ++i) cumulative_errors[i] += losses.errors[i];
    }

    double total = 0.0;
    for (double v : report.per_step_loss) total += v;
    report.avg_loss = total / static_cast<double>(horizon);

    double best = cumulative_errors[0];
    for (double v : cumulative_errors) best = std::min(best, v);
    report.best_expert_loss = best / static_cast<double>(horizon);
    report.regret_bound = wm_regret_bound(static_cast<int>(experts), horizon);
    report.final_weights = std::move(weights);
    return report;
}

}  // namespace

WmReport wm_run(std::span<const ContextTreeModel> pool, const Sequence& x,
                const WmOptions& options) {
    if (pool.empty()) throw std::invalid_argument("empty pool");
    if (x.size() == 0) throw std::invalid_argument("sequence must be nonempty");
    const std::size_t r = pool.size();
    const double log_scale =
        std::log(1.0 + (static_cast<double>(pool[0].k()) - 1.0) * std::exp(1.0));

    std::vector<double> errors(r);
    std::vector<double> weight_losses(r);
    return run_core(r, x.size(), options, [&](std::size_t t) {
        const auto prefix = x.prefix(t + 1);
        const Symbol y = x[t];
        for (std::size_t i = 0; i < r; ++i) {
            const auto z = pool[i].predict_scores(prefix);
            errors[i] = argmax_symbol(z) == y ? 0.0 : 1.0;
            weight_losses[i] = options.weight_loss == LossKind::ZeroOne
                                   ? errors[i]
                                   : log_loss(z, y) / log_scale;
        }
        return RoundLosses{errors, weight_losses};
    });
}

WmReport wm_run_predictions(const std::vector<std::vector<Symbol>>& predictions,
                            const Sequence& x, const WmOptions& options) {
    if (predictions.empty()) throw std::invalid_argument("empty pool");
    if (options.weight_loss != LossKind::ZeroOne)
        throw std::invalid_argument("prediction-table runs support zero-one weight loss only");
    const std::size_t r = predictions.size();
    for (const auto& row : predictions)
        if (row.size() != x.size())
            throw std::invalid_argument("prediction table must cover the whole sequence");

    std::vector<double> errors(r);
    return run_core(r, x.size(), options, [&](std::size_t t) {
        for (std::size_t i = 0; i < r; ++i)
            errors[i] = predictions[i][t] == x[t] ? 0.0 : 1.0;
        return RoundLosses{errors, errors};
    });
}

}  // namespace lexseq
