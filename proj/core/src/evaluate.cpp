#include "lexseq/evaluate.hpp"

#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/parallel.hpp"
#include "lexseq/rng.hpp"

namespace lexseq {

namespace {

void check_alphabet(int model_k, const Dataset& test) {
    if (test.sequences.empty()) throw std::invalid_argument("empty test set");
    if (test.alphabet.size() > model_k)
        throw Error("alphabet mismatch: model covers " + std::to_string(model_k) +
                    " symbols but the data uses " + std::to_string(test.alphabet.size()));
    validate_dataset(test);
}

void finish(EvalReport& report) {
    double acc = 0.0;
    for (double v : report.per_sequence_accuracy) acc += v;
    report.mean_accuracy = acc / static_cast<double>(report.per_sequence_accuracy.size());
}

}  // namespace

EvalReport evaluate_pool(const ExpertPool& pool, const Dataset& test,
                         const EvalOptions& options) {
    if (pool.size() < 1) throw std::invalid_argument("empty pool");
    check_alphabet(pool.experts[0].k(), test);

    const std::size_t n = test.size();
    std::vector<double> wm_loss(n);
    std::vector<double> best_loss(n);
    std::vector<double> bound(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            WmOptions wm;
            wm.mode = options.mode;
            wm.eta = options.eta;
            wm.anytime_eta = options.eta < 0.0 && options.anytime_eta;
            wm.seed = derive_seed(options.seed, i);
            const WmReport r = wm_run(pool.span(), test.sequences[i], wm);
            wm_loss[i] = r.avg_loss;
            best_loss[i] = r.best_expert_loss;
            bound[i] = r.regret_bound;
        }
    });

    EvalReport report;
    report.predictor_id = pool.size() == 1 ? "onelex" : "lex";
    report.per_sequence_accuracy.resize(n);
    double loss_sum = 0.0;
    double best_sum = 0.0;
    double bound_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        report.per_sequence_accuracy[i] = 1.0 - wm_loss[i];
        loss_sum += wm_loss[i];
        best_sum += best_loss[i];
        bound_sum += bound[i];
    }
    report.mean_wm_loss = loss_sum / static_cast<double>(n);
    report.mean_best_expert_loss = best_sum / static_cast<double>(n);
    report.mean_regret_bound = bound_sum / static_cast<double>(n);
    report.mean_accuracy = 1.0 - report.mean_wm_loss;
    return report;
}

EvalReport evaluate_lmm(const LmmModel& model, const Dataset& test) {
    check_alphabet(model.k, test);
    const std::size_t n = test.size();
    std::vector<double> acc(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Sequence& x = test.sequences[i];
            LmmFilter filter(model);
            std::size_t correct = 0;
            for (std::size_t t = 1; t <= x.size(); ++t) {
                if (filter.predict() == x[t - 1]) ++correct;
                filter.observe(x[t - 1]);
            }
            acc[i] = static_cast<double>(correct) / static_cast<double>(x.size());
        }
    });
    EvalReport report;
    report.predictor_id = "lmm";
    report.per_sequence_accuracy = std::move(acc);
    finish(report);
    report.mean_wm_loss = 1.0 - report.mean_accuracy;
    report.mean_best_expert_loss = report.mean_wm_loss;
    report.mean_regret_bound = 0.0;
    return report;
}

EvalReport evaluate_online_pst(const OnlinePstConfig& config, const Dataset& test) {
    if (test.sequences.empty()) throw std::invalid_argument("empty test set");
    validate_dataset(test);
    const int k = test.alphabet.size();
    const std::size_t n = test.size();
    std::vector<double> acc(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            acc[i] = 1.0 - online_pst_run(test.sequences[i], k, config).mean_loss;
    });
    EvalReport report;
    report.predictor_id = "onlinepst";
    report.per_sequence_accuracy = std::move(acc);
    finish(report);
    report.mean_wm_loss = 1.0 - report.mean_accuracy;
    report.mean_best_expert_loss = report.mean_wm_loss;
    report.mean_regret_bound = 0.0;
    return report;
}

double mean_online_accuracy(
    const Dataset& test,
    const std::function<Symbol(const Sequence&, std::size_t)>& predict) {
    if (test.sequences.empty()) throw std::invalid_argument("empty test set");
    double total = 0.0;
    for (const Sequence& x : test.sequences) {
        std::size_t correct = 0;
        for (std::size_t t = 1; t <= x.size(); ++t)
            if (predict(x, t) == x[t - 1]) ++correct;
        total += static_cast<double>(correct) / static_cast<double>(x.size());
    }
    return total / static_cast<double>(test.size());
}

}  // namespace lexseq
