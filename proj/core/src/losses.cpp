#include "lexseq/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace lexseq {

namespace {

void check_label(std::size_t k, Symbol y) {
    if (y < 1 || static_cast<std::size_t>(y) > k)
        throw std::invalid_argument("label out of range");
}

}  // namespace

double log_loss(std::span<const double> z, Symbol y) {
    check_label(z.size(), y);
    const double zy = z[static_cast<std::size_t>(y - 1)];
    double max_term = 0.0;  // the y'=y term is exp(0)
    for (std::size_t c = 0; c < z.size(); ++c) {
        if (static_cast<Symbol>(c + 1) == y) continue;
        max_term = std::max(max_term, 1.0 + z[c] - zy);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double term = static_cast<Symbol>(c + 1) == y ? 0.0 : 1.0 + z[c] - zy;
        sum += std::exp(term - max_term);
    }
    return max_term + std::log(sum);
}

std::vector<double> log_loss_grad(std::span<const double> z, Symbol y) {
    check_label(z.size(), y);
    const double zy = z[static_cast<std::size_t>(y - 1)];
    double max_term = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        if (static_cast<Symbol>(c + 1) == y) continue;
        max_term = std::max(max_term, 1.0 + z[c] - zy);
    }
    std::vector<double> p(z.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double term = static_cast<Symbol>(c + 1) == y ? 0.0 : 1.0 + z[c] - zy;
        p[c] = std::exp(term - max_term);
        sum += p[c];
    }
    for (std::size_t c = 0; c < z.size(); ++c) p[c] /= sum;
    p[static_cast<std::size_t>(y - 1)] -= 1.0;
    return p;
}

double zero_one(std::span<const double> z, Symbol y) {
    check_label(z.size(), y);
    return argmax_symbol(z) == y ? 0.0 : 1.0;
}

double sequence_loss(const ContextTreeModel& model, const Sequence& x, LossKind kind) {
    if (x.size() == 0) throw std::invalid_argument("sequence must be nonempty");
    double total = 0.0;
    for (std::size_t t = 1; t <= x.size(); ++t) {
        const auto z = model.predict_scores(x.prefix(t));
        const Symbol y = x[t - 1];
        total += kind == LossKind::LogLoss ? log_loss(z, y) : zero_one(z, y);
    }
    return total / static_cast<double>(x.size());
}

std::pair<double, int> hindsight_loss(std::span<const ContextTreeModel> pool, const Sequence& x,
                                      LossKind kind) {
    if (pool.empty()) throw std::invalid_argument("empty pool");
    double best = sequence_loss(pool[0], x, kind);
    int best_index = 1;
    for (std::size_t i = 1; i < pool.size(); ++i) {
        const double loss = sequence_loss(pool[i], x, kind);
        if (loss < best) {
            best = loss;
            best_index = static_cast<int>(i + 1);
        }
    }
    return {best, best_index};
}

}  // namespace lexseq
