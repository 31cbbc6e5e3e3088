#include "lexseq/online_pst.hpp"

#include <cmath>
#include <stdexcept>

#include "lexseq/losses.hpp"

namespace lexseq {

OnlinePstTrace online_pst_run(const Sequence& x, int k, const OnlinePstConfig& config) {
    if (x.size() == 0) throw std::invalid_argument("sequence must be nonempty");
    ContextTreeModel model(k, config.penalty, config.depth_cap);

    OnlinePstTrace trace;
    trace.predictions.reserve(x.size());
    trace.losses.reserve(x.size());
    double total = 0.0;
    for (std::size_t t = 1; t <= x.size(); ++t) {
        const auto prefix = x.prefix(t);
        const auto z = model.predict_scores(prefix);
        const Symbol guess = argmax_symbol(z);
        const Symbol truth = x[t - 1];
        trace.predictions.push_back(guess);
        trace.losses.push_back(guess == truth ? 0.0 : 1.0);
        total += trace.losses.back();

        if (!config.conservative || guess != truth) {
            const auto g = log_loss_grad(z, truth);
            const double rate = config.eta0 / std::sqrt(static_cast<double>(t));
            model.apply_update(prefix, g, rate);
            model.project_to_ball(config.norm_budget);
            if (config.validate_feasibility &&
                model.recompute_weighted_norm() > config.norm_budget + 1e-6)
                throw std::logic_error("online step left the norm ball");
        }
    }
    trace.mean_loss = total / static_cast<double>(x.size());
    return trace;
}

}  // namespace lexseq
