#include "lexseq/synthetic.hpp"

#include <map>
#include <stdexcept>

#include "lexseq/rng.hpp"

namespace lexseq {

SyntheticData gen_synthetic(const SyntheticConfig& config) {
    if (config.k < 2) throw std::invalid_argument("need k >= 2");
    if (config.m < 1 || config.t < 1) throw std::invalid_argument("need m >= 1 and t >= 1");

    Rng rng(config.seed);
    SyntheticData data{{Alphabet::identity(config.k), {}}, {}};
    data.dataset.sequences.reserve(static_cast<std::size_t>(config.m));
    data.type_labels.reserve(static_cast<std::size_t>(config.m));

    for (int i = 0; i < config.m; ++i) {
        const Symbol type = static_cast<Symbol>(1 + uniform_below(rng, 2));
        data.type_labels.push_back(type);
        Sequence seq;
        seq.symbols.reserve(static_cast<std::size_t>(config.t));
        for (int t = 0; t < config.t; ++t) {
            if (uniform01(rng) < 0.5) {
                seq.symbols.push_back(type);
            } else {
                const Symbol other =
                    static_cast<Symbol>(1 + uniform_below(rng, static_cast<std::uint64_t>(config.k - 1)));
                seq.symbols.push_back(other < type ? other : other + 1);
            }
        }
        data.dataset.sequences.push_back(std::move(seq));
    }
    return data;
}

double assignment_purity(const std::vector<int>& assignment, const std::vector<int>& labels,
                         int clusters) {
    if (assignment.size() != labels.size() || assignment.empty())
        throw std::invalid_argument("assignment and labels must align");
    std::map<int, std::map<int, std::size_t>> counts;
    for (int c = 1; c <= clusters; ++c) counts[c];
    for (std::size_t i = 0; i < assignment.size(); ++i)
        ++counts[assignment[i]][labels[i]];
    std::size_t agree = 0;
    for (const auto& [cluster, by_label] : counts) {
        std::size_t best = 0;
        for (const auto& [label, n] : by_label) best = std::max(best, n);
        agree += best;
    }
    return static_cast<double>(agree) / static_cast<double>(assignment.size());
}

}  // namespace lexseq
