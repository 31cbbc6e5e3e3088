#pragma once

#include <vector>

#include "lexseq/context_tree.hpp"
#include "lexseq/dataset.hpp"
#include "lexseq/rng.hpp"

namespace lexseq::test {

inline Sequence seq(std::initializer_list<Symbol> symbols) {
    return Sequence{std::vector<Symbol>(symbols)};
}

inline Sequence random_sequence(Rng& rng, int k, std::size_t len) {
    Sequence s;
    s.symbols.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
        s.symbols.push_back(static_cast<Symbol>(1 + uniform_below(rng, static_cast<std::uint64_t>(k))));
    return s;
}

inline Dataset random_dataset(Rng& rng, int k, std::size_t m, std::size_t max_len) {
    Dataset ds{Alphabet::identity(k), {}};
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t len = 1 + uniform_below(rng, max_len);
        ds.sequences.push_back(random_sequence(rng, k, len));
    }
    return ds;
}

/// Tree grown by random gradient-style updates.
inline ContextTreeModel random_model(Rng& rng, int k, int updates, std::size_t max_prefix,
                                     int depth_cap = 0) {
    ContextTreeModel model(k, PenaltyProfile::quadratic(), depth_cap);
    std::vector<double> g(static_cast<std::size_t>(k));
    for (int u = 0; u < updates; ++u) {
        const Sequence prefix = random_sequence(rng, k, uniform_below(rng, max_prefix + 1));
        for (double& v : g) v = 2.0 * uniform01(rng) - 1.0;
        model.apply_update(prefix.symbols, g, uniform01(rng));
    }
    return model;
}

}  // namespace lexseq::test
