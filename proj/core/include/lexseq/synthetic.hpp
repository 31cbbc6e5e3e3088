#pragma once

#include <cstdint>
#include <vector>

#include "lexseq/dataset.hpp"

namespace lexseq {

/// Two-type generator: each sequence picks a hidden type j in {1, 2}, then
/// draws T i.i.d. symbols with Pr(x = j) = 1/2 and every other symbol
/// getting 1/(2(k-1)). Note that at k = 2 the two types coincide with the
/// uniform distribution and nothing is learnable beyond chance.
struct SyntheticConfig {
    int k = 20;
    int m = 400;              // sequence count
    int t = 100;              // length of every sequence
    std::uint64_t seed = 1;
};

struct SyntheticData {
    Dataset dataset;                 // identity alphabet over [k]
    std::vector<int> type_labels;    // hidden types, diagnostics only
};

SyntheticData gen_synthetic(const SyntheticConfig& config);

/// Fraction of sequences whose cluster's majority label matches their own;
/// a post-hoc diagnostic over hidden labels, never visible to learners.
double assignment_purity(const std::vector<int>& assignment, const std::vector<int>& labels,
                         int clusters);

}  // namespace lexseq
