#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexseq/evaluate.hpp"
#include "lexseq/lex.hpp"
#include "lexseq/lmm.hpp"
#include "lexseq/online_pst.hpp"
#include "lexseq/synthetic.hpp"

namespace lexseq {

/// Everything a learning-curve run needs: the generator, the four
/// predictor configurations, the sizes to sweep and the trial count.
struct HarnessConfig {
    int k = 20;
    int seq_len = 100;
    int train_m = 300;
    int test_m = 100;
    std::vector<int> sizes{10, 25, 50, 100, 200};
    int trials = 5;
    std::uint64_t seed = 1;

    TrainConfig lex;            // lex.experts is r; onelex reuses this with r = 1
    bool augment = true;        // append a full-data single expert to the lex pool
    LmmFitOptions lmm;
    OnlinePstConfig pst;
    bool sampled = false;       // score pools with the randomized forecaster (seeded)
    bool timing = false;        // fill wall_ms from the clock (breaks byte determinism)
};

/// Fast profile: same generator structure as the full-scale run but sized
/// to finish in seconds.
HarnessConfig desk_profile();

/// Full-scale profile (k=200, T=250, 1000 train / 400 test sequences).
HarnessConfig full_scale_profile();

struct CurveRow {
    std::string algo;  // lex | onelex | lmm | onlinepst
    int train_size = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double wm_avg_loss = 0.0;
    double best_expert_loss = 0.0;
    double regret_bound = 0.0;
    double wall_ms = 0.0;
};

/// Trains all four predictors at every (size, trial) on prefixes of a
/// fixed training pool and scores them on a fixed held-out test set.
/// The online PST rows do not depend on the training size by construction.
std::vector<CurveRow> learning_curve(const HarnessConfig& config);

/// CSV with the canonical report schema.
std::string curve_csv(const std::vector<CurveRow>& rows);
CurveRow report_to_row(const EvalReport& report, int train_size, int trial, std::uint64_t seed);

// ---- hyperparameter sweeps ----------------------------------------------

/// Candidate lists for one algorithm. Lists are normalized to ascending
/// order so grid enumeration is lexicographic.
struct SweepGrid {
    std::string algo = "lex";      // lex | onelex | lmm
    std::vector<int> r{2};
    std::vector<double> b{10.0};
    std::vector<int> d{0};         // depth cap (lex family) or Markov order (lmm)
    std::vector<double> alpha{0.1};
    std::vector<double> eta0{1.0};
    std::vector<int> epochs{2};
};

/// Grid file: "key value..." lines, '#' comments. Keys: algo, r, b, d,
/// alpha, eta0, epochs.
SweepGrid parse_grid(const std::string& text);

struct SweepPoint {
    int r = 2;
    double b = 10.0;
    int d = 0;
    double alpha = 0.1;
    double eta0 = 1.0;
    int epochs = 2;
};

struct SweepRow {
    SweepPoint point;
    int fold = 0;  // -1 marks the across-folds mean row
    double accuracy = 0.0;
};

struct SweepResult {
    SweepPoint best;
    double best_accuracy = 0.0;
    std::vector<SweepRow> rows;
};

/// Cross-validated grid evaluation: fold f holds out indices i with
/// i % folds == f. The winner maximizes mean validation accuracy; ties go
/// to the lexicographically smallest point in (r, b, d, alpha, eta0,
/// epochs) order.
SweepResult sweep(const SweepGrid& grid, const Dataset& train, int folds, std::uint64_t seed);

/// Same with one explicit validation set (a single fold).
SweepResult sweep(const SweepGrid& grid, const Dataset& train, const Dataset& validation,
                  std::uint64_t seed);

std::string sweep_csv(const std::string& algo, const std::vector<SweepRow>& rows);

}  // namespace lexseq
