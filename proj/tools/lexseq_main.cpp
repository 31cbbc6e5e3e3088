// lexseq command line: synthetic data generation, training, online
// evaluation, learning curves and hyperparameter sweeps.
//
// Exit codes: 0 success, 2 usage error, 3 data/model format error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "lexseq/dataset.hpp"
#include "lexseq/error.hpp"
#include "lexseq/evaluate.hpp"
#include "lexseq/harness.hpp"
#include "lexseq/lex.hpp"
#include "lexseq/lmm.hpp"
#include "lexseq/online_pst.hpp"
#include "lexseq/synthetic.hpp"
#include "lexseq/text.hpp"

namespace {

using namespace lexseq;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// Loads a dataset for training/evaluation. Files whose tokens are all
/// positive integers are treated as encoded symbol indices; anything else
/// is tokenized against the given vocabulary (or a fresh first-appearance
/// one).
Dataset load_any_dataset(const std::string& path, const std::string& vocab_path) {
    if (!vocab_path.empty()) return load_dataset_raw(path, load_vocab(vocab_path));
    if (looks_encoded(path)) return load_dataset_encoded(path);
    return load_dataset_raw(path);
}

int run_gen(const SyntheticConfig& cfg, const std::string& out, const std::string& labels_out) {
    const SyntheticData data = gen_synthetic(cfg);
    save_dataset(out, data.dataset);
    if (!labels_out.empty()) {
        std::string text;
        for (int label : data.type_labels) {
            text += std::to_string(label);
            text += '\n';
        }
        write_text_file(labels_out, text);
    }
    return 0;
}

struct TrainArgs {
    std::string algo;
    std::string data;
    std::string vocab;
    std::string save_vocab;
    std::string out;
    TrainConfig lex;
    LmmFitOptions lmm;
    bool no_augment = false;
};

int run_train(const TrainArgs& args) {
    const Dataset dataset = load_any_dataset(args.data, args.vocab);
    if (!args.save_vocab.empty()) save_vocab(args.save_vocab, dataset.alphabet);

    if (args.algo == "lmm") {
        const LmmFitResult fit = lmm_em_fit(dataset, args.lmm);
        save_lmm(args.out, fit.model);
        std::printf("lmm: %d iterations, final log-likelihood %s\n", fit.iterations,
                    format_double(fit.loglik_trace.back()).c_str());
        return 0;
    }

    TrainConfig cfg = args.lex;
    if (args.algo == "onelex") cfg.experts = 1;
    TrainResult result = train_lex(dataset, cfg);
    if (args.algo == "lex" && !args.no_augment) augment_pool(result.pool, dataset, cfg);
    save_pool(args.out, result.pool);
    std::printf("%s: %d experts, %d outer iterations, objective %s\n", args.algo.c_str(),
                result.pool.size(), result.trace.outer_iterations,
                format_double(result.trace.after_e_step.empty()
                                  ? result.trace.initial_objective
                                  : result.trace.after_e_step.back())
                    .c_str());
    return 0;
}

struct EvalArgs {
    std::string algo;
    std::string model;
    std::string data;
    std::string vocab;
    std::string out;
    std::string mode = "expected";
    std::uint64_t seed = 0;
    OnlinePstConfig pst;
    bool horizon_eta = false;
    bool timing = false;
};

int run_eval(const EvalArgs& args) {
    const Dataset test = load_any_dataset(args.data, args.vocab);
    EvalOptions options;
    options.mode = args.mode == "sampled" ? WmMode::Sampled : WmMode::Expected;
    options.seed = args.seed;
    options.anytime_eta = !args.horizon_eta;

    const double t0 = now_ms();
    EvalReport report;
    if (args.algo == "lex" || args.algo == "onelex") {
        if (args.model.empty()) throw CLI::ValidationError("--model is required for " + args.algo);
        const ExpertPool pool = load_pool(args.model);
        report = evaluate_pool(pool, test, options);
        report.predictor_id = args.algo;
    } else if (args.algo == "lmm") {
        if (args.model.empty()) throw CLI::ValidationError("--model is required for lmm");
        report = evaluate_lmm(load_lmm(args.model), test);
    } else {
        report = evaluate_online_pst(args.pst, test);
    }
    if (args.timing) report.wall_ms = now_ms() - t0;

    const CurveRow row = report_to_row(report, 0, 0, args.seed);
    write_text_file(args.out, curve_csv({row}));
    std::printf("%s: mean online accuracy %s over %zu sequences\n", report.predictor_id.c_str(),
                format_double(report.mean_accuracy).c_str(), test.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexseq: learned expert pools for online sequence prediction"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------
    SyntheticConfig gen_cfg;
    std::string gen_out;
    std::string gen_labels;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic two-type dataset");
    gen->add_option("--k", gen_cfg.k, "alphabet size")->capture_default_str();
    gen->add_option("--m", gen_cfg.m, "number of sequences")->capture_default_str();
    gen->add_option("--t", gen_cfg.t, "sequence length")->capture_default_str();
    gen->add_option("--seed", gen_cfg.seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output dataset file")->required();
    gen->add_option("--labels", gen_labels, "also write hidden type labels here");

    // --- train -------------------------------------------------------
    TrainArgs train_args;
    int train_depth = 5;
    CLI::App* train = app.add_subcommand("train", "train a predictor on a dataset");
    train->add_option("--algo", train_args.algo, "lex | onelex | lmm")
        ->required()
        ->check(CLI::IsMember({"lex", "onelex", "lmm"}));
    train->add_option("--data", train_args.data, "training dataset file")->required();
    train->add_option("--vocab", train_args.vocab, "vocabulary file for raw-token data");
    train->add_option("--save-vocab", train_args.save_vocab,
                      "write the vocabulary used for encoding here");
    train->add_option("--out", train_args.out, "output model file")->required();
    train->add_option("--r", train_args.lex.experts, "number of experts / chain types")
        ->capture_default_str();
    train->add_option("--b", train_args.lex.norm_budget, "norm budget B")->capture_default_str();
    train->add_option("--d", train_depth,
                      "tree depth cap (lex family, 0 = unbounded) or Markov order (lmm)")
        ->capture_default_str();
    train->add_option("--alpha", train_args.lmm.alpha, "lmm smoothing")->capture_default_str();
    train->add_option("--eta0", train_args.lex.sgd_eta0, "SGD base step")->capture_default_str();
    train->add_option("--epochs", train_args.lex.sgd_epochs, "SGD epochs per alternation")
        ->capture_default_str();
    train->add_option("--outer", train_args.lex.outer_iters, "max outer alternations")
        ->capture_default_str();
    train->add_option("--em-iters", train_args.lmm.max_iters, "max EM iterations")
        ->capture_default_str();
    train->add_option("--seed", train_args.lex.seed, "training seed")->capture_default_str();
    train->add_flag("--no-augment", train_args.no_augment,
                    "skip the extra full-data expert appended to lex pools");

    // --- eval --------------------------------------------------------
    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate online prediction on a test set");
    eval->add_option("--algo", eval_args.algo, "lex | onelex | lmm | onlinepst")
        ->required()
        ->check(CLI::IsMember({"lex", "onelex", "lmm", "onlinepst"}));
    eval->add_option("--model", eval_args.model, "model file (not used by onlinepst)");
    eval->add_option("--data", eval_args.data, "test dataset file")->required();
    eval->add_option("--vocab", eval_args.vocab, "vocabulary file for raw-token data");
    eval->add_option("--mode", eval_args.mode, "expected | sampled")
        ->capture_default_str()
        ->check(CLI::IsMember({"expected", "sampled"}));
    eval->add_option("--seed", eval_args.seed, "seed for sampled mode")->capture_default_str();
    eval->add_option("--out", eval_args.out, "output CSV file")->required();
    eval->add_option("--b", eval_args.pst.norm_budget, "online PST norm budget")
        ->capture_default_str();
    eval->add_option("--eta0", eval_args.pst.eta0, "online PST base step")->capture_default_str();
    eval->add_option("--cap", eval_args.pst.depth_cap, "online PST depth cap (0 = unbounded)")
        ->capture_default_str();
    eval->add_flag("--horizon-eta", eval_args.horizon_eta,
                   "use the fixed rate sqrt(log r / T) instead of the anytime schedule");
    eval->add_flag("--timing", eval_args.timing, "record wall time in the CSV");

    // --- curve -------------------------------------------------------
    HarnessConfig curve_cfg = desk_profile();
    std::vector<int> curve_sizes;
    std::string curve_out;
    bool paper_scale = false;
    bool curve_sampled = false;
    CLI::App* curve = app.add_subcommand(
        "curve", "learning curves for all four predictors on synthetic data");
    curve->add_option("--sizes", curve_sizes, "training sizes (ascending)")->delimiter(',');
    curve->add_option("--trials", curve_cfg.trials, "trials per size")->capture_default_str();
    curve->add_option("--out", curve_out, "output CSV file")->required();
    curve->add_option("--k", curve_cfg.k, "alphabet size")->capture_default_str();
    curve->add_option("--t", curve_cfg.seq_len, "sequence length")->capture_default_str();
    curve->add_option("--train-m", curve_cfg.train_m, "training pool size")
        ->capture_default_str();
    curve->add_option("--test-m", curve_cfg.test_m, "test set size")->capture_default_str();
    curve->add_option("--seed", curve_cfg.seed, "master seed")->capture_default_str();
    curve->add_option("--r", curve_cfg.lex.experts, "lex expert count")->capture_default_str();
    curve->add_option("--b", curve_cfg.lex.norm_budget, "lex norm budget")
        ->capture_default_str();
    curve->add_option("--d", curve_cfg.lex.depth_cap, "lex depth cap")->capture_default_str();
    curve->add_option("--eta0", curve_cfg.lex.sgd_eta0, "lex SGD base step")
        ->capture_default_str();
    curve->add_option("--epochs", curve_cfg.lex.sgd_epochs, "lex SGD epochs")
        ->capture_default_str();
    curve->add_option("--lmm-r", curve_cfg.lmm.components, "lmm chain types")
        ->capture_default_str();
    curve->add_option("--lmm-d", curve_cfg.lmm.order, "lmm Markov order")
        ->capture_default_str();
    curve->add_option("--lmm-alpha", curve_cfg.lmm.alpha, "lmm smoothing")
        ->capture_default_str();
    curve->add_option("--pst-eta0", curve_cfg.pst.eta0, "online PST base step")
        ->capture_default_str();
    curve->add_flag("--paper-scale", paper_scale,
                    "full-scale profile: k=200, T=250, 1000 train / 400 test (slow)");
    curve->add_flag("--no-augment", "train lex pools without the extra full-data expert");
    curve->add_flag("--sampled", curve_sampled,
                    "score pools with the randomized forecaster instead of expected mode");
    curve->add_flag("--timing", curve_cfg.timing, "record wall times in the CSV");

    // --- sweep -------------------------------------------------------
    std::string sweep_grid_path;
    std::string sweep_data;
    std::string sweep_vocab;
    std::string sweep_out;
    int sweep_folds = 5;
    std::uint64_t sweep_seed = 1;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "cross-validated hyperparameter grid search");
    sweep_cmd->add_option("--grid", sweep_grid_path, "grid file")->required();
    sweep_cmd->add_option("--data", sweep_data, "training dataset file")->required();
    sweep_cmd->add_option("--vocab", sweep_vocab, "vocabulary file for raw-token data");
    sweep_cmd->add_option("--folds", sweep_folds, "cross-validation folds")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_seed, "sweep seed")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "output CSV file")->required();

    try {
        app.parse(argc, argv);

        if (gen->parsed()) return run_gen(gen_cfg, gen_out, gen_labels);
        if (train->parsed()) {
            // --d means the depth cap for the tree family and the Markov
            // order for lmm; the lmm order defaults to 1 when unset.
            train_args.lex.depth_cap = train_depth;
            train_args.lmm.order = train->count("--d") > 0 ? train_depth : 1;
            train_args.lmm.components = train_args.lex.experts;
            train_args.lmm.seed = train_args.lex.seed;
            return run_train(train_args);
        }
        if (eval->parsed()) return run_eval(eval_args);
        if (curve->parsed()) {
            if (paper_scale) {
                HarnessConfig full = full_scale_profile();
                full.trials = curve_cfg.trials;
                full.seed = curve_cfg.seed;
                full.timing = curve_cfg.timing;
                curve_cfg = full;
            }
            if (!curve_sizes.empty()) curve_cfg.sizes = curve_sizes;
            if (curve->count("--no-augment") > 0) curve_cfg.augment = false;
            curve_cfg.sampled = curve_sampled;
            const auto rows = learning_curve(curve_cfg);
            write_text_file(curve_out, curve_csv(rows));
            // per-(algo, size) mean and standard deviation over trials
            std::map<std::pair<std::string, int>, std::vector<double>> cells;
            for (const auto& row : rows)
                cells[{row.algo, row.train_size}].push_back(row.accuracy);
            for (const char* algo : {"lex", "onelex", "lmm", "onlinepst"}) {
                for (int size : curve_cfg.sizes) {
                    const auto& acc = cells[{algo, size}];
                    double mean = 0.0;
                    for (double a : acc) mean += a;
                    mean /= static_cast<double>(acc.size());
                    double var = 0.0;
                    for (double a : acc) var += (a - mean) * (a - mean);
                    var /= static_cast<double>(acc.size());
                    std::printf("%-9s size %5d: accuracy %.4f +/- %.4f over %zu trials\n",
                                algo, size, mean, std::sqrt(var), acc.size());
                }
            }
            std::printf("wrote %zu rows to %s\n", rows.size(), curve_out.c_str());
            return 0;
        }
        if (sweep_cmd->parsed()) {
            const SweepGrid grid = parse_grid(read_text_file(sweep_grid_path));
            const Dataset data = load_any_dataset(sweep_data, sweep_vocab);
            const SweepResult result = sweep(grid, data, sweep_folds, sweep_seed);
            write_text_file(sweep_out, sweep_csv(grid.algo, result.rows));
            std::printf("best %s config: r=%d b=%s d=%d alpha=%s eta0=%s epochs=%d (accuracy %s)\n",
                        grid.algo.c_str(), result.best.r,
                        format_double(result.best.b).c_str(), result.best.d,
                        format_double(result.best.alpha).c_str(),
                        format_double(result.best.eta0).c_str(), result.best.epochs,
                        format_double(result.best_accuracy).c_str());
            return 0;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const lexseq::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
