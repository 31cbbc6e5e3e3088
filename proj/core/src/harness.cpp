#include "lexseq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/rng.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Dataset head(const Dataset& dataset, int n) {
    Dataset out{dataset.alphabet, {}};
    out.sequences.assign(dataset.sequences.begin(), dataset.sequences.begin() + n);
    return out;
}

}  // namespace

HarnessConfig desk_profile() {
    HarnessConfig cfg;
    cfg.k = 20;
    cfg.seq_len = 100;
    cfg.train_m = 300;
    cfg.test_m = 100;
    cfg.sizes = {10, 25, 50, 100, 200};
    cfg.trials = 5;

    cfg.lex.experts = 2;
    cfg.lex.norm_budget = 10.0;
    cfg.lex.depth_cap = 5;
    cfg.lex.sgd_eta0 = 1.0;
    cfg.lex.sgd_epochs = 2;

    cfg.lmm.components = 2;
    cfg.lmm.order = 2;
    cfg.lmm.alpha = 0.1;

    // The online baseline keeps the class's unbounded histories (a single
    // sequence stays cheap) and the trainer's step scale and ball.
    cfg.pst.norm_budget = 10.0;
    cfg.pst.depth_cap = 0;
    cfg.pst.eta0 = 1.0;
    return cfg;
}

HarnessConfig full_scale_profile() {
    HarnessConfig cfg = desk_profile();
    cfg.k = 200;
    cfg.seq_len = 250;
    cfg.train_m = 1000;
    cfg.test_m = 400;
    cfg.sizes = {50, 100, 200, 500, 1000};
    cfg.lex.depth_cap = 3;  // k^2 contexts already dwarf the data at this scale
    return cfg;
}

CurveRow report_to_row(const EvalReport& report, int train_size, int trial,
                       std::uint64_t seed) {
    CurveRow row;
    row.algo = report.predictor_id;
    row.train_size = train_size;
    row.trial = trial;
    row.seed = seed;
    row.accuracy = report.mean_accuracy;
    row.wm_avg_loss = report.mean_wm_loss;
    row.best_expert_loss = report.mean_best_expert_loss;
    row.regret_bound = report.mean_regret_bound;
    row.wall_ms = report.wall_ms;
    return row;
}

std::vector<CurveRow> learning_curve(const HarnessConfig& config) {
    if (config.sizes.empty() || config.trials < 1)
        throw std::invalid_argument("need at least one size and one trial");
    if (!std::is_sorted(config.sizes.begin(), config.sizes.end()))
        throw std::invalid_argument("sizes must be ascending");
    if (config.sizes.back() > config.train_m)
        throw std::invalid_argument("size exceeds available training data");
    if (config.sizes.front() < 1) throw std::invalid_argument("sizes must be >= 1");

    const SyntheticData train = gen_synthetic(
        {config.k, config.train_m, config.seq_len, derive_seed(config.seed, 1)});
    const SyntheticData test = gen_synthetic(
        {config.k, config.test_m, config.seq_len, derive_seed(config.seed, 2)});

    // The online baseline ignores the training pool entirely: one run
    // serves every (size, trial) cell.
    double pst_start = now_ms();
    EvalReport pst_report = evaluate_online_pst(config.pst, test.dataset);
    if (config.timing) pst_report.wall_ms = now_ms() - pst_start;

    std::vector<CurveRow> rows;
    rows.reserve(config.sizes.size() * static_cast<std::size_t>(config.trials) * 4);
    for (int size : config.sizes) {
        const Dataset subset = head(train.dataset, size);
        for (int trial = 1; trial <= config.trials; ++trial) {
            const std::uint64_t trial_seed = derive_seed(config.seed, 3, static_cast<std::uint64_t>(trial));

            EvalOptions eval_opt;
            eval_opt.mode = config.sampled ? WmMode::Sampled : WmMode::Expected;
            eval_opt.seed = trial_seed;

            TrainConfig lex_cfg = config.lex;
            lex_cfg.seed = trial_seed;
            double t0 = now_ms();
            TrainResult lex = train_lex(subset, lex_cfg);
            if (config.augment) augment_pool(lex.pool, subset, lex_cfg);
            EvalReport lex_rep = evaluate_pool(lex.pool, test.dataset, eval_opt);
            if (config.timing) lex_rep.wall_ms = now_ms() - t0;
            lex_rep.predictor_id = "lex";
            rows.push_back(report_to_row(lex_rep, size, trial, trial_seed));

            t0 = now_ms();
            TrainResult one = train_onelex(subset, lex_cfg);
            EvalReport one_rep = evaluate_pool(one.pool, test.dataset, eval_opt);
            if (config.timing) one_rep.wall_ms = now_ms() - t0;
            rows.push_back(report_to_row(one_rep, size, trial, trial_seed));

            LmmFitOptions lmm_cfg = config.lmm;
            lmm_cfg.seed = trial_seed;
            t0 = now_ms();
            LmmFitResult lmm = lmm_em_fit(subset, lmm_cfg);
            EvalReport lmm_rep = evaluate_lmm(lmm.model, test.dataset);
            if (config.timing) lmm_rep.wall_ms = now_ms() - t0;
            rows.push_back(report_to_row(lmm_rep, size, trial, trial_seed));

            rows.push_back(report_to_row(pst_report, size, trial, trial_seed));
        }
    }
    return rows;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string out =
        "algo,train_size,trial,seed,accuracy,wm_avg_loss,best_expert_loss,regret_bound,"
        "wall_ms\n";
    for (const auto& r : rows) {
        out += r.algo;
        out += ',';
        out += std::to_string(r.train_size);
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.accuracy);
        out += ',';
        out += format_double(r.wm_avg_loss);
        out += ',';
        out += format_double(r.best_expert_loss);
        out += ',';
        out += format_double(r.regret_bound);
        out += ',';
        out += format_double(r.wall_ms);
        out += '\n';
    }
    return out;
}

SweepGrid parse_grid(const std::string& text) {
    SweepGrid grid;
    bool saw_any = false;
    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (!line.empty() && line.front() == '#') continue;
        const auto toks = split_tokens(line);
        if (toks.empty()) continue;
        const std::string key(toks[0]);
        const auto parse_ints = [&](std::vector<int>& out) {
            out.clear();
            for (std::size_t i = 1; i < toks.size(); ++i) {
                std::uint64_t v = 0;
                if (!parse_u64(toks[i], v))
                    throw ParseError("expected integer for '" + key + "'", line_no);
                out.push_back(static_cast<int>(v));
            }
        };
        const auto parse_doubles = [&](std::vector<double>& out) {
            out.clear();
            for (std::size_t i = 1; i < toks.size(); ++i) {
                double v = 0.0;
                if (!parse_double(toks[i], v))
                    throw ParseError("expected number for '" + key + "'", line_no);
                out.push_back(v);
            }
        };
        if (key == "algo") {
            if (toks.size() != 2) throw ParseError("algo takes one value", line_no);
            grid.algo = std::string(toks[1]);
            if (grid.algo != "lex" && grid.algo != "onelex" && grid.algo != "lmm")
                throw ParseError("unknown algo '" + grid.algo + "'", line_no);
        } else if (key == "r") {
            parse_ints(grid.r);
        } else if (key == "b") {
            parse_doubles(grid.b);
        } else if (key == "d") {
            parse_ints(grid.d);
        } else if (key == "alpha") {
            parse_doubles(grid.alpha);
        } else if (key == "eta0") {
            parse_doubles(grid.eta0);
        } else if (key == "epochs") {
            parse_ints(grid.epochs);
        } else {
            throw ParseError("unknown grid key '" + key + "'", line_no);
        }
        saw_any = true;
    }
    if (!saw_any) throw Error("empty sweep grid");
    const auto check_nonempty = [](const auto& v, const char* name) {
        if (v.empty()) throw Error(std::string("grid list '") + name + "' is empty");
    };
    check_nonempty(grid.r, "r");
    check_nonempty(grid.b, "b");
    check_nonempty(grid.d, "d");
    check_nonempty(grid.alpha, "alpha");
    check_nonempty(grid.eta0, "eta0");
    check_nonempty(grid.epochs, "epochs");
    std::sort(grid.r.begin(), grid.r.end());
    std::sort(grid.b.begin(), grid.b.end());
    std::sort(grid.d.begin(), grid.d.end());
    std::sort(grid.alpha.begin(), grid.alpha.end());
    std::sort(grid.eta0.begin(), grid.eta0.end());
    std::sort(grid.epochs.begin(), grid.epochs.end());
    return grid;
}

namespace {

double point_accuracy(const std::string& algo, const SweepPoint& p, const Dataset& fit,
                      const Dataset& val, std::uint64_t seed) {
    if (algo == "lmm") {
        LmmFitOptions opt;
        opt.components = p.r;
        opt.order = p.d;
        opt.alpha = p.alpha;
        opt.seed = seed;
        return evaluate_lmm(lmm_em_fit(fit, opt).model, val).mean_accuracy;
    }
    TrainConfig cfg;
    cfg.experts = algo == "onelex" ? 1 : p.r;
    cfg.norm_budget = p.b;
    cfg.depth_cap = p.d;
    cfg.sgd_eta0 = p.eta0;
    cfg.sgd_epochs = p.epochs;
    cfg.seed = seed;
    TrainResult result = train_lex(fit, cfg);
    if (algo == "lex") augment_pool(result.pool, fit, cfg);
    return evaluate_pool(result.pool, val).mean_accuracy;
}

template <typename FoldFn>
SweepResult sweep_impl(const SweepGrid& grid, int folds, FoldFn&& fold_data,
                       std::uint64_t seed) {
    SweepResult result;
    result.best_accuracy = -1.0;
    std::uint64_t point_index = 0;
    for (int r : grid.r)
        for (double b : grid.b)
            for (int d : grid.d)
                for (double alpha : grid.alpha)
                    for (double eta0 : grid.eta0)
                        for (int epochs : grid.epochs) {
                            const SweepPoint point{r, b, d, alpha, eta0, epochs};
                            ++point_index;
                            double mean = 0.0;
                            for (int f = 0; f < folds; ++f) {
                                const auto [fit, val] = fold_data(f);
                                const double acc = point_accuracy(
                                    grid.algo, point, fit, val,
                                    derive_seed(seed, point_index, static_cast<std::uint64_t>(f)));
                                result.rows.push_back({point, f, acc});
                                mean += acc;
                            }
                            mean /= static_cast<double>(folds);
                            result.rows.push_back({point, -1, mean});
                            if (mean > result.best_accuracy) {
                                result.best_accuracy = mean;
                                result.best = point;
                            }
                        }
    return result;
}

}  // namespace

SweepResult sweep(const SweepGrid& grid, const Dataset& train, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("need at least 2 folds");
    if (train.size() < static_cast<std::size_t>(folds))
        throw std::invalid_argument("fewer sequences than folds");
    return sweep_impl(
        grid, folds,
        [&](int f) {
            Dataset fit{train.alphabet, {}};
            Dataset val{train.alphabet, {}};
            for (std::size_t i = 0; i < train.size(); ++i) {
                if (static_cast<int>(i % static_cast<std::size_t>(folds)) == f)
                    val.sequences.push_back(train.sequences[i]);
                else
                    fit.sequences.push_back(train.sequences[i]);
            }
            return std::pair<Dataset, Dataset>(std::move(fit), std::move(val));
        },
        seed);
}

SweepResult sweep(const SweepGrid& grid, const Dataset& train, const Dataset& validation,
                  std::uint64_t seed) {
    return sweep_impl(
        grid, 1, [&](int) { return std::pair<Dataset, Dataset>(train, validation); }, seed);
}

std::string sweep_csv(const std::string& algo, const std::vector<SweepRow>& rows) {
    std::string out = "algo,r,b,d,alpha,eta0,epochs,fold,accuracy\n";
    for (const auto& row : rows) {
        out += algo;
        out += ',';
        out += std::to_string(row.point.r);
        out += ',';
        out += format_double(row.point.b);
        out += ',';
        out += std::to_string(row.point.d);
        out += ',';
        out += format_double(row.point.alpha);
        out += ',';
        out += format_double(row.point.eta0);
        out += ',';
        out += std::to_string(row.point.epochs);
        out += ',';
        out += std::to_string(row.fold);
        out += ',';
        out += format_double(row.accuracy);
        out += '\n';
    }
    return out;
}

}  // namespace lexseq
