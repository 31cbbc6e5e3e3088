#include "lexseq/lex.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/parallel.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

namespace {

char hex_digit(std::uint64_t v) { return "0123456789abcdef"[v & 0xf]; }

/// Per-sequence log-loss of every expert, row-major m x r.
std::vector<double> loss_matrix(const ExpertPool& pool, const Dataset& dataset) {
    const std::size_t m = dataset.size();
    const std::size_t r = static_cast<std::size_t>(pool.size());
    std::vector<double> matrix(m * r);
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t e = 0; e < r; ++e)
                matrix[i * r + e] =
                    sequence_loss(pool.experts[e], dataset.sequences[i], LossKind::LogLoss);
    });
    return matrix;
}

Assignment argmin_rows(const std::vector<double>& matrix, std::size_t m, std::size_t r) {
    Assignment assignment(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = matrix.data() + i * r;
        int best = 0;
        for (std::size_t e = 1; e < r; ++e)
            if (row[e] < row[best]) best = static_cast<int>(e);
        assignment[i] = best + 1;
    }
    return assignment;
}

/// Moves the worst-fit sequence of a multi-sequence cluster into each
/// empty cluster so no expert trains on nothing.
void repair_empty_clusters(Assignment& assignment, const std::vector<double>& matrix,
                           std::size_t r) {
    const std::size_t m = assignment.size();
    std::vector<std::size_t> counts(r, 0);
    for (int a : assignment) ++counts[static_cast<std::size_t>(a - 1)];
    for (std::size_t e = 0; e < r; ++e) {
        if (counts[e] > 0) continue;
        std::size_t worst = m;
        double worst_loss = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t owner = static_cast<std::size_t>(assignment[i] - 1);
            if (counts[owner] < 2) continue;
            const double loss = matrix[i * r + owner];
            if (loss > worst_loss) {
                worst_loss = loss;
                worst = i;
            }
        }
        if (worst == m) continue;  // nothing movable; leave the cluster empty
        --counts[static_cast<std::size_t>(assignment[worst] - 1)];
        assignment[worst] = static_cast<int>(e + 1);
        ++counts[e];
    }
}

void check_compatible(const ExpertPool& pool, const Dataset& dataset) {
    if (pool.size() < 1) throw std::invalid_argument("empty pool");
    validate_dataset(dataset);  // workers must not throw
    if (dataset.alphabet.size() > pool.experts[0].k())
        throw Error("alphabet mismatch: pool covers " + std::to_string(pool.experts[0].k()) +
                    " symbols but the data uses " +
                    std::to_string(dataset.alphabet.size()));
}

void check_feasible(const ExpertPool& pool) {
    for (const auto& expert : pool.experts)
        if (expert.recompute_weighted_norm() > pool.norm_budget + 1e-6)
            throw std::logic_error("expert norm exceeds the ball after an M-step");
}

}  // namespace

std::string config_digest(const TrainConfig& c) {
    std::string canon = "r=" + std::to_string(c.experts) + ";b=" + format_double(c.norm_budget) +
                        ";penalty=" + c.penalty.tag() + ";cap=" + std::to_string(c.depth_cap) +
                        ";eta0=" + format_double(c.sgd_eta0) +
                        ";epochs=" + std::to_string(c.sgd_epochs) +
                        ";perpos=" + (c.per_position_updates ? "1" : "0") +
                        ";outer=" + std::to_string(c.outer_iters) +
                        ";tol=" + format_double(c.objective_tol) +
                        ";seed=" + std::to_string(c.seed);
    std::uint64_t h = fnv1a64(canon);
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = hex_digit(h);
        h >>= 4;
    }
    return hex;
}

double objective(const ExpertPool& pool, const Dataset& dataset) {
    if (pool.size() < 1 || dataset.size() == 0)
        throw std::invalid_argument("objective needs a nonempty pool and dataset");
    check_compatible(pool, dataset);
    const std::size_t m = dataset.size();
    std::vector<double> best(m);
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            best[i] = hindsight_loss(pool.span(), dataset.sequences[i], LossKind::LogLoss).first;
    });
    double total = 0.0;
    for (double v : best) total += v;
    return total / static_cast<double>(m);
}

double assigned_objective(const ExpertPool& pool, const Dataset& dataset,
                          const Assignment& assignment) {
    const std::size_t m = dataset.size();
    if (assignment.size() != m) throw std::invalid_argument("assignment length mismatch");
    check_compatible(pool, dataset);
    for (int a : assignment)
        if (a < 1 || a > pool.size()) throw std::invalid_argument("assignment out of range");
    std::vector<double> losses(m);
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const int a = assignment[i];
            losses[i] = sequence_loss(pool.experts[static_cast<std::size_t>(a - 1)],
                                      dataset.sequences[i], LossKind::LogLoss);
        }
    });
    double total = 0.0;
    for (double v : losses) total += v;
    return total / static_cast<double>(m);
}

Assignment init_assignment(std::size_t m, int r, std::uint64_t seed) {
    if (r < 1) throw std::invalid_argument("need r >= 1");
    if (m < static_cast<std::size_t>(r))
        throw std::invalid_argument("need at least as many sequences as experts (m < r)");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    deterministic_shuffle(order, rng);
    Assignment assignment(m, 1);
    for (std::size_t j = 0; j < m; ++j)
        assignment[order[j]] = static_cast<int>(j % static_cast<std::size_t>(r)) + 1;
    return assignment;
}

Assignment reassign(const ExpertPool& pool, const Dataset& dataset) {
    if (pool.size() < 1 || dataset.size() == 0)
        throw std::invalid_argument("reassign needs a nonempty pool and dataset");
    check_compatible(pool, dataset);
    const auto matrix = loss_matrix(pool, dataset);
    return argmin_rows(matrix, dataset.size(), static_cast<std::size_t>(pool.size()));
}

void sgd_epoch(ContextTreeModel& expert, std::span<const Sequence* const> sequences,
               const TrainConfig& config, Rng& rng, std::uint64_t& update_count) {
    if (sequences.empty()) throw std::invalid_argument("sgd_epoch needs sequences");
    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    deterministic_shuffle(order, rng);

    std::vector<std::vector<double>> grads;
    for (std::size_t idx : order) {
        const Sequence& x = *sequences[idx];
        const std::size_t horizon = x.size();
        if (config.per_position_updates) {
            for (std::size_t t = 1; t <= horizon; ++t) {
                ++update_count;
                const double rate = config.sgd_eta0 / std::sqrt(static_cast<double>(update_count));
                const auto z = expert.predict_scores(x.prefix(t));
                const auto g = log_loss_grad(z, x[t - 1]);
                expert.apply_update(x.prefix(t), g, rate);
            }
        } else {
            // Gradient of the whole-sequence average loss at the current
            // parameters, then a single step.
            grads.resize(horizon);
            for (std::size_t t = 1; t <= horizon; ++t) {
                const auto z = expert.predict_scores(x.prefix(t));
                grads[t - 1] = log_loss_grad(z, x[t - 1]);
            }
            ++update_count;
            const double rate = config.sgd_eta0 / std::sqrt(static_cast<double>(update_count));
            const double step = rate / static_cast<double>(horizon);
            for (std::size_t t = 1; t <= horizon; ++t)
                expert.apply_update(x.prefix(t), grads[t - 1], step);
        }
        expert.project_to_ball(config.norm_budget);
    }
}

TrainResult train_lex(const Dataset& dataset, const TrainConfig& config) {
    validate_dataset(dataset);
    if (config.experts < 1) throw std::invalid_argument("need r >= 1");
    if (dataset.size() < static_cast<std::size_t>(config.experts))
        throw std::invalid_argument("need at least as many sequences as experts (m < r)");
    if (!(config.norm_budget > 0.0)) throw std::invalid_argument("norm budget must be positive");

    const std::size_t m = dataset.size();
    const std::size_t r = static_cast<std::size_t>(config.experts);

    TrainResult result;
    result.pool.norm_budget = config.norm_budget;
    result.pool.provenance = config_digest(config);
    for (std::size_t e = 0; e < r; ++e)
        result.pool.experts.emplace_back(dataset.alphabet.size(), config.penalty,
                                         config.depth_cap);

    result.assignment = init_assignment(m, config.experts, config.seed);
    result.trace.initial_objective =
        assigned_objective(result.pool, dataset, result.assignment);

    std::vector<std::uint64_t> update_counts(r, 0);
    double previous_objective = result.trace.initial_objective;

    for (int outer = 1; outer <= config.outer_iters; ++outer) {
        result.trace.outer_iterations = outer;

        // M-step: per-expert SGD epochs on the expert's cluster. Experts
        // own disjoint models and seed streams, so the parallel run is
        // identical to the serial one.
        std::vector<std::vector<const Sequence*>> clusters(r);
        for (std::size_t i = 0; i < m; ++i)
            clusters[static_cast<std::size_t>(result.assignment[i] - 1)].push_back(
                &dataset.sequences[i]);
        parallel_for(r, [&](std::size_t begin, std::size_t end) {
            for (std::size_t e = begin; e < end; ++e) {
                if (clusters[e].empty()) continue;
                Rng rng(derive_seed(config.seed, e + 1, static_cast<std::uint64_t>(outer)));
                for (int epoch = 0; epoch < config.sgd_epochs; ++epoch)
                    sgd_epoch(result.pool.experts[e], clusters[e], config, rng,
                              update_counts[e]);
            }
        });
        if (config.validate_feasibility) check_feasible(result.pool);
        result.trace.after_m_step.push_back(
            assigned_objective(result.pool, dataset, result.assignment));

        // E-step: move every sequence to its best expert.
        const auto matrix = loss_matrix(result.pool, dataset);
        Assignment next = argmin_rows(matrix, m, r);
        repair_empty_clusters(next, matrix, r);
        const double obj = assigned_objective(result.pool, dataset, next);
        result.trace.after_e_step.push_back(obj);

        const bool unchanged = next == result.assignment;
        result.assignment = std::move(next);
        if (unchanged) {
            result.trace.assignment_converged = true;
            break;
        }
        if (previous_objective - obj < config.objective_tol) break;
        previous_objective = obj;
    }
    return result;
}

TrainResult train_onelex(const Dataset& dataset, TrainConfig config) {
    config.experts = 1;
    return train_lex(dataset, config);
}

void augment_pool(ExpertPool& pool, const Dataset& dataset, const TrainConfig& config) {
    TrainConfig single = config;
    single.experts = 1;
    single.seed = derive_seed(config.seed, 0x617567ULL);  // distinct stream for the extra expert
    TrainResult extra = train_lex(dataset, single);
    pool.experts.push_back(std::move(extra.pool.experts[0]));
}

std::string serialize_pool_manifest(const ExpertPool& pool,
                                    const std::vector<std::string>& expert_files) {
    std::string out = "LEXPOOL 1 r=" + std::to_string(pool.size()) +
                      " b=" + format_double(pool.norm_budget) + " config=" +
                      (pool.provenance.empty() ? "none" : pool.provenance) + "\n";
    for (const auto& f : expert_files) {
        out += f;
        out += '\n';
    }
    return out;
}

void save_pool(const std::string& path, const ExpertPool& pool) {
    if (pool.size() < 1) throw std::invalid_argument("empty pool");
    const std::filesystem::path manifest(path);
    std::vector<std::string> names;
    for (int e = 1; e <= pool.size(); ++e) {
        const std::string name = manifest.filename().string() + ".expert" + std::to_string(e);
        names.push_back(name);
        write_text_file((manifest.parent_path() / name).string(),
                        pool.experts[static_cast<std::size_t>(e - 1)].serialize());
    }
    write_text_file(path, serialize_pool_manifest(pool, names));
}

ExpertPool load_pool(const std::string& path) {
    const std::string text = read_text_file(path);
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty pool manifest", 1);
    const auto header = split_tokens(lines[0]);
    if (header.size() != 5 || header[0] != "LEXPOOL" || header[1] != "1" ||
        !header[2].starts_with("r=") || !header[3].starts_with("b=") ||
        !header[4].starts_with("config="))
        throw ParseError("malformed pool manifest header", 1);

    std::uint64_t r = 0;
    if (!parse_u64(header[2].substr(2), r) || r < 1)
        throw ParseError("malformed expert count", 1);
    ExpertPool pool;
    if (!parse_double(header[3].substr(2), pool.norm_budget) || !(pool.norm_budget > 0.0))
        throw ParseError("malformed norm budget", 1);
    pool.provenance = std::string(header[4].substr(7));

    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::string expert_path = (dir / std::string(lines[li])).string();
        pool.experts.push_back(ContextTreeModel::deserialize(read_text_file(expert_path)));
    }
    if (pool.experts.size() != r)
        throw Error("pool manifest lists " + std::to_string(r) + " experts but " +
                    std::to_string(pool.experts.size()) + " files were read");
    for (const auto& expert : pool.experts) {
        if (expert.k() != pool.experts[0].k()) throw Error("experts disagree on alphabet size");
        if (expert.recompute_weighted_norm() > pool.norm_budget + 1e-6)
            throw Error("expert norm exceeds the pool ball");
    }
    return pool;
}

}  // namespace lexseq
