#include "lexseq/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/parallel.hpp"
#include "lexseq/rng.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
    double mx = kNegInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - mx);
    return mx + std::log(sum);
}

}  // namespace

std::vector<Symbol> LmmModel::context_at(std::span<const Symbol> prefix, int order) {
    std::vector<Symbol> ctx(static_cast<std::size_t>(order), 0);
    const std::size_t len = prefix.size();
    for (int j = 0; j < order; ++j) {
        // ctx holds (x_{t-d}, ..., x_{t-1}); slot order-1-j reaches back j+1 symbols
        if (static_cast<std::size_t>(j) < len)
            ctx[static_cast<std::size_t>(order - 1 - j)] = prefix[len - 1 - static_cast<std::size_t>(j)];
    }
    return ctx;
}

const std::vector<double>* LmmModel::row(int component, const std::vector<Symbol>& ctx) const {
    const auto& table = transitions[static_cast<std::size_t>(component)];
    auto it = table.find(ctx);
    return it == table.end() ? nullptr : &it->second;
}

double LmmModel::log_prob(int component, const std::vector<Symbol>& ctx, Symbol x) const {
    const std::vector<double>* r = row(component, ctx);
    if (r == nullptr) return -std::log(static_cast<double>(k));
    const double p = (*r)[static_cast<std::size_t>(x - 1)];
    return p > 0.0 ? std::log(p) : kNegInf;
}

LmmFitResult lmm_em_fit(const Dataset& dataset, const LmmFitOptions& options) {
    if (options.components < 1) throw std::invalid_argument("need r >= 1");
    if (options.order < 0) throw std::invalid_argument("need d >= 0");
    if (options.alpha < 0.0) throw std::invalid_argument("need alpha >= 0");
    validate_dataset(dataset);

    const std::size_t m = dataset.size();
    const std::size_t r = static_cast<std::size_t>(options.components);
    const int k = dataset.alphabet.size();
    const int d = options.order;

    // Per-sequence transition counts n_i(context, symbol), gathered once.
    using CountMap = std::map<std::vector<Symbol>, std::map<Symbol, double>>;
    std::vector<CountMap> counts(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Sequence& x = dataset.sequences[i];
        for (std::size_t t = 1; t <= x.size(); ++t) {
            auto ctx = LmmModel::context_at(x.prefix(t), d);
            counts[i][std::move(ctx)][x[t - 1]] += 1.0;
        }
    }

    // Seeded random responsibilities.
    std::vector<double> gamma(m * r);
    Rng rng(options.seed);
    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        for (std::size_t q = 0; q < r; ++q) {
            gamma[i * r + q] = uniform01(rng) + 1e-12;
            sum += gamma[i * r + q];
        }
        for (std::size_t q = 0; q < r; ++q) gamma[i * r + q] /= sum;
    }

    LmmFitResult result;
    result.model.components = options.components;
    result.model.order = d;
    result.model.k = k;
    result.model.alpha = options.alpha;
    result.model.prior.assign(r, 0.0);
    result.model.transitions.assign(r, {});

    // Normalized weighted counts per component, optionally smoothed. The
    // iterations use alpha = 0 (the exact M-step maximizer, which is what
    // keeps the log-likelihood trace nondecreasing); the returned model is
    // rebuilt once with the caller's alpha.
    const auto m_step = [&](double alpha) {
        for (std::size_t q = 0; q < r; ++q) {
            double total = 0.0;
            for (std::size_t i = 0; i < m; ++i) total += gamma[i * r + q];
            result.model.prior[q] = total / static_cast<double>(m);
        }
        parallel_for(r, [&](std::size_t begin, std::size_t end) {
            for (std::size_t q = begin; q < end; ++q) {
                std::map<std::vector<Symbol>, std::vector<double>> weighted;
                for (std::size_t i = 0; i < m; ++i) {
                    const double g = gamma[i * r + q];
                    for (const auto& [ctx, per_symbol] : counts[i]) {
                        auto& row = weighted[ctx];
                        if (row.empty()) row.assign(static_cast<std::size_t>(k), 0.0);
                        for (const auto& [sym, n] : per_symbol)
                            row[static_cast<std::size_t>(sym - 1)] += g * n;
                    }
                }
                auto& table = result.model.transitions[q];
                table.clear();
                for (auto& [ctx, row] : weighted) {
                    double total = 0.0;
                    for (double v : row) total += v;
                    const double denom = alpha * k + total;
                    if (!(denom > 0.0)) continue;  // no mass and no smoothing: uniform fallback
                    std::vector<double> probs(row.size());
                    for (std::size_t c = 0; c < row.size(); ++c)
                        probs[c] = (alpha + row[c]) / denom;
                    table.emplace(ctx, std::move(probs));
                }
            }
        });
    };

    std::vector<double> loglik_i(m);
    double previous = kNegInf;
    for (int iter = 1; iter <= options.max_iters; ++iter) {
        m_step(0.0);

        // E-step: responsibilities and total log-likelihood in log space.
        parallel_for(m, [&](std::size_t begin, std::size_t end) {
            std::vector<double> logv(r);
            for (std::size_t i = begin; i < end; ++i) {
                for (std::size_t q = 0; q < r; ++q) {
                    double acc = result.model.prior[q] > 0.0
                                     ? std::log(result.model.prior[q])
                                     : kNegInf;
                    if (acc != kNegInf) {
                        for (const auto& [ctx, per_symbol] : counts[i]) {
                            for (const auto& [sym, n] : per_symbol) {
                                const double lp =
                                    result.model.log_prob(static_cast<int>(q), ctx, sym);
                                if (lp == kNegInf) {
                                    acc = kNegInf;
                                    break;
                                }
                                acc += n * lp;
                            }
                            if (acc == kNegInf) break;
                        }
                    }
                    logv[q] = acc;
                }
                const double lse = log_sum_exp(logv);
                loglik_i[i] = lse;
                if (lse == kNegInf) {
                    for (std::size_t q = 0; q < r; ++q)
                        gamma[i * r + q] = result.model.prior[q];
                } else {
                    for (std::size_t q = 0; q < r; ++q)
                        gamma[i * r + q] = std::exp(logv[q] - lse);
                }
            }
        });
        double total = 0.0;
        for (double v : loglik_i) total += v;
        result.loglik_trace.push_back(total);
        result.iterations = iter;
        if (iter > 1 && total - previous < options.tol) break;
        previous = total;
    }
    m_step(options.alpha);  // published rows carry the smoothing
    return result;
}

LmmFilter::LmmFilter(const LmmModel& model)
    : model_(&model), context_(static_cast<std::size_t>(model.order), 0) {
    log_joint_.resize(model.prior.size());
    for (std::size_t q = 0; q < log_joint_.size(); ++q)
        log_joint_[q] = model.prior[q] > 0.0 ? std::log(model.prior[q]) : kNegInf;
}

std::vector<double> LmmFilter::posterior() const {
    const double lse = log_sum_exp(log_joint_);
    if (lse == kNegInf) return model_->prior;
    std::vector<double> post(log_joint_.size());
    for (std::size_t q = 0; q < post.size(); ++q) post[q] = std::exp(log_joint_[q] - lse);
    return post;
}

Symbol LmmFilter::predict() const {
    const auto post = posterior();
    std::size_t best_q = 0;
    for (std::size_t q = 1; q < post.size(); ++q)
        if (post[q] > post[best_q]) best_q = q;

    const std::vector<double>* row = model_->row(static_cast<int>(best_q), context_);
    if (row == nullptr) return 1;  // uniform row: lowest index wins
    std::size_t best_x = 0;
    for (std::size_t c = 1; c < row->size(); ++c)
        if ((*row)[c] > (*row)[best_x]) best_x = c;
    return static_cast<Symbol>(best_x + 1);
}

std::vector<double> LmmFilter::predictive() const {
    const auto post = posterior();
    std::vector<double> dist(static_cast<std::size_t>(model_->k), 0.0);
    for (std::size_t q = 0; q < post.size(); ++q) {
        if (post[q] == 0.0) continue;
        const std::vector<double>* row = model_->row(static_cast<int>(q), context_);
        if (row == nullptr) {
            const double u = 1.0 / static_cast<double>(model_->k);
            for (double& v : dist) v += post[q] * u;
        } else {
            for (std::size_t c = 0; c < dist.size(); ++c) dist[c] += post[q] * (*row)[c];
        }
    }
    return dist;
}

void LmmFilter::observe(Symbol x) {
    for (std::size_t q = 0; q < log_joint_.size(); ++q) {
        if (log_joint_[q] == kNegInf) continue;
        const double lp = model_->log_prob(static_cast<int>(q), context_, x);
        log_joint_[q] = lp == kNegInf ? kNegInf : log_joint_[q] + lp;
    }
    if (model_->order > 0) {
        context_.erase(context_.begin());
        context_.push_back(x);
    }
}

std::vector<double> lmm_posterior(const LmmModel& model, std::span<const Symbol> prefix) {
    LmmFilter filter(model);
    for (Symbol s : prefix) filter.observe(s);
    return filter.posterior();
}

Symbol lmm_predict(const LmmModel& model, std::span<const Symbol> prefix) {
    LmmFilter filter(model);
    for (Symbol s : prefix) filter.observe(s);
    return filter.predict();
}

std::vector<double> lmm_predictive(const LmmModel& model, std::span<const Symbol> prefix) {
    LmmFilter filter(model);
    for (Symbol s : prefix) filter.observe(s);
    return filter.predictive();
}

std::string serialize_lmm(const LmmModel& model) {
    std::string out = "LMM 1 " + std::to_string(model.components) + " " +
                      std::to_string(model.order) + " " + std::to_string(model.k) + " " +
                      format_double(model.alpha) + "\n";
    for (std::size_t q = 0; q < model.prior.size(); ++q) {
        if (q > 0) out += ' ';
        out += format_double(model.prior[q]);
    }
    out += '\n';
    for (std::size_t q = 0; q < model.transitions.size(); ++q) {
        for (const auto& [ctx, row] : model.transitions[q]) {
            out += std::to_string(q + 1);
            for (Symbol s : ctx) {
                out += ' ';
                out += std::to_string(s);
            }
            for (double v : row) {
                out += ' ';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    return out;
}

LmmModel deserialize_lmm(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.size() < 2) throw ParseError("truncated LMM file", 1);
    const auto header = split_tokens(lines[0]);
    std::uint64_t r = 0;
    std::uint64_t d = 0;
    std::uint64_t k = 0;
    double alpha = 0.0;
    if (header.size() != 6 || header[0] != "LMM" || header[1] != "1" ||
        !parse_u64(header[2], r) || r < 1 || !parse_u64(header[3], d) ||
        !parse_u64(header[4], k) || k < 2 || !parse_double(header[5], alpha) || alpha < 0.0)
        throw ParseError("malformed LMM header", 1);

    LmmModel model;
    model.components = static_cast<int>(r);
    model.order = static_cast<int>(d);
    model.k = static_cast<int>(k);
    model.alpha = alpha;
    model.transitions.assign(r, {});

    const auto prior_toks = split_tokens(lines[1]);
    if (prior_toks.size() != r) throw ParseError("prior line must have r entries", 2);
    double prior_sum = 0.0;
    for (auto t : prior_toks) {
        double v = 0.0;
        if (!parse_double(t, v) || v < 0.0) throw ParseError("malformed prior entry", 2);
        model.prior.push_back(v);
        prior_sum += v;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) throw ParseError("prior must sum to 1", 2);

    for (std::size_t li = 2; li < lines.size(); ++li) {
        const auto toks = split_tokens(lines[li]);
        if (toks.empty()) continue;
        if (toks.size() != 1 + d + k) throw ParseError("wrong field count for row", li + 1);
        std::uint64_t q = 0;
        if (!parse_u64(toks[0], q) || q < 1 || q > r)
            throw ParseError("component index out of range", li + 1);
        std::vector<Symbol> ctx;
        for (std::size_t j = 0; j < d; ++j) {
            std::uint64_t s = 0;
            if (!parse_u64(toks[1 + j], s) || s > k)
                throw ParseError("context symbol out of range", li + 1);
            ctx.push_back(static_cast<Symbol>(s));
        }
        std::vector<double> row;
        double row_sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            double v = 0.0;
            if (!parse_double(toks[1 + d + c], v) || v < 0.0)
                throw ParseError("malformed probability", li + 1);
            row.push_back(v);
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > 1e-9)
            throw ParseError("transition row must sum to 1", li + 1);
        if (!model.transitions[q - 1].emplace(std::move(ctx), std::move(row)).second)
            throw ParseError("duplicate transition row", li + 1);
    }
    return model;
}

void save_lmm(const std::string& path, const LmmModel& model) {
    write_text_file(path, serialize_lmm(model));
}

LmmModel load_lmm(const std::string& path) { return deserialize_lmm(read_text_file(path)); }

}  // namespace lexseq
