#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lexseq/error.hpp"
#include "lexseq/lmm.hpp"

using namespace lexseq;

namespace {

LmmFitResult fit_cycle() {
    // single chain, order 1, no smoothing, data (1,2,1,2,1,2)
    Dataset ds{Alphabet::identity(2), {test::seq({1, 2, 1, 2, 1, 2})}};
    LmmFitOptions opt;
    opt.components = 1;
    opt.order = 1;
    opt.alpha = 0.0;
    opt.seed = 3;
    return lmm_em_fit(ds, opt);
}

}  // namespace

TEST_CASE("order-1 chain counts transitions exactly") {
    const LmmModel m = fit_cycle().model;
    // 1 -> 2 three times, 2 -> 1 twice, start -> 1 once
    const auto* from1 = m.row(0, {1});
    const auto* from2 = m.row(0, {2});
    const auto* start = m.row(0, {0});
    REQUIRE(from1 != nullptr);
    REQUIRE(from2 != nullptr);
    REQUIRE(start != nullptr);
    CHECK((*from1)[1] == 1.0);  // theta(2|1) = 1
    CHECK((*from1)[0] == 0.0);
    CHECK((*from2)[0] == 1.0);  // theta(1|2) = 1
    CHECK((*start)[0] == 1.0);  // theta(1|start) = 1
    CHECK((*start)[1] == 0.0);  // theta(2|start) = 0
    CHECK(m.prior == std::vector<double>{1.0});
}

TEST_CASE("the cycle model predicts the alternation") {
    const LmmModel m = fit_cycle().model;
    CHECK(lmm_predict(m, test::seq({1, 2, 1}).symbols) == 2);
    CHECK(lmm_predict(m, test::seq({1, 2}).symbols) == 1);
    CHECK(lmm_predict(m, {}) == 1);  // argmax theta(.|start)
}

TEST_CASE("order 0 with one chain is the smoothed unigram") {
    Dataset ds{Alphabet::identity(2), {test::seq({1, 1, 2})}};
    LmmFitOptions opt;
    opt.components = 1;
    opt.order = 0;
    opt.alpha = 0.5;
    const LmmModel m = lmm_em_fit(ds, opt).model;
    const auto* row = m.row(0, {});
    REQUIRE(row != nullptr);
    // exact arithmetic: (alpha + count) / (k alpha + total)
    CHECK((*row)[0] == (0.5 + 2.0) / (2.0 * 0.5 + 3.0));
    CHECK((*row)[1] == (0.5 + 1.0) / (2.0 * 0.5 + 3.0));
}

TEST_CASE("posterior equals the prior on an empty prefix") {
    Rng rng(149);
    const Dataset ds = test::random_dataset(rng, 4, 10, 12);
    LmmFitOptions opt;
    opt.components = 3;
    opt.order = 1;
    opt.seed = 8;
    const LmmModel m = lmm_em_fit(ds, opt).model;
    const auto post = lmm_posterior(m, {});
    REQUIRE(post.size() == 3);
    for (std::size_t q = 0; q < 3; ++q)
        CHECK(post[q] == doctest::Approx(m.prior[q]).epsilon(1e-12));
}

TEST_CASE("identical components keep the prior posterior") {
    LmmModel m;
    m.components = 2;
    m.order = 0;
    m.k = 2;
    m.alpha = 0.0;
    m.prior = {0.3, 0.7};
    m.transitions.assign(2, {});
    m.transitions[0][{}] = {0.25, 0.75};
    m.transitions[1][{}] = {0.25, 0.75};
    const auto post = lmm_posterior(m, test::seq({2, 2, 1, 2}).symbols);
    CHECK(post[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(post[1] == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("a zero-likelihood component loses all posterior mass") {
    LmmModel m;
    m.components = 2;
    m.order = 0;
    m.k = 2;
    m.alpha = 0.0;
    m.prior = {0.5, 0.5};
    m.transitions.assign(2, {});
    m.transitions[0][{}] = {1.0, 0.0};  // never emits symbol 2
    m.transitions[1][{}] = {0.5, 0.5};
    const auto post = lmm_posterior(m, test::seq({1, 2}).symbols);
    CHECK(post[0] == 0.0);
    CHECK(post[1] == 1.0);
}

TEST_CASE("unseen contexts fall back to the uniform row") {
    Dataset ds{Alphabet::identity(3), {test::seq({1, 1, 1})}};
    LmmFitOptions opt;
    opt.components = 1;
    opt.order = 1;
    opt.alpha = 0.0;
    const LmmModel m = lmm_em_fit(ds, opt).model;
    CHECK(m.row(0, {2}) == nullptr);  // context 2 never observed
    // uniform fallback: tie-break predicts symbol 1
    CHECK(lmm_predict(m, test::seq({1, 2}).symbols) == 1);
    const auto dist = lmm_predictive(m, test::seq({1, 2}).symbols);
    for (double v : dist) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("single-component posteriors are identically one") {
    const LmmModel m = fit_cycle().model;
    for (const auto& prefix : {test::seq({1}), test::seq({1, 2, 1}), test::seq({2, 2})}) {
        const auto post = lmm_posterior(m, prefix.symbols);
        REQUIRE(post.size() == 1);
        CHECK(post[0] == 1.0);
    }
}

TEST_CASE("EM log-likelihood is nondecreasing on random data") {
    Rng rng(151);
    for (int trial = 0; trial < 12; ++trial) {
        const int k = 2 + static_cast<int>(uniform_below(rng, 4));
        const Dataset ds = test::random_dataset(rng, k, 4 + uniform_below(rng, 8), 16);
        LmmFitOptions opt;
        opt.components = 1 + static_cast<int>(uniform_below(rng, 4));
        opt.order = static_cast<int>(uniform_below(rng, 3));
        opt.alpha = uniform_below(rng, 2) == 0 ? 0.1 : 1.0;
        opt.seed = rng();
        opt.max_iters = 40;
        const LmmFitResult fit = lmm_em_fit(ds, opt);
        for (std::size_t i = 1; i < fit.loglik_trace.size(); ++i)
            CHECK(fit.loglik_trace[i] >= fit.loglik_trace[i - 1] - 1e-8);
    }
}

TEST_CASE("fitted models are normalized") {
    Rng rng(157);
    const Dataset ds = test::random_dataset(rng, 5, 12, 14);
    LmmFitOptions opt;
    opt.components = 3;
    opt.order = 1;
    opt.alpha = 0.1;
    const LmmModel m = lmm_em_fit(ds, opt).model;

    double prior_sum = 0.0;
    for (double p : m.prior) {
        CHECK(p >= 0.0);
        prior_sum += p;
    }
    CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-9));

    for (const auto& table : m.transitions)
        for (const auto& [ctx, row] : table) {
            double sum = 0.0;
            for (double v : row) {
                CHECK(v > 0.0);  // alpha > 0 forbids zeros
                sum += v;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
}

TEST_CASE("the mixture predictive distribution sums to one") {
    Rng rng(163);
    const Dataset ds = test::random_dataset(rng, 4, 10, 12);
    LmmFitOptions opt;
    opt.components = 2;
    opt.order = 1;
    opt.alpha = 0.1;
    const LmmModel m = lmm_em_fit(ds, opt).model;
    for (int trial = 0; trial < 10; ++trial) {
        const Sequence prefix = test::random_sequence(rng, 4, uniform_below(rng, 9));
        const auto dist = lmm_predictive(m, prefix.symbols);
        double sum = 0.0;
        for (double v : dist) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("LMM files round-trip exactly") {
    Rng rng(167);
    const Dataset ds = test::random_dataset(rng, 4, 8, 10);
    LmmFitOptions opt;
    opt.components = 2;
    opt.order = 2;
    opt.alpha = 0.1;
    const LmmModel m = lmm_em_fit(ds, opt).model;
    const std::string text = serialize_lmm(m);
    const LmmModel back = deserialize_lmm(text);
    CHECK(back.prior == m.prior);
    CHECK(back.transitions == m.transitions);
    CHECK(serialize_lmm(back) == text);

    // order 0 keeps an empty context column
    const LmmModel unigram = fit_cycle().model;
    CHECK(deserialize_lmm(serialize_lmm(unigram)).transitions == unigram.transitions);
}

TEST_CASE("corrupted LMM text is rejected with a line number") {
    CHECK_THROWS_AS(deserialize_lmm("LMM 2 1 1 2 0.1\n1\n"), ParseError);
    try {
        deserialize_lmm("LMM 1 1 0 2 0.1\n1\n1 0 0.9 0.2\n");
        FAIL("row does not sum to 1");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("EM fits are seed-deterministic") {
    Rng rng(173);
    const Dataset ds = test::random_dataset(rng, 4, 10, 12);
    LmmFitOptions opt;
    opt.components = 2;
    opt.order = 1;
    opt.seed = 99;
    const LmmFitResult a = lmm_em_fit(ds, opt);
    const LmmFitResult b = lmm_em_fit(ds, opt);
    CHECK(serialize_lmm(a.model) == serialize_lmm(b.model));
    CHECK(a.loglik_trace == b.loglik_trace);
}

TEST_CASE("invalid fit options are rejected") {
    Dataset ds{Alphabet::identity(2), {test::seq({1, 2})}};
    LmmFitOptions opt;
    opt.components = 0;
    CHECK_THROWS_AS(lmm_em_fit(ds, opt), std::invalid_argument);
    opt.components = 1;
    opt.order = -1;
    CHECK_THROWS_AS(lmm_em_fit(ds, opt), std::invalid_argument);
    opt.order = 0;
    opt.alpha = -0.5;
    CHECK_THROWS_AS(lmm_em_fit(ds, opt), std::invalid_argument);
}
