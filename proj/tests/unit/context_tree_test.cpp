#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "lexseq/context_tree.hpp"
#include "lexseq/error.hpp"

using namespace lexseq;

namespace {

ContextTreeModel two_node_model() {
    // root score (1,-1), node <2> score (0,3)
    return ContextTreeModel::deserialize(
        "LEXPST 1 k=2 penalty=pow:2:1 cap=inf\n"
        "1 - 1 -1\n"
        "2 2 0 3\n");
}

}  // namespace

TEST_CASE("psi_path walks most-recent-first and honors the cap") {
    const Sequence p = test::seq({1, 2});
    const auto full = psi_path(p.symbols, 0);
    REQUIRE(full.size() == 3);
    CHECK(full[0].empty());
    CHECK(full[1] == std::vector<Symbol>{2});
    CHECK(full[2] == std::vector<Symbol>{2, 1});

    CHECK(psi_path({}, 0) == std::vector<std::vector<Symbol>>{{}});

    const auto capped = psi_path(p.symbols, 2);
    REQUIRE(capped.size() == 2);
    CHECK(capped[1] == std::vector<Symbol>{2});
}

TEST_CASE("psi_path length is min(t-1, D-1) + 1 with the root always present") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t len = uniform_below(rng, 12);
        const int cap = static_cast<int>(uniform_below(rng, 6));  // 0 = unbounded
        const Sequence p = test::random_sequence(rng, 4, len == 0 ? 1 : len);
        auto prefix = std::span<const Symbol>(p.symbols.data(), len);
        const auto paths = psi_path(prefix, cap);
        const std::size_t want =
            (cap > 0 ? std::min(len, static_cast<std::size_t>(cap - 1)) : len) + 1;
        CHECK(paths.size() == want);
        CHECK(paths.front().empty());
    }
}

TEST_CASE("predict_scores sums materialized nodes and skips missing ones") {
    const ContextTreeModel empty(2);
    CHECK(empty.predict_scores(test::seq({1, 2}).symbols) == std::vector<double>{0.0, 0.0});

    const ContextTreeModel m = two_node_model();
    CHECK(m.predict_scores(test::seq({1, 2}).symbols) == std::vector<double>{1.0, 2.0});
    // node <1> absent: only the root contributes
    CHECK(m.predict_scores(test::seq({2, 1}).symbols) == std::vector<double>{1.0, -1.0});
}

TEST_CASE("argmax prediction breaks ties toward the smallest symbol") {
    CHECK(argmax_symbol(std::vector<double>{0.0, 0.0}) == 1);
    CHECK(argmax_symbol(std::vector<double>{0.1, 0.7, 0.3}) == 2);
    CHECK(argmax_symbol(std::vector<double>{5.0, 5.0, 6.0}) == 3);
}

TEST_CASE("weighted norm matches hand-computed values") {
    ContextTreeModel root_only(2);
    root_only.apply_update({}, std::vector<double>{-3.0, -4.0}, 1.0);
    CHECK(root_only.weighted_norm() == doctest::Approx(5.0).epsilon(1e-12));

    const ContextTreeModel deep = ContextTreeModel::deserialize(
        "LEXPST 1 k=2 penalty=pow:2:1 cap=inf\n"
        "1 - 3 4\n"
        "3 2 1 1 0\n");
    // sqrt(1*25 + 9*1), the implicit <2> node holds zeros
    CHECK(deep.recompute_weighted_norm() ==
          doctest::Approx(5.830951894845301).epsilon(1e-12));
    CHECK(deep.weighted_norm() == doctest::Approx(5.830951894845301).epsilon(1e-12));
}

TEST_CASE("norm is homogeneous and satisfies the triangle inequality") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        ContextTreeModel a = test::random_model(rng, 3, 15, 6);
        ContextTreeModel b = test::random_model(rng, 3, 15, 6);
        const double na = a.recompute_weighted_norm();
        const double nb = b.recompute_weighted_norm();

        ContextTreeModel scaled = a;
        scaled.add_scaled(a, 1.5);  // scores become 2.5x
        CHECK(scaled.recompute_weighted_norm() == doctest::Approx(2.5 * na).epsilon(1e-9));

        ContextTreeModel sum = a;
        sum.add_scaled(b, 1.0);
        CHECK(sum.recompute_weighted_norm() <= na + nb + 1e-9);
    }
}

TEST_CASE("predict_scores is additive under trie merges") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const ContextTreeModel a = test::random_model(rng, 4, 12, 5);
        const ContextTreeModel b = test::random_model(rng, 4, 12, 5);
        ContextTreeModel sum = a;
        sum.add_scaled(b, 1.0);
        const Sequence p = test::random_sequence(rng, 4, uniform_below(rng, 7));
        const auto za = a.predict_scores(p.symbols);
        const auto zb = b.predict_scores(p.symbols);
        const auto zs = sum.predict_scores(p.symbols);
        for (std::size_t c = 0; c < za.size(); ++c)
            CHECK(zs[c] == doctest::Approx(za[c] + zb[c]).epsilon(1e-9));
    }
}

TEST_CASE("projection scales radially, caps the norm, and is idempotent") {
    Rng rng(31);
    ContextTreeModel m = test::random_model(rng, 3, 30, 6);
    const double norm = m.recompute_weighted_norm();
    REQUIRE(norm > 1.0);

    ContextTreeModel interior = m;
    interior.project_to_ball(norm + 1.0);
    CHECK(interior == m);  // inside the ball: untouched

    const auto before = m.predict_scores(test::seq({1, 2}).symbols);
    m.project_to_ball(norm / 2.0);
    CHECK(m.recompute_weighted_norm() == doctest::Approx(norm / 2.0).epsilon(1e-9));
    const auto after = m.predict_scores(test::seq({1, 2}).symbols);
    for (std::size_t c = 0; c < after.size(); ++c)
        CHECK(after[c] == doctest::Approx(before[c] * 0.5).epsilon(1e-12));

    ContextTreeModel twice = m;
    twice.project_to_ball(norm / 2.0);
    const auto z1 = m.predict_scores(test::seq({2}).symbols);
    const auto z2 = twice.predict_scores(test::seq({2}).symbols);
    for (std::size_t c = 0; c < z1.size(); ++c)
        CHECK(z2[c] == doctest::Approx(z1[c]).epsilon(1e-12));
}

TEST_CASE("projection keeps random models inside the ball") {
    Rng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        ContextTreeModel m = test::random_model(rng, 3, 25, 5);
        const double budget = 0.25 + 4.0 * uniform01(rng);
        m.project_to_ball(budget);
        CHECK(m.recompute_weighted_norm() <= budget + 1e-9);
    }
}

TEST_CASE("apply_update touches exactly the psi path") {
    ContextTreeModel m(2);
    m.apply_update(test::seq({1}).symbols, std::vector<double>{1.0, 0.0}, 0.5);
    CHECK(m.predict_scores(test::seq({1}).symbols) == std::vector<double>{-1.0, 0.0});
    CHECK(m.predict_scores(test::seq({2}).symbols) == std::vector<double>{-0.5, 0.0});
    CHECK(m.node_count() == 2);
}

TEST_CASE("zero-step updates leave the model unchanged") {
    Rng rng(41);
    ContextTreeModel m = test::random_model(rng, 3, 10, 4);
    const std::string before = m.serialize();
    m.apply_update(test::seq({1, 2, 3}).symbols, std::vector<double>{1.0, 2.0, 3.0}, 0.0);
    CHECK(m.serialize() == before);
}

TEST_CASE("updates with g then -g cancel") {
    Rng rng(43);
    ContextTreeModel m = test::random_model(rng, 3, 10, 4);
    const auto before = m.predict_scores(test::seq({3, 1}).symbols);
    const std::vector<double> g{0.3, -0.7, 0.4};
    m.apply_update(test::seq({3, 1}).symbols, g, 0.25);
    std::vector<double> neg(g);
    for (double& v : neg) v = -v;
    m.apply_update(test::seq({3, 1}).symbols, neg, 0.25);
    const auto after = m.predict_scores(test::seq({3, 1}).symbols);
    for (std::size_t c = 0; c < after.size(); ++c)
        CHECK(after[c] == doctest::Approx(before[c]).epsilon(1e-12));
}

TEST_CASE("depth caps stop both traversal and materialization") {
    ContextTreeModel m(3, PenaltyProfile::quadratic(), 2);
    m.apply_update(test::seq({1, 2, 3}).symbols, std::vector<double>{1.0, 0.0, 0.0}, 1.0);
    CHECK(m.node_count() == 2);  // root + <3>
    m.for_each_node([](std::span<const Symbol>, int depth, std::span<const double>) {
        CHECK(depth <= 2);
    });
}

TEST_CASE("serialization round-trips exactly") {
    CHECK(ContextTreeModel::deserialize(ContextTreeModel(2).serialize()) ==
          ContextTreeModel(2));

    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const ContextTreeModel m = test::random_model(rng, 4, 20, 5);
        const ContextTreeModel back = ContextTreeModel::deserialize(m.serialize());
        CHECK(back == m);
        CHECK(back.weighted_norm() == doctest::Approx(m.recompute_weighted_norm()).epsilon(1e-12));
        CHECK(back.serialize() == m.serialize());
    }
}

TEST_CASE("serialization is breadth-first with lexicographic paths") {
    ContextTreeModel m(3);
    const std::vector<double> g{1.0, 0.0, 0.0};
    // Insert deliberately out of order.
    m.apply_update(test::seq({2, 3}).symbols, g, 1.0);
    m.apply_update(test::seq({1, 1}).symbols, g, 1.0);
    m.apply_update(test::seq({3}).symbols, g, 1.0);
    const std::string text = m.serialize();
    const std::size_t root = text.find("\n1 -");
    const std::size_t n1 = text.find("\n2 1 ");
    const std::size_t n3a = text.find("\n2 3 ");
    const std::size_t n11 = text.find("\n3 1 1");
    const std::size_t n32 = text.find("\n3 3 2");
    REQUIRE(root != std::string::npos);
    CHECK(root < n1);
    CHECK(n1 < n3a);
    CHECK(n3a < n11);
    CHECK(n11 < n32);
}

TEST_CASE("malformed model text reports the offending line") {
    CHECK_THROWS_AS(ContextTreeModel::deserialize("BOGUS\n"), ParseError);
    const std::string corrupted =
        "LEXPST 1 k=2 penalty=pow:2:1 cap=inf\n"
        "1 - 0 x\n";
    try {
        ContextTreeModel::deserialize(corrupted);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("cached norm stays consistent under long update streams") {
    Rng rng(53);
    ContextTreeModel m(3);
    std::vector<double> g(3);
    for (int u = 0; u < 400; ++u) {
        const Sequence p = test::random_sequence(rng, 3, uniform_below(rng, 5));
        for (double& v : g) v = 2.0 * uniform01(rng) - 1.0;
        m.apply_update(p.symbols, g, uniform01(rng));
        if (u % 67 == 0) m.project_to_ball(3.0);
    }
    CHECK(m.weighted_norm() == doctest::Approx(m.recompute_weighted_norm()).epsilon(1e-9));
}

TEST_CASE("default profile dual mass along any path stays below pi^2/6") {
    const double bound = std::numbers::pi * std::numbers::pi / 6.0;
    const PenaltyProfile p = PenaltyProfile::quadratic();
    double mass = 0.0;
    for (int depth = 1; depth <= 200; ++depth) {
        mass += 1.0 / p.weight(depth);
        CHECK(mass < bound);
    }
    // The normalized profile makes the full dual mass exactly 1.
    const PenaltyProfile normalized = PenaltyProfile::normalized_quadratic();
    double normalized_mass = 0.0;
    for (int depth = 1; depth <= 200; ++depth) normalized_mass += 1.0 / normalized.weight(depth);
    CHECK(normalized_mass < 1.0);
}

TEST_CASE("penalty profiles round-trip through their tags") {
    for (const PenaltyProfile& p :
         {PenaltyProfile::quadratic(), PenaltyProfile::normalized_quadratic(),
          PenaltyProfile::literal_inverse(), PenaltyProfile::power(1.5, 0.25)}) {
        CHECK(PenaltyProfile::parse(p.tag()) == p);
    }
    CHECK(PenaltyProfile::quadratic().weight(3) == doctest::Approx(9.0));
    CHECK(PenaltyProfile::literal_inverse().weight(3) == doctest::Approx(1.0 / 9.0));
    CHECK_THROWS_AS(PenaltyProfile::parse("nope:1"), Error);
}
