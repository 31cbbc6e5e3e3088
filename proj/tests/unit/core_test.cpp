#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "helpers.hpp"
#include "lexseq/dataset.hpp"
#include "lexseq/error.hpp"
#include "lexseq/text.hpp"

using namespace lexseq;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("build_vocab assigns indices in first-appearance order") {
    const Alphabet a = build_vocab({{"a", "b", "a"}});
    CHECK(a.size() == 2);
    CHECK(a.index_of("a") == 1);
    CHECK(a.index_of("b") == 2);

    const Alphabet b = build_vocab({{"x"}, {"y", "x"}});
    CHECK(b.index_of("x") == 1);
    CHECK(b.index_of("y") == 2);
}

TEST_CASE("build_vocab rejects an empty corpus") {
    CHECK_THROWS_WITH_AS(build_vocab({}), "empty corpus", Error);
    CHECK_THROWS_AS(build_vocab({{}, {}}), Error);
}

TEST_CASE("alphabet requires at least two tokens") {
    CHECK_THROWS_AS(build_vocab({{"solo", "solo"}}), Error);
    CHECK_THROWS_AS(Alphabet::identity(1), Error);
    CHECK(Alphabet::identity(3).token_of(3) == "3");
}

TEST_CASE("encode and decode are inverse lookups") {
    const Alphabet a = build_vocab({{"a", "b"}});
    const Sequence s = encode(a, {"a", "b", "b"});
    CHECK(s.symbols == std::vector<Symbol>{1, 2, 2});
    CHECK(decode(a, test::seq({2, 1})) == std::vector<std::string>{"b", "a"});

    CHECK_THROWS_WITH_AS(encode(a, {"a", "z"}), "unknown token z", Error);
    CHECK_THROWS_AS(decode(a, test::seq({3})), Error);
}

TEST_CASE("decode(encode(s)) round-trips random corpora") {
    Rng rng(11);
    std::vector<std::vector<std::string>> raw;
    for (int i = 0; i < 20; ++i) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < 1 + uniform_below(rng, 12); ++j)
            row.push_back("tok" + std::to_string(uniform_below(rng, 9)));
        raw.push_back(std::move(row));
    }
    const Alphabet a = build_vocab(raw);
    for (const auto& row : raw) CHECK(decode(a, encode(a, row)) == row);
}

TEST_CASE("split sizes follow floor-with-remainder-to-train") {
    Rng rng(3);
    const Dataset ten = test::random_dataset(rng, 4, 10, 8);
    const auto s10 = split_dataset(ten, {0.6, 0.2, 0.2}, 7);
    CHECK(s10.train.size() == 6);
    CHECK(s10.validation.size() == 2);
    CHECK(s10.test.size() == 2);

    const Dataset five = test::random_dataset(rng, 4, 5, 8);
    const auto s5 = split_dataset(five, {0.6, 0.2, 0.2}, 7);
    CHECK(s5.train.size() == 3);
    CHECK(s5.validation.size() == 1);
    CHECK(s5.test.size() == 1);
}

TEST_CASE("split is deterministic and partitions the input") {
    Rng rng(5);
    const Dataset ds = test::random_dataset(rng, 5, 23, 10);
    const auto a = split_dataset(ds, {0.5, 0.25, 0.25}, 99);
    const auto b = split_dataset(ds, {0.5, 0.25, 0.25}, 99);
    CHECK(a.train.sequences == b.train.sequences);
    CHECK(a.validation.sequences == b.validation.sequences);
    CHECK(a.test.sequences == b.test.sequences);

    // Union as a multiset equals the input.
    auto key = [](const Sequence& s) { return s.symbols; };
    std::multiset<std::vector<Symbol>> got;
    for (const auto& part : {a.train, a.validation, a.test})
        for (const auto& s : part.sequences) got.insert(key(s));
    std::multiset<std::vector<Symbol>> want;
    for (const auto& s : ds.sequences) want.insert(key(s));
    CHECK(got == want);
}

TEST_CASE("split rejects bad fractions") {
    Rng rng(5);
    const Dataset ds = test::random_dataset(rng, 3, 6, 4);
    CHECK_THROWS_AS(split_dataset(ds, {0.7, 0.2, 0.2}, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_dataset(ds, {1.0, 0.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("dataset files round-trip bit-identically") {
    Rng rng(17);
    const Dataset ds = test::random_dataset(rng, 9, 12, 20);
    const std::string path = temp_path("lexseq_core_ds.txt");
    save_dataset(path, ds);
    const Dataset back = load_dataset_encoded(path);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
        CHECK(back.sequences[i].symbols == ds.sequences[i].symbols);

    // Saving the loaded dataset reproduces the file bytes.
    const std::string again = temp_path("lexseq_core_ds2.txt");
    save_dataset(again, back);
    CHECK(read_text_file(path) == read_text_file(again));
    std::remove(path.c_str());
    std::remove(again.c_str());
}

TEST_CASE("dataset loader skips comments and detects encoded files") {
    const std::string path = temp_path("lexseq_core_comments.txt");
    write_text_file(path, "# heading\n1 2 3\n\n# more\n2 2\n");
    const Dataset ds = load_dataset_encoded(path);
    CHECK(ds.size() == 2);
    CHECK(ds.alphabet.size() == 3);
    CHECK(looks_encoded(path));

    write_text_file(path, "alpha beta\nbeta gamma\n");
    CHECK_FALSE(looks_encoded(path));
    const Dataset raw = load_dataset_raw(path);
    CHECK(raw.alphabet.index_of("alpha") == 1);
    CHECK(raw.alphabet.index_of("gamma") == 3);
    CHECK(raw.sequences[1].symbols == std::vector<Symbol>{2, 3});
    std::remove(path.c_str());
}

TEST_CASE("vocabulary files round-trip and validate") {
    const Alphabet a = build_vocab({{"url/a", "url/b", "url/c"}});
    const std::string path = temp_path("lexseq_core_vocab.tsv");
    save_vocab(path, a);
    CHECK(load_vocab(path) == a);

    write_text_file(path, "1\tx\n3\ty\n");
    CHECK_THROWS_AS(load_vocab(path), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("raw loading with an explicit vocabulary rejects unseen tokens") {
    const Alphabet a = build_vocab({{"a", "b"}});
    const std::string path = temp_path("lexseq_core_raw.txt");
    write_text_file(path, "a b a\nb z\n");
    CHECK_THROWS_WITH_AS(load_dataset_raw(path, a), "unknown token z", Error);
    std::remove(path.c_str());
}

TEST_CASE("format_double survives a parse round-trip") {
    Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        double v = (uniform01(rng) - 0.5) * std::pow(10.0, uniform01(rng) * 40.0 - 20.0);
        double back = 0.0;
        CHECK(parse_double(format_double(v), back));
        CHECK(back == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}
