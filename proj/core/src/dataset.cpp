#include "lexseq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lexseq/error.hpp"
#include "lexseq/rng.hpp"
#include "lexseq/text.hpp"

namespace lexseq {

Alphabet build_vocab(const std::vector<std::vector<std::string>>& raw_sequences) {
    std::vector<std::string> tokens;
    std::unordered_map<std::string, Symbol> seen;
    for (const auto& row : raw_sequences) {
        for (const auto& tok : row) {
            if (seen.emplace(tok, static_cast<Symbol>(tokens.size() + 1)).second)
                tokens.push_back(tok);
        }
    }
    if (tokens.empty()) throw Error("empty corpus");
    return Alphabet::from_tokens(std::move(tokens));
}

Sequence encode(const Alphabet& alphabet, const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw Error("cannot encode an empty sequence");
    Sequence seq;
    seq.symbols.reserve(tokens.size());
    for (const auto& tok : tokens) seq.symbols.push_back(alphabet.index_of(tok));
    return seq;
}

std::vector<std::string> decode(const Alphabet& alphabet, const Sequence& seq) {
    std::vector<std::string> tokens;
    tokens.reserve(seq.size());
    for (Symbol s : seq.symbols) tokens.push_back(alphabet.token_of(s));
    return tokens;
}

void validate_dataset(const Dataset& dataset) {
    if (dataset.sequences.empty()) throw Error("empty corpus");
    const int k = dataset.alphabet.size();
    for (const auto& seq : dataset.sequences) {
        if (seq.symbols.empty()) throw Error("dataset contains an empty sequence");
        for (Symbol s : seq.symbols)
            if (s < 1 || s > k)
                throw Error("symbol index out of range: " + std::to_string(s));
    }
}

DatasetSplit split_dataset(const Dataset& dataset, SplitFractions f, std::uint64_t seed) {
    if (!(f.train > 0.0 && f.validation > 0.0 && f.test > 0.0))
        throw std::invalid_argument("split fractions must be positive");
    const double sum = f.train + f.validation + f.test;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("split fractions must sum to 1");

    const std::size_t m = dataset.sequences.size();
    // Guard against m*frac landing a hair below an integer.
    const auto part = [m](double frac) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(m) * frac + 1e-9));
    };
    const std::size_t n_val = part(f.validation);
    const std::size_t n_test = part(f.test);
    const std::size_t n_train = m - n_val - n_test;  // floor(train) + remainder

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    deterministic_shuffle(order, rng);

    DatasetSplit split{{dataset.alphabet, {}}, {dataset.alphabet, {}}, {dataset.alphabet, {}}};
    split.train.sequences.reserve(n_train);
    split.validation.sequences.reserve(n_val);
    split.test.sequences.reserve(n_test);
    for (std::size_t i = 0; i < m; ++i) {
        const Sequence& s = dataset.sequences[order[i]];
        if (i < n_train)
            split.train.sequences.push_back(s);
        else if (i < n_train + n_val)
            split.validation.sequences.push_back(s);
        else
            split.test.sequences.push_back(s);
    }
    return split;
}

std::vector<std::vector<std::string>> load_raw_rows(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<std::vector<std::string>> rows;
    for (std::string_view line : split_lines(text)) {
        if (!line.empty() && line.front() == '#') continue;
        auto toks = split_tokens(line);
        if (toks.empty()) continue;
        std::vector<std::string> row;
        row.reserve(toks.size());
        for (auto t : toks) row.emplace_back(t);
        rows.push_back(std::move(row));
    }
    return rows;
}

Dataset load_dataset_encoded(const std::string& path, int alphabet_floor) {
    const std::string text = read_text_file(path);
    std::vector<Sequence> sequences;
    Symbol max_symbol = 0;
    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (!line.empty() && line.front() == '#') continue;
        auto toks = split_tokens(line);
        if (toks.empty()) continue;
        Sequence seq;
        seq.symbols.reserve(toks.size());
        for (auto t : toks) {
            std::uint64_t v = 0;
            if (!parse_u64(t, v) || v < 1 || v > 1u << 30)
                throw ParseError("invalid symbol index '" + std::string(t) + "'", line_no);
            seq.symbols.push_back(static_cast<Symbol>(v));
            max_symbol = std::max(max_symbol, seq.symbols.back());
        }
        sequences.push_back(std::move(seq));
    }
    if (sequences.empty()) throw Error("empty corpus");
    const int k = std::max(alphabet_floor, static_cast<int>(max_symbol));
    Dataset ds{Alphabet::identity(std::max(2, k)), std::move(sequences)};
    return ds;
}

Dataset load_dataset_raw(const std::string& path, const Alphabet& alphabet) {
    auto rows = load_raw_rows(path);
    if (rows.empty()) throw Error("empty corpus");
    Dataset ds{alphabet, {}};
    ds.sequences.reserve(rows.size());
    for (const auto& row : rows) ds.sequences.push_back(encode(alphabet, row));
    return ds;
}

Dataset load_dataset_raw(const std::string& path) {
    auto rows = load_raw_rows(path);
    Alphabet alphabet = build_vocab(rows);
    Dataset ds{alphabet, {}};
    ds.sequences.reserve(rows.size());
    for (const auto& row : rows) ds.sequences.push_back(encode(ds.alphabet, row));
    return ds;
}

bool looks_encoded(const std::string& path) {
    auto rows = load_raw_rows(path);
    for (const auto& row : rows)
        for (const auto& tok : row) {
            std::uint64_t v = 0;
            if (!parse_u64(tok, v) || v < 1) return false;
        }
    return !rows.empty();
}

std::string serialize_dataset(const Dataset& dataset) {
    std::string out;
    for (const auto& seq : dataset.sequences) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i > 0) out += ' ';
            out += std::to_string(seq[i]);
        }
        out += '\n';
    }
    return out;
}

void save_dataset(const std::string& path, const Dataset& dataset) {
    write_text_file(path, serialize_dataset(dataset));
}

std::string serialize_vocab(const Alphabet& alphabet) {
    std::string out;
    for (int i = 1; i <= alphabet.size(); ++i) {
        out += std::to_string(i);
        out += '\t';
        out += alphabet.token_of(i);
        out += '\n';
    }
    return out;
}

void save_vocab(const std::string& path, const Alphabet& alphabet) {
    write_text_file(path, serialize_vocab(alphabet));
}

Alphabet load_vocab(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<std::string> tokens;
    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw ParseError("vocabulary line missing tab separator", line_no);
        std::uint64_t idx = 0;
        if (!parse_u64(line.substr(0, tab), idx) || idx != tokens.size() + 1)
            throw ParseError("vocabulary indices must ascend from 1", line_no);
        std::string token(line.substr(tab + 1));
        if (token.empty()) throw ParseError("empty token", line_no);
        tokens.push_back(std::move(token));
    }
    return Alphabet::from_tokens(std::move(tokens));
}

}  // namespace lexseq
