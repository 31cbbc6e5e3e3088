#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexseq/alphabet.hpp"

namespace lexseq {

/// Encoded symbol sequence; every entry is in [1, k] and size() >= 1.
struct Sequence {
    std::vector<Symbol> symbols;

    std::size_t size() const { return symbols.size(); }
    Symbol operator[](std::size_t i) const { return symbols[i]; }

    /// Prefix x_{1:t-1} preceding 1-based position t.
    std::span<const Symbol> prefix(std::size_t t) const {
        return std::span<const Symbol>(symbols.data(), t - 1);
    }

    bool operator==(const Sequence& other) const = default;
};

/// Sequences sharing one alphabet.
struct Dataset {
    Alphabet alphabet;
    std::vector<Sequence> sequences;

    std::size_t size() const { return sequences.size(); }
};

/// Alphabet over the distinct tokens of a raw corpus, indexed in order of
/// first appearance. Throws "empty corpus" when no tokens exist.
Alphabet build_vocab(const std::vector<std::vector<std::string>>& raw_sequences);

/// Encodes raw tokens; throws on unknown tokens or empty input.
Sequence encode(const Alphabet& alphabet, const std::vector<std::string>& tokens);

/// Inverse of encode; throws on out-of-range indices.
std::vector<std::string> decode(const Alphabet& alphabet, const Sequence& seq);

/// Validates symbol ranges and nonemptiness for every sequence.
void validate_dataset(const Dataset& dataset);

struct SplitFractions {
    double train;
    double validation;
    double test;
};

/// Deterministic shuffled split. Sizes are floor(m * fraction) with the
/// remainder going to the train split.
struct DatasetSplit {
    Dataset train;
    Dataset validation;
    Dataset test;
};
DatasetSplit split_dataset(const Dataset& dataset, SplitFractions fractions, std::uint64_t seed);

// ---- text formats -------------------------------------------------------
//
// Dataset file: one sequence per line, whitespace-separated tokens, lines
// starting with '#' are comments. The encoded form uses the decimal symbol
// indices as tokens.
//
// Vocabulary file: one "index<TAB>token" pair per line, indices 1..k.

/// Raw token rows of a dataset file (comments and blank lines skipped).
std::vector<std::vector<std::string>> load_raw_rows(const std::string& path);

/// Loads a dataset file of integer symbol indices. The alphabet is the
/// identity alphabet over [k] where k is max(alphabet_floor, max index).
Dataset load_dataset_encoded(const std::string& path, int alphabet_floor = 2);

/// Loads a dataset file of raw tokens with a known alphabet; unseen tokens
/// are rejected.
Dataset load_dataset_raw(const std::string& path, const Alphabet& alphabet);

/// Loads a dataset file, building the vocabulary from the file itself in
/// first-appearance order.
Dataset load_dataset_raw(const std::string& path);

/// True when every token in the file is a positive decimal integer, i.e.
/// the file is in encoded form.
bool looks_encoded(const std::string& path);

std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const std::string& path, const Dataset& dataset);

std::string serialize_vocab(const Alphabet& alphabet);
void save_vocab(const std::string& path, const Alphabet& alphabet);
Alphabet load_vocab(const std::string& path);

}  // namespace lexseq
