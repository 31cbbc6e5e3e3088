#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexseq {

/// 1-based symbol index into an alphabet. 0 is reserved for padding
/// sentinels (sequence starts) and never appears inside a Sequence.
using Symbol = std::int32_t;

/// Finite alphabet of k >= 2 symbols with a bijection between contiguous
/// indices 1..k and raw token strings. Immutable after construction.
class Alphabet {
public:
    /// Alphabet whose tokens are the decimal strings "1".."k".
    static Alphabet identity(int k);

    /// Alphabet from an ordered token list; index = 1 + position.
    static Alphabet from_tokens(std::vector<std::string> tokens);

    int size() const { return static_cast<int>(tokens_.size()); }

    /// Token for index in [1, k]; throws lexseq::Error when out of range.
    const std::string& token_of(Symbol index) const;

    /// Index of a known token; throws lexseq::Error naming unknown tokens.
    Symbol index_of(const std::string& token) const;

    /// Index of a token or 0 when absent.
    Symbol find(const std::string& token) const;

    bool operator==(const Alphabet& other) const { return tokens_ == other.tokens_; }

private:
    explicit Alphabet(std::vector<std::string> tokens);

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, Symbol> index_;
};

}  // namespace lexseq
