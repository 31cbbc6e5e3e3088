#include "lexseq/alphabet.hpp"

#include "lexseq/error.hpp"

namespace lexseq {

Alphabet Alphabet::identity(int k) {
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(k > 0 ? k : 0));
    for (int i = 1; i <= k; ++i) tokens.push_back(std::to_string(i));
    return Alphabet(std::move(tokens));
}

Alphabet Alphabet::from_tokens(std::vector<std::string> tokens) {
    return Alphabet(std::move(tokens));
}

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.size() < 2) throw Error("alphabet needs at least 2 distinct tokens");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        auto [it, inserted] = index_.emplace(tokens_[i], static_cast<Symbol>(i + 1));
        if (!inserted) throw Error("duplicate token in alphabet: " + tokens_[i]);
    }
}

const std::string& Alphabet::token_of(Symbol index) const {
    if (index < 1 || index > size())
        throw Error("symbol index out of range: " + std::to_string(index));
    return tokens_[static_cast<std::size_t>(index - 1)];
}

Symbol Alphabet::index_of(const std::string& token) const {
    const Symbol s = find(token);
    if (s == 0) throw Error("unknown token " + token);
    return s;
}

Symbol Alphabet::find(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? 0 : it->second;
}

}  // namespace lexseq
