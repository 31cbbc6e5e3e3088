#pragma once

#include <stdexcept>
#include <string>

namespace lexseq {

/// Data or model content error (bad file contents, unknown tokens,
/// incompatible alphabets). Maps to CLI exit code 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Error while parsing a text artifact; carries a 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace lexseq
