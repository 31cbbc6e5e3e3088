#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lexseq {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Strict double parse of a whole token; returns false on trailing garbage.
bool parse_double(std::string_view token, double& out);

/// Strict nonnegative integer parse of a whole token.
bool parse_u64(std::string_view token, std::uint64_t& out);

/// Whitespace-separated tokens of one line.
std::vector<std::string_view> split_tokens(std::string_view line);

/// Splits text into lines; accepts both \n and \r\n endings.
std::vector<std::string_view> split_lines(std::string_view text);

/// Reads a whole file; throws lexseq::Error when the file cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes a whole file; throws lexseq::Error on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lexseq
