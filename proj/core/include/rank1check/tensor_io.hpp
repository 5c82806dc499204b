#pragma once

// Tensor text format, one tensor per file:
//
//   shape n1 n2 ... nd
//   <prod(n_i) characters of 0/1 in row-major order>
//
// Each line ends in '\n'. Readers reject any other layout (extra whitespace,
// CR, leading zeros, trailing lines).

#include "rank1check/core.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace rank1check {

void write_tensor(std::ostream& os, const BinaryTensor& f);
std::string format_tensor(const BinaryTensor& f);

BinaryTensor parse_tensor(std::string_view text);
BinaryTensor read_tensor(std::istream& is);

namespace detail {
/// Splits into '\n'-terminated lines; throws ParseError on a missing final
/// newline or a '\r'.
std::vector<std::string_view> split_lines(std::string_view text);
/// Strictly parses a positive decimal with no sign or leading zeros.
std::size_t parse_positive(std::string_view token, std::size_t line, std::string_view what);
std::vector<std::string_view> split_spaces(std::string_view line, std::size_t line_no);
std::string slurp(std::istream& is);
}  // namespace detail

}  // namespace rank1check
