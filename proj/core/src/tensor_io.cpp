#include "rank1check/tensor_io.hpp"

#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>

namespace rank1check {

namespace detail {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw ParseError(lines.size() + 1, "missing final newline");
    std::string_view line = text.substr(pos, nl - pos);
    if (line.find('\r') != std::string_view::npos) throw ParseError(lines.size() + 1, "carriage return not allowed");
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

std::size_t parse_positive(std::string_view token, std::size_t line, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || token.front() == '0' || v == 0) {
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> split_spaces(std::string_view line, std::size_t line_no) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (true) {
    const std::size_t sp = line.find(' ', pos);
    std::string_view tok = line.substr(pos, sp == std::string_view::npos ? std::string_view::npos : sp - pos);
    if (tok.empty()) throw ParseError(line_no, "tokens must be separated by single spaces");
    tokens.push_back(tok);
    if (sp == std::string_view::npos) break;
    pos = sp + 1;
  }
  return tokens;
}

std::string slurp(std::istream& is) {
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace detail

void write_tensor(std::ostream& os, const BinaryTensor& f) { os << format_tensor(f); }

std::string format_tensor(const BinaryTensor& f) {
  std::string s = "shape";
  for (auto n : f.shape().dims()) s += " " + std::to_string(n);
  s += '\n';
  s += f.to_bit_string();
  s += '\n';
  return s;
}

BinaryTensor parse_tensor(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.size() != 2) throw ParseError(lines.size() < 2 ? lines.size() + 1 : 3, "expected exactly two lines");
  const auto tokens = detail::split_spaces(lines[0], 1);
  if (tokens.front() != "shape") throw ParseError(1, "expected 'shape' header");
  if (tokens.size() < 2) throw ParseError(1, "shape needs at least one dimension");
  std::vector<std::size_t> dims;
  for (std::size_t i = 1; i < tokens.size(); ++i) dims.push_back(detail::parse_positive(tokens[i], 1, "dimension"));
  std::optional<Shape> shape;
  try {
    shape.emplace(std::move(dims));
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
  const std::string_view bits = lines[1];
  if (bits.size() != shape->size()) {
    throw ParseError(2, "expected " + std::to_string(shape->size()) + " bits, got " + std::to_string(bits.size()));
  }
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError(2, "bits must be 0 or 1");
  }
  return BinaryTensor::from_bit_string(*shape, bits);
}

BinaryTensor read_tensor(std::istream& is) { return parse_tensor(detail::slurp(is)); }

}  // namespace rank1check
