#include "geiringer/matrix_io.hpp"

#include "geiringer/errors.hpp"

#include <fstream>
#include <sstream>

namespace geiringer {

namespace {

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

/// Non-blank, non-comment lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    ++line_no;
    if (!line.empty() && line.front() != '#') out.emplace_back(line_no, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RationalMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& [line_no, line] : content_lines(text)) {
    std::vector<Rational> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto cell = trim(line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start));
      try {
        row.push_back(parse_rational(cell));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no, start + 1);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file has no rows", 1, 1);
  RationalMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

RationalMatrix load_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text_file(path)); }

markov::BlockPartition parse_partition(std::string_view text) {
  std::vector<std::size_t> ids;
  for (const auto& [line_no, line] : content_lines(text)) {
    std::size_t value = 0;
    for (char c : line) {
      if (c < '0' || c > '9') throw ParseError("block id must be a non-negative integer", line_no, 1);
      value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    ids.push_back(value);
  }
  try {
    return markov::BlockPartition(std::move(ids));
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
}

markov::BlockPartition load_partition(const std::string& path) { return parse_partition(read_text_file(path)); }

std::vector<Eigen::Index> parse_index_list(std::string_view text) {
  std::vector<Eigen::Index> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] < '0' || text[i] > '9') throw ParseError("expected a state index", 1, i + 1);
    Eigen::Index v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') v = v * 10 + (text[i++] - '0');
    out.push_back(v);
  }
  return out;
}

}  // namespace geiringer
