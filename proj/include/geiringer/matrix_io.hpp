#pragma once

// Plain-text matrix and partition files for the analysis kit.
//
// Matrix: CSV, one row per line, entries as integers, fractions "p/q" or decimals.
// Partition: one block id per state per line.

#include "geiringer/eigen_rational.hpp"
#include "geiringer/markov.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace geiringer {

RationalMatrix parse_matrix_csv(std::string_view text);
RationalMatrix load_matrix_csv(const std::string& path);

markov::BlockPartition parse_partition(std::string_view text);
markov::BlockPartition load_partition(const std::string& path);

/// Whitespace or comma separated non-negative integers, e.g. "0, 2 3".
std::vector<Eigen::Index> parse_index_list(std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace geiringer
