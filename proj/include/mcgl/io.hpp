#pragma once

#include "mcgl/graph_core.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mcgl::io {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

/// Edge list:
///
///     # nodes <n>
///     p q weight
///
/// one line per strictly positive weight, 1-based p < q, weight printed
/// with 6 significant digits.
void write_edge_list(std::ostream& out, const WeightVector& w);
WeightVector read_edge_list(std::istream& in);

void save_edge_list(const std::filesystem::path& path, const WeightVector& w);
WeightVector load_edge_list(const std::filesystem::path& path);

/// Comma-delimited matrix, one row per line, full precision. Reading also
/// accepts whitespace or semicolons as separators and skips '#' lines.
void write_matrix(std::ostream& out, const Matrix& M);
Matrix read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const Matrix& M);
Matrix load_matrix(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& contents);

} // namespace mcgl::io
