#include "mcgl/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mcgl::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string() + " for reading");
  }
  return in;
}

std::ofstream open_out(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

double parse_double(std::string_view token, std::size_t line)
{
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line) + ": invalid number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) {
      ++i;
    }
    if (i > start) {
      fields.push_back(line.substr(start, i - start));
    }
  }
  return fields;
}

} // namespace

std::string format_double(double value)
{
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double failed");
  }
  return std::string(buf.data(), ptr);
}

void write_edge_list(std::ostream& out, const WeightVector& w)
{
  const std::size_t n = w.nodes();
  out << "# nodes " << n << '\n';
  std::size_t k = 0;
  std::array<char, 48> buf{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (w[k] > 0.0) {
        std::snprintf(buf.data(), buf.size(), "%.6g", w[k]);
        out << i + 1 << ' ' << j + 1 << ' ' << buf.data() << '\n';
      }
    }
  }
}

WeightVector read_edge_list(std::istream& in)
{
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream header(line);
    std::string hash;
    std::string key;
    if (header >> hash >> key && hash == "#" && key == "nodes" && header >> n) {
      break;
    }
    if (!split_fields(line).empty()) {
      throw ParseError("edge list must start with '# nodes <n>'");
    }
  }
  if (n < 2) {
    throw ParseError("edge list is missing a '# nodes <n>' header with n >= 2");
  }
  WeightVector w(n);
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') {
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'p q weight'");
    }
    const double pd = parse_double(fields[0], lineno);
    const double qd = parse_double(fields[1], lineno);
    const double nd = static_cast<double>(n);
    if (!(pd >= 1.0 && pd <= nd && qd >= 1.0 && qd <= nd) || pd != std::floor(pd) || qd != std::floor(qd) ||
        pd == qd) {
      throw ParseError("line " + std::to_string(lineno) + ": invalid node pair");
    }
    const auto p = static_cast<std::size_t>(pd);
    const auto q = static_cast<std::size_t>(qd);
    const double weight = parse_double(fields[2], lineno);
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ParseError("line " + std::to_string(lineno) + ": edge weight must be finite and nonnegative");
    }
    w[edge_index(std::min(p, q), std::max(p, q), n) - 1] = weight;
  }
  return w;
}

void save_edge_list(const std::filesystem::path& path, const WeightVector& w)
{
  auto out = open_out(path);
  write_edge_list(out, w);
}

WeightVector load_edge_list(const std::filesystem::path& path)
{
  auto in = open_in(path);
  return read_edge_list(in);
}

void write_matrix(std::ostream& out, const Matrix& M)
{
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in)
{
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') {
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      row.push_back(parse_double(f, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError("matrix file is empty");
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

void save_matrix(const std::filesystem::path& path, const Matrix& M)
{
  auto out = open_out(path);
  write_matrix(out, M);
}

Matrix load_matrix(const std::filesystem::path& path)
{
  auto in = open_in(path);
  return read_matrix(in);
}

void write_text(const std::filesystem::path& path, const std::string& contents)
{
  auto out = open_out(path);
  out << contents;
}

} // namespace mcgl::io
