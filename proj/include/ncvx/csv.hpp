#pragma once
// Text formats for samples and intervals.
//
//   samples:   header line of names, then one row of decimals per sample
//   intervals: one `name,lower,upper` line per variable
//
// Numbers use '.' as decimal separator regardless of the process locale.
// Blank lines and lines starting with '#' are skipped.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"

namespace ncvx {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

inline std::string where(std::size_t line, std::size_t field) {
  return "line " + std::to_string(line) + ", field " + std::to_string(field);
}

}  // namespace detail

inline double parse_real(std::string_view text, const std::string& context) {
  text = detail::trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, context + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(number, std::string(t));
  }
  return lines;
}

inline SampleSet parse_samples_csv(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw Error(Errc::ParseError, "sample file has no header");
  std::vector<std::string> names;
  for (auto f : detail::split_commas(lines.front().second)) {
    if (f.empty()) throw Error(Errc::ParseError, "line " + std::to_string(lines.front().first) + ": empty column name");
    names.emplace_back(f);
  }
  if (lines.size() < 2) throw Error(Errc::ParseError, "sample file has no data rows");
  std::vector<double> values;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, line] = lines[k];
    const auto fields = detail::split_commas(line);
    if (fields.size() != names.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(number) + ": expected " +
                                        std::to_string(names.size()) + " fields, got " +
                                        std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < fields.size(); ++f)
      values.push_back(parse_real(fields[f], detail::where(number, f + 1)));
  }
  const std::size_t rows = lines.size() - 1;
  return SampleSet(std::move(names), Matrix::from_rows(rows, values.size() / rows, values));
}

inline MarginalSpec parse_intervals(std::string_view text) {
  std::vector<std::tuple<std::string, double, double>> triples;
  for (const auto& [number, line] : content_lines(text)) {
    const auto fields = detail::split_commas(line);
    if (fields.size() != 3) {
      throw Error(Errc::ParseError, "line " + std::to_string(number) + ": expected name,lower,upper");
    }
    if (fields[0].empty()) throw Error(Errc::ParseError, "line " + std::to_string(number) + ": empty name");
    triples.emplace_back(std::string(fields[0]), parse_real(fields[1], detail::where(number, 2)),
                         parse_real(fields[2], detail::where(number, 3)));
  }
  if (triples.empty()) throw Error(Errc::ParseError, "interval file is empty");
  return make_marginal_spec(triples);
}

/// Plain numeric CSV without header (used for correlation-matrix files).
inline Matrix parse_matrix_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  for (const auto& [number, line] : content_lines(text)) {
    const auto fields = detail::split_commas(line);
    if (rows == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw Error(Errc::ParseError, "line " + std::to_string(number) + ": ragged matrix row");
    }
    for (std::size_t f = 0; f < fields.size(); ++f)
      values.push_back(parse_real(fields[f], detail::where(number, f + 1)));
    ++rows;
  }
  if (rows == 0) throw Error(Errc::ParseError, "matrix file is empty");
  return Matrix::from_rows(rows, cols, values);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string write_samples_csv(const std::vector<std::string>& names, const Matrix& rows) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  for (std::size_t s = 0; s < rows.rows(); ++s) {
    for (std::size_t i = 0; i < rows.cols(); ++i) {
      if (i) out += ',';
      out += format_real(rows(s, i));
    }
    out += '\n';
  }
  return out;
}

}  // namespace ncvx
