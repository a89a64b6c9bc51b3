#include "cwm/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cwm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(std::size_t row, std::size_t col) {
  std::ostringstream msg;
  msg << "row " << row << ", column " << col;
  return msg.str();
}

bool is_missing_token(std::string_view tok) {
  std::string lower(tok);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (!lower.empty() && (lower.front() == '+' || lower.front() == '-')) lower.erase(0, 1);
  return lower == "na" || lower == "nan" || lower == "inf" || lower == "infinity" ||
         lower == "null";
}

}  // namespace

Dataset parse_dataset(std::istream& in, int d_x, int d_y) {
  const auto width = static_cast<std::size_t>(d_x + d_y);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::HeaderMismatch, "missing header line");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split(line);
  if (header.size() != width) {
    std::ostringstream msg;
    msg << "header has " << header.size() << " columns, expected " << width;
    throw Error(ErrorCode::HeaderMismatch, msg.str());
  }

  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split(line);
    if (fields.size() != width) {
      std::ostringstream msg;
      msg << "row " << row << " has " << fields.size() << " fields, expected " << width;
      throw Error(ErrorCode::ParseError, msg.str());
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto tok = fields[c];
      if (is_missing_token(tok)) throw Error(ErrorCode::NonFiniteValue, where(row, c + 1));
      double v = 0.0;
      const auto* first = tok.data();
      const auto* last = tok.data() + tok.size();
      if (!tok.empty() && *first == '+') ++first;
      auto res = std::from_chars(first, last, v);
      if (res.ec == std::errc::result_out_of_range && res.ptr == last) {
        // Overflow becomes infinity (rejected below); underflow keeps the rounded value.
        v = std::strtod(std::string(first, last).c_str(), nullptr);
        res.ec = std::errc();
      }
      if (tok.empty() || res.ec != std::errc() || res.ptr != last) {
        throw Error(ErrorCode::ParseError, where(row, c + 1) + ": '" + std::string(tok) + "'");
      }
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, where(row, c + 1));
      values.push_back(v);
    }
  }
  if (row == 0) throw Error(ErrorCode::ParseError, "no data rows");

  Matrix m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < row; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * width + c];
    }
  }
  return Dataset(std::move(m), d_x, d_y);
}

Dataset parse_dataset(const std::string& path, int d_x, int d_y) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return parse_dataset(in, d_x, d_y);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> default_header(int d_x, int d_y) {
  std::vector<std::string> h;
  for (int i = 1; i <= d_x; ++i) h.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d_y; ++i) h.push_back("y" + std::to_string(i));
  return h;
}

std::string dataset_csv(const Dataset& data, const std::vector<std::string>& header) {
  const auto names = header.empty() ? default_header(data.d_x(), data.d_y()) : header;
  std::ostringstream out;
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  const Matrix& m = data.values();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::ParseError, "write to '" + path + "' failed");
}

}  // namespace cwm
