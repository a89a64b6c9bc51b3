#pragma once

// Comma-separated datasets: one header line, then one observation per row with
// the d_x covariates first and the d_y responses next. Decimal point '.'.

#include <istream>
#include <string>
#include <vector>

#include "cwm/dataset.hpp"

namespace cwm {

// Throws ParseError (naming row and column), NonFiniteValue or HeaderMismatch.
// Rows are numbered from 1 for the first data line.
Dataset parse_dataset(std::istream& in, int d_x, int d_y);
Dataset parse_dataset(const std::string& path, int d_x, int d_y);

// 17 significant digits, so finite doubles survive a write/read round trip.
std::string format_double(double v);

std::string dataset_csv(const Dataset& data, const std::vector<std::string>& header = {});
void write_text_file(const std::string& path, const std::string& contents);

// Default header x1..x{d_x},y1..y{d_y}.
std::vector<std::string> default_header(int d_x, int d_y);

}  // namespace cwm
