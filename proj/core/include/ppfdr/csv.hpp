#pragma once

// CSV interchange: headers are mandatory, '.' is the decimal separator and
// doubles are written in shortest round-trip form.

#include "ppfdr/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ppfdr::csv {

std::string format_double(double value);
double parse_double(std::string_view text);

//! Header "t0,t1,...", one row per series.
void write_matrix(const std::filesystem::path& path, const Matrix<double>& matrix, std::size_t first_column = 0);
void write_matrix(const std::filesystem::path& path, const Matrix<std::uint8_t>& matrix, std::size_t first_column = 0);

Matrix<double> read_matrix(const std::filesystem::path& path);
Matrix<std::uint8_t> read_flag_matrix(const std::filesystem::path& path);

//! Single column with a header line.
std::vector<double> read_column(const std::filesystem::path& path);
void write_column(const std::filesystem::path& path, const std::string& header, const std::vector<double>& values);

std::vector<std::string_view> split(std::string_view line, char separator = ',');

} // namespace ppfdr::csv
