#include "ppfdr/csv.hpp"

#include "ppfdr/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ppfdr::csv {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("failed to format double");
    }
    return std::string(buffer, end);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text == "nan") {
        return std::nan("");
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char separator) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(separator, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

namespace {

std::ofstream openForWrite(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::ifstream openForRead(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

void writeHeader(std::ostream& out, std::size_t cols, std::size_t first) {
    for (std::size_t c = 0; c < cols; ++c) {
        out << (c ? "," : "") << 't' << first + c;
    }
    out << '\n';
}

template<typename T, typename Format>
void writeMatrix(const std::filesystem::path& path, const Matrix<T>& matrix, std::size_t first, Format format) {
    auto out = openForWrite(path);
    writeHeader(out, matrix.cols(), first);
    std::string line;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            if (c) {
                line += ',';
            }
            line += format(matrix(r, c));
        }
        line += '\n';
        out << line;
    }
}

template<typename T, typename Parse>
Matrix<T> readMatrix(const std::filesystem::path& path, Parse parse) {
    auto in = openForRead(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidInput("'" + path.string() + "' is empty; a header line is required");
    }
    std::size_t cols = split(line).size();
    std::vector<T> data;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != cols) {
            throw InvalidInput("'" + path.string() + "' row " + std::to_string(rows + 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " + std::to_string(cols));
        }
        for (auto field : fields) {
            data.push_back(parse(field));
        }
        ++rows;
    }
    return Matrix<T>(rows, cols, std::move(data));
}

} // namespace

void write_matrix(const std::filesystem::path& path, const Matrix<double>& matrix, std::size_t first_column) {
    writeMatrix(path, matrix, first_column, [](double v) { return format_double(v); });
}

void write_matrix(const std::filesystem::path& path, const Matrix<std::uint8_t>& matrix, std::size_t first_column) {
    writeMatrix(path, matrix, first_column, [](std::uint8_t v) { return std::string(v ? "1" : "0"); });
}

Matrix<double> read_matrix(const std::filesystem::path& path) {
    return readMatrix<double>(path, [](std::string_view field) { return parse_double(field); });
}

Matrix<std::uint8_t> read_flag_matrix(const std::filesystem::path& path) {
    return readMatrix<std::uint8_t>(path, [](std::string_view field) -> std::uint8_t {
        double v = parse_double(field);
        if (v != 0.0 && v != 1.0) {
            throw InvalidInput("flag matrices hold only 0 or 1, found '" + std::string(field) + "'");
        }
        return v == 1.0 ? 1 : 0;
    });
}

std::vector<double> read_column(const std::filesystem::path& path) {
    auto in = openForRead(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidInput("'" + path.string() + "' is empty; a header line is required");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != 1) {
            throw InvalidInput("'" + path.string() + "' must have a single column");
        }
        values.push_back(parse_double(fields[0]));
    }
    return values;
}

void write_column(const std::filesystem::path& path, const std::string& header, const std::vector<double>& values) {
    auto out = openForWrite(path);
    out << header << '\n';
    for (double v : values) {
        out << format_double(v) << '\n';
    }
}

} // namespace ppfdr::csv
