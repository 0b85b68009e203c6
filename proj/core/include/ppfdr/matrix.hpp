#pragma once

#include "ppfdr/error.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ppfdr {

//! Dense row-major matrix. Rows index series, columns index timesteps
//! throughout the library.
template<typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : m_Rows(rows), m_Cols(cols), m_Data(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : m_Rows(rows), m_Cols(cols), m_Data(std::move(data)) {
        detail::require(m_Data.size() == rows * cols, "matrix data size does not match its shape");
    }

    std::size_t rows() const { return m_Rows; }
    std::size_t cols() const { return m_Cols; }
    bool empty() const { return m_Data.empty(); }

    T& operator()(std::size_t row, std::size_t col) { return m_Data[row * m_Cols + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return m_Data[row * m_Cols + col]; }

    std::span<T> row(std::size_t r) { return {m_Data.data() + r * m_Cols, m_Cols}; }
    std::span<const T> row(std::size_t r) const { return {m_Data.data() + r * m_Cols, m_Cols}; }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out(m_Rows);
        for (std::size_t r = 0; r < m_Rows; ++r) {
            out[r] = (*this)(r, c);
        }
        return out;
    }

    const std::vector<T>& data() const { return m_Data; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t m_Rows = 0;
    std::size_t m_Cols = 0;
    std::vector<T> m_Data;
};

} // namespace ppfdr
