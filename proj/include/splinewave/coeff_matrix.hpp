#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "splinewave/errors.hpp"

namespace splinewave {

/// Dense row-major matrix of spline coefficients.
///
/// Row k holds the coefficient of one basis function across all channels,
/// so every recursion in the library operates on whole rows and an
/// N-channel transform costs the same bookkeeping as a scalar one.
class CoeffMatrix {
public:
    CoeffMatrix() = default;

    CoeffMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static CoeffMatrix from_column(const std::vector<double>& column) {
        CoeffMatrix m(column.size(), 1);
        for (std::size_t i = 0; i < column.size(); ++i) m(i, 0) = column[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Copies row `src` of `other` into row `dst` of *this.
    void assign_row(std::size_t dst, const CoeffMatrix& other, std::size_t src) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) = other(src, c);
    }

    void scale_row(std::size_t r, double s) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) *= s;
    }

    /// row(dst) += s * row(src) of other.
    void axpy_row(std::size_t dst, double s, const CoeffMatrix& other, std::size_t src) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += s * other(src, c);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, v < 0 ? -v : v);
        return m;
    }

    double max_abs_row(std::size_t r) const {
        double m = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            double v = (*this)(r, c);
            m = std::max(m, v < 0 ? -v : v);
        }
        return m;
    }

    bool operator==(const CoeffMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace splinewave
