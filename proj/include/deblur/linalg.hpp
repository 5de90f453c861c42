#pragma once

#include <cstddef>
#include <vector>

namespace deblur {

/// Pixel intensities on a cyclic one-dimensional lattice.
using Image = std::vector<double>;

/// Dense row-major square-friendly matrix, sized for desk-scale problems.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix transposed() const;
    Image apply(const Image& x) const;         // A x
    Image apply_transposed(const Image& x) const;  // A^T x
    Matrix multiply(const Matrix& other) const;

    Image column(std::size_t c) const;
    void set_column(std::size_t c, const Image& v);

    double frobenius_norm() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(const Image& a, const Image& b);
double norm2(const Image& x);
double norm_inf(const Image& x);
double max_abs_diff(const Image& a, const Image& b);
double sum(const Image& x);
double mean(const Image& x);

Image add(const Image& a, const Image& b);
Image subtract(const Image& a, const Image& b);
Image scale(const Image& x, double factor);
/// y += factor * x
void axpy(Image& y, double factor, const Image& x);

}  // namespace deblur
