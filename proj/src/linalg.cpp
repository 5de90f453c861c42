#include "deblur/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace deblur {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Image Matrix::apply(const Image& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Image y(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        const double* row = &data_[r * cols_];
        for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Image Matrix::apply_transposed(const Image& x) const {
    if (x.size() != rows_) throw std::invalid_argument("Matrix::apply_transposed: dimension mismatch");
    Image y(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double xr = x[r];
        const double* row = &data_[r * cols_];
        for (std::size_t c = 0; c < cols_; ++c) y[c] += row[c] * xr;
    }
    return y;
}

Matrix Matrix::multiply(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("Matrix::multiply: dimension mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(r, k);
            if (a == 0.0) continue;
            for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
        }
    return out;
}

Image Matrix::column(std::size_t c) const {
    Image v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void Matrix::set_column(std::size_t c, const Image& v) {
    if (v.size() != rows_) throw std::invalid_argument("Matrix::set_column: dimension mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

double Matrix::frobenius_norm() const {
    double acc = 0.0;
    for (double x : data_) acc += x * x;
    return std::sqrt(acc);
}

double dot(const Image& a, const Image& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const Image& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Image& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

double max_abs_diff(const Image& a, const Image& b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double sum(const Image& x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double mean(const Image& x) {
    if (x.empty()) throw std::invalid_argument("mean: empty vector");
    return sum(x) / static_cast<double>(x.size());
}

Image add(const Image& a, const Image& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    Image out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Image subtract(const Image& a, const Image& b) {
    if (a.size() != b.size()) throw std::invalid_argument("subtract: dimension mismatch");
    Image out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Image scale(const Image& x, double factor) {
    Image out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * factor;
    return out;
}

void axpy(Image& y, double factor, const Image& x) {
    if (y.size() != x.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += factor * x[i];
}

}  // namespace deblur
