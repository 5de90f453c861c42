#pragma once

#include <cstddef>
#include <vector>

#include "deblur/linalg.hpp"
#include "deblur/model.hpp"

namespace deblur {

/// SVD of a transfer matrix: T = sum_a sigma_a * left_a * right_a^T with
/// sigma nonincreasing and both vector sets orthonormal.
struct SvdFactorization {
    std::vector<double> sigma;  // nonincreasing, nonnegative
    Matrix left;                // columns are left singular vectors
    Matrix right;               // columns are right singular vectors
    double rank_tol = 0.0;      // classifies sigma values as numerically zero

    std::size_t size() const { return sigma.size(); }
    Image left_vector(std::size_t alpha) const { return left.column(alpha); }
    Image right_vector(std::size_t alpha) const { return right.column(alpha); }
};

/// One-sided Jacobi SVD. Deterministic for a fixed input: fixed sweep order,
/// stable descending sigma sort, and the sign convention that the first
/// nonzero component of each right vector is positive. Basis choice inside a
/// degenerate sigma group is arbitrary but orthonormal.
/// Throws numerical_error if 100 sweeps do not converge.
SvdFactorization svd(const Matrix& transfer);

/// Independent spectrum oracle exploiting cyclic structure. For a symmetric
/// kernel returns the signed eigenvalues lambda_k = sum_d w_d cos(2 pi k d / n)
/// for k = 0..n-1; for an asymmetric kernel returns the complex moduli
/// |sum_d w_d exp(-2 pi i k d / n)|. Sorted absolute values match svd().sigma.
std::vector<double> circulant_spectrum_oracle(const Kernel& kernel, std::size_t n);

enum class BasisSide { right, left };

/// Expansion coefficients of an image in one of the singular bases.
struct SpectralCoefficients {
    std::vector<double> coeffs;
    BasisSide side = BasisSide::right;
};

SpectralCoefficients decompose(const Image& x, const SvdFactorization& factorization,
                               BasisSide side = BasisSide::right);
Image reconstruct(const SpectralCoefficients& coefficients,
                  const SvdFactorization& factorization);

/// Right singular vectors with sigma < tol. Requires 0 < tol < sigma[0].
std::vector<Image> null_space(const SvdFactorization& factorization, double tol);
std::vector<Image> null_space(const SvdFactorization& factorization);

/// Remove the null-space component: x minus its projection onto every right
/// singular vector with sigma < tol.
Image project_row_space(const Image& x, const SvdFactorization& factorization, double tol);
Image project_row_space(const Image& x, const SvdFactorization& factorization);

/// Contiguous run of (numerically) equal singular values in sorted order.
struct SigmaGroup {
    std::size_t first = 0;
    std::size_t count = 0;
    double sigma = 0.0;
};

/// Partition sorted sigma values into degeneracy groups; values within
/// rel_tol * sigma[0] of the group head belong to the same group.
std::vector<SigmaGroup> degenerate_groups(const SvdFactorization& factorization,
                                          double rel_tol = 1e-6);

}  // namespace deblur
