#include "deblur/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "deblur/errors.hpp"

namespace deblur {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kRotationTol = 1e-14;  // relative column-cosine threshold

// Columns whose squared norm falls below this fraction of ||T||_F^2 carry
// only rotation roundoff; pairing them would dither forever.
constexpr double kNoiseColumnFraction = 1e-26;

void fix_sign(Image& primary, Image* secondary) {
    for (double v : primary) {
        if (std::fabs(v) > 1e-12) {
            if (v < 0.0) {
                for (double& p : primary) p = -p;
                if (secondary)
                    for (double& s : *secondary) s = -s;
            }
            return;
        }
    }
}

}  // namespace

SvdFactorization svd(const Matrix& transfer) {
    if (transfer.rows() != transfer.cols())
        throw std::invalid_argument("svd: matrix must be square");
    const std::size_t n = transfer.rows();
    if (n == 0) throw std::invalid_argument("svd: matrix must be nonempty");
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (!std::isfinite(transfer(r, c)))
                throw std::invalid_argument("svd: matrix entries must be finite");

    // One-sided Jacobi: rotate column pairs of W = T * V until mutually
    // orthogonal; column norms are the singular values.
    Matrix w = transfer;
    Matrix v = Matrix::identity(n);
    const double frob = transfer.frobenius_norm();
    const double noise_floor = kNoiseColumnFraction * frob * frob;

    bool converged = frob == 0.0;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    app += w(r, p) * w(r, p);
                    aqq += w(r, q) * w(r, q);
                    apq += w(r, p) * w(r, q);
                }
                if (app <= noise_floor || aqq <= noise_floor) continue;
                if (std::fabs(apq) <= kRotationTol * std::sqrt(app * aqq)) continue;

                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t r = 0; r < n; ++r) {
                    const double wp = w(r, p), wq = w(r, q);
                    w(r, p) = cs * wp - sn * wq;
                    w(r, q) = sn * wp + cs * wq;
                    const double vp = v(r, p), vq = v(r, q);
                    v(r, p) = cs * vp - sn * vq;
                    v(r, q) = sn * vp + cs * vq;
                }
                rotated = true;
            }
        }
        converged = !rotated;
    }
    if (!converged)
        throw numerical_error("svd: Jacobi sweeps did not converge within the iteration cap");

    std::vector<double> norms(n);
    for (std::size_t c = 0; c < n; ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) acc += w(r, c) * w(r, c);
        norms[c] = std::sqrt(acc);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    SvdFactorization out;
    out.sigma.resize(n);
    out.left = Matrix(n, n);
    out.right = Matrix(n, n);

    // Below this, a column of W is rotation noise and the left vector must be
    // recovered by completing the orthonormal basis instead.
    const double completion_tol =
        1e3 * std::numeric_limits<double>::epsilon() * (norms.empty() ? 0.0 : norms[order[0]]);

    std::vector<std::size_t> pending;  // sorted positions needing a left vector
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t src = order[a];
        out.sigma[a] = norms[src];
        Image rv = v.column(src);
        if (norms[src] > completion_tol) {
            Image lv(n);
            for (std::size_t r = 0; r < n; ++r) lv[r] = w(r, src) / norms[src];
            fix_sign(rv, &lv);
            out.left.set_column(a, lv);
        } else {
            fix_sign(rv, nullptr);
            pending.push_back(a);
        }
        out.right.set_column(a, rv);
    }

    // Complete the left basis: for each empty slot take the canonical
    // direction least covered by the filled columns, reorthogonalized twice.
    for (std::size_t slot : pending) {
        const auto unfilled = [&](std::size_t a) {
            return out.sigma[a] <= completion_tol && a >= slot;
        };
        Image best;
        double best_residual = -1.0;
        for (std::size_t cand = 0; cand < n; ++cand) {
            Image u(n, 0.0);
            u[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t a = 0; a < n; ++a) {
                    if (unfilled(a)) continue;
                    const Image existing = out.left.column(a);
                    axpy(u, -dot(existing, u), existing);
                }
            const double residual = norm2(u);
            if (residual > best_residual) {
                best_residual = residual;
                best = std::move(u);
            }
        }
        if (best_residual < 1e-3)
            throw numerical_error("svd: failed to complete the left singular basis");
        for (double& x : best) x /= best_residual;
        fix_sign(best, nullptr);
        out.left.set_column(slot, best);
    }

    out.rank_tol = out.sigma.empty() ? 0.0 : 1e-10 * out.sigma[0];
    return out;
}

std::vector<double> circulant_spectrum_oracle(const Kernel& kernel, std::size_t n) {
    // Same admissibility constraints as building the dense matrix.
    circulant_matrix(kernel, n);
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<double> spectrum(n);
    const bool symmetric = kernel.is_symmetric();
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (const auto& [offset, weight] : kernel.taps()) {
            const double angle = two_pi * static_cast<double>(k) * offset / static_cast<double>(n);
            re += weight * std::cos(angle);
            im -= weight * std::sin(angle);
        }
        spectrum[k] = symmetric ? re : std::hypot(re, im);
    }
    return spectrum;
}

SpectralCoefficients decompose(const Image& x, const SvdFactorization& factorization,
                               BasisSide side) {
    const std::size_t n = factorization.size();
    if (x.size() != n) throw std::invalid_argument("decompose: dimension mismatch");
    const Matrix& basis = side == BasisSide::right ? factorization.right : factorization.left;
    SpectralCoefficients out;
    out.side = side;
    out.coeffs.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) acc += basis(r, a) * x[r];
        out.coeffs[a] = acc;
    }
    return out;
}

Image reconstruct(const SpectralCoefficients& coefficients,
                  const SvdFactorization& factorization) {
    const std::size_t n = factorization.size();
    if (coefficients.coeffs.size() != n)
        throw std::invalid_argument("reconstruct: dimension mismatch");
    const Matrix& basis =
        coefficients.side == BasisSide::right ? factorization.right : factorization.left;
    Image x(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const double c = coefficients.coeffs[a];
        if (c == 0.0) continue;
        for (std::size_t r = 0; r < n; ++r) x[r] += c * basis(r, a);
    }
    return x;
}

namespace {

void validate_tolerance(const SvdFactorization& factorization, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("null-space tolerance must be positive");
    if (factorization.sigma.empty() || !(tol < factorization.sigma[0]))
        throw std::invalid_argument("null-space tolerance must be below the largest sigma");
}

}  // namespace

std::vector<Image> null_space(const SvdFactorization& factorization, double tol) {
    validate_tolerance(factorization, tol);
    std::vector<Image> vectors;
    for (std::size_t a = 0; a < factorization.size(); ++a)
        if (factorization.sigma[a] < tol) vectors.push_back(factorization.right_vector(a));
    return vectors;
}

std::vector<Image> null_space(const SvdFactorization& factorization) {
    return null_space(factorization, factorization.rank_tol);
}

Image project_row_space(const Image& x, const SvdFactorization& factorization, double tol) {
    validate_tolerance(factorization, tol);
    if (x.size() != factorization.size())
        throw std::invalid_argument("project_row_space: dimension mismatch");
    Image out = x;
    for (std::size_t a = 0; a < factorization.size(); ++a) {
        if (factorization.sigma[a] >= tol) continue;
        const Image v = factorization.right_vector(a);
        axpy(out, -dot(v, x), v);
    }
    return out;
}

Image project_row_space(const Image& x, const SvdFactorization& factorization) {
    return project_row_space(x, factorization, factorization.rank_tol);
}

std::vector<SigmaGroup> degenerate_groups(const SvdFactorization& factorization,
                                          double rel_tol) {
    std::vector<SigmaGroup> groups;
    const std::size_t n = factorization.size();
    if (n == 0) return groups;
    const double gap = rel_tol * factorization.sigma[0];
    SigmaGroup current{0, 1, factorization.sigma[0]};
    for (std::size_t a = 1; a < n; ++a) {
        if (current.sigma - factorization.sigma[a] <= gap) {
            ++current.count;
        } else {
            groups.push_back(current);
            current = SigmaGroup{a, 1, factorization.sigma[a]};
        }
    }
    groups.push_back(current);
    return groups;
}

}  // namespace deblur
