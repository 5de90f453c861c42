#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "deblur/linalg.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

/// Starting image for an iterative restoration.
struct Init {
    enum class Kind { uniform, blurred, custom };
    Kind kind = Kind::uniform;
    Image custom_values;

    static Init uniform() { return {}; }
    static Init blurred() { return {Kind::blurred, {}}; }
    static Init custom(Image values) { return {Kind::custom, std::move(values)}; }
};

struct SolverConfig {
    long max_iters = 100000;
    double conv_tol = 1e-12;   // stop when the max per-pixel change drops below
    Init init;                 // uniform init uses the mean of the blurred image
    long trace_every = 1;      // stride for recording trace rows
    double ratio_floor = 1e-15;  // guards division by predicted intensities
    // When set, every trace row also records the right-basis expansion
    // coefficients of the iterate.
    std::optional<SvdFactorization> trace_basis;
};

struct RlParams {
    double lambda = 0.0;  // regularization coefficient in [0, 1); 0 = classical
};

struct LwParams {
    double beta = 1.0;     // step size, 0 < beta < 2 / sigma_max^2
    double epsilon = 0.0;  // damping; > 0 makes null-space content decay
};

struct TraceRow {
    long iteration = 0;
    Image intensities;
    double max_change = 0.0;  // 0 on the initial row
    std::optional<std::vector<double>> coefficients;
};

struct SolverRun {
    Image restored;
    long iterations_done = 0;
    bool converged = false;
    std::vector<TraceRow> trace;
};

/// Per-pixel multiplicative update factor of the Richardson-Lucy step:
/// A_i = (1/q_i) sum_j T_ji * blurred_j / predicted_j with predicted = T f.
/// Where predicted_j < ratio_floor the ratio is 0 if blurred_j is 0, else
/// blurred_j / ratio_floor. Requires f >= 0 elementwise.
Image rl_amplification(const Image& current, const Image& blurred, const Matrix& transfer,
                       double ratio_floor = 1e-15);

/// Classical Richardson-Lucy: f <- A(f) * f. Keeps iterates nonnegative and
/// conserves total intensity for column-normalized transfer matrices.
SolverRun rl_deblur(const Image& blurred, const Matrix& transfer,
                    const SolverConfig& config = {});

/// Per-pixel regularization factor: 1/(1-lambda) at a strict local minimum
/// against both cyclic neighbors, 1/(1+lambda) at a strict local maximum,
/// 1 otherwise (exact ties are not extrema).
Image regularization_factor(const Image& current, double lambda);

/// Regularized Richardson-Lucy: f <- A(f) * I(f) * f. lambda = 0 reproduces
/// rl_deblur bit-for-bit.
SolverRun rl_regularized(const Image& blurred, const Matrix& transfer, const RlParams& params,
                         const SolverConfig& config = {});

/// Landweber iteration f <- (1 - beta*eps) f + beta T^T (g - T f). Steepest
/// descent on the squared residual; sign-unconstrained. With eps = 0 the
/// null-space content of the initial image is left untouched; with eps > 0 it
/// decays by (1 - beta*eps) per step.
SolverRun lw_deblur(const Image& blurred, const Matrix& transfer, const LwParams& params,
                    const SolverConfig& config = {});

/// Truncated-SVD restoration: f = sum_{a<m} (<u_a, g>/sigma_a) v_a. The
/// truncation index is widened to the end of the degeneracy group containing
/// sigma_{m-1}, so the result does not depend on the arbitrary basis inside a
/// degenerate subspace. Throws numerical_error when sigma_{m-1} is
/// numerically zero, std::invalid_argument when m is outside [1, n].
Image tsvd_deblur(const Image& blurred, const SvdFactorization& factorization, std::size_t m);

}  // namespace deblur
