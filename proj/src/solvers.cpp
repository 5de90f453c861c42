#include "deblur/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "deblur/errors.hpp"

namespace deblur {

namespace {

void validate_config(const SolverConfig& config, std::size_t n) {
    if (config.max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
    if (!(config.conv_tol >= 0.0)) throw std::invalid_argument("solver: conv_tol must be >= 0");
    if (config.trace_every < 1) throw std::invalid_argument("solver: trace_every must be >= 1");
    if (!(config.ratio_floor > 0.0)) throw std::invalid_argument("solver: ratio_floor must be > 0");
    if (config.trace_basis && config.trace_basis->size() != n)
        throw std::invalid_argument("solver: trace basis dimension does not match the image");
}

Image make_initial(const Init& init, const Image& blurred, bool require_nonnegative) {
    switch (init.kind) {
        case Init::Kind::uniform:
            return Image(blurred.size(), mean(blurred));
        case Init::Kind::blurred:
            return blurred;
        case Init::Kind::custom:
            if (init.custom_values.size() != blurred.size())
                throw std::invalid_argument("solver: custom init has the wrong length");
            if (require_nonnegative)
                for (double v : init.custom_values)
                    if (v < 0.0)
                        throw std::domain_error("solver: custom init must be nonnegative");
            return init.custom_values;
    }
    throw std::invalid_argument("solver: unknown init kind");
}

class TraceRecorder {
  public:
    TraceRecorder(SolverRun& run, const SolverConfig& config) : run_(run), config_(config) {}

    void record(long iteration, const Image& img, double max_change) {
        TraceRow row;
        row.iteration = iteration;
        row.intensities = img;
        row.max_change = max_change;
        if (config_.trace_basis)
            row.coefficients =
                decompose(img, *config_.trace_basis, BasisSide::right).coeffs;
        run_.trace.push_back(std::move(row));
    }

    bool due(long iteration) const { return iteration % config_.trace_every == 0; }

  private:
    SolverRun& run_;
    const SolverConfig& config_;
};

Image column_sums(const Matrix& transfer) {
    const std::size_t n = transfer.cols();
    Image q(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q[i] += transfer(j, i);
    return q;
}

Image amplification_with_sums(const Image& current, const Image& blurred, const Matrix& transfer,
                              const Image& q, double ratio_floor) {
    const std::size_t n = current.size();
    const Image predicted = transfer.apply(current);
    Image ratios(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (predicted[j] < ratio_floor)
            ratios[j] = blurred[j] == 0.0 ? 0.0 : blurred[j] / ratio_floor;
        else
            ratios[j] = blurred[j] / predicted[j];
    }
    Image a = transfer.apply_transposed(ratios);
    for (std::size_t i = 0; i < n; ++i) a[i] = q[i] == 0.0 ? 0.0 : a[i] / q[i];
    return a;
}

SolverRun run_richardson_lucy(const Image& blurred, const Matrix& transfer, double lambda,
                              const SolverConfig& config) {
    const std::size_t n = blurred.size();
    if (transfer.rows() != n || transfer.cols() != n)
        throw std::invalid_argument("rl: transfer matrix does not match the image size");
    validate_config(config, n);
    if (!(lambda >= 0.0) || lambda >= 1.0)
        throw std::invalid_argument("rl: lambda must lie in [0, 1)");
    for (double v : blurred)
        if (v < 0.0) throw std::domain_error("rl: blurred image must be nonnegative");

    SolverRun run;
    TraceRecorder recorder(run, config);
    Image f = make_initial(config.init, blurred, /*require_nonnegative=*/true);
    recorder.record(0, f, 0.0);

    const Image q = column_sums(transfer);
    for (long k = 1; k <= config.max_iters; ++k) {
        const Image a = amplification_with_sums(f, blurred, transfer, q, config.ratio_floor);
        Image next(n);
        if (lambda > 0.0) {
            const Image reg = regularization_factor(f, lambda);
            for (std::size_t i = 0; i < n; ++i) next[i] = a[i] * reg[i] * f[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) next[i] = a[i] * f[i];
        }
        const double change = max_abs_diff(next, f);
        f = std::move(next);
        run.iterations_done = k;
        const bool hit_tol = change < config.conv_tol;
        if (recorder.due(k) || hit_tol || k == config.max_iters) recorder.record(k, f, change);
        if (hit_tol) {
            run.converged = true;
            break;
        }
    }
    run.restored = std::move(f);
    return run;
}

}  // namespace

Image rl_amplification(const Image& current, const Image& blurred, const Matrix& transfer,
                       double ratio_floor) {
    const std::size_t n = current.size();
    if (blurred.size() != n || transfer.rows() != n || transfer.cols() != n)
        throw std::invalid_argument("rl_amplification: dimensions do not match");
    if (!(ratio_floor > 0.0))
        throw std::invalid_argument("rl_amplification: ratio_floor must be > 0");
    for (double v : current)
        if (v < 0.0) throw std::domain_error("rl_amplification: current image must be nonnegative");
    return amplification_with_sums(current, blurred, transfer, column_sums(transfer), ratio_floor);
}

SolverRun rl_deblur(const Image& blurred, const Matrix& transfer, const SolverConfig& config) {
    return run_richardson_lucy(blurred, transfer, 0.0, config);
}

Image regularization_factor(const Image& current, double lambda) {
    if (!(lambda >= 0.0) || lambda >= 1.0)
        throw std::invalid_argument("regularization_factor: lambda must lie in [0, 1)");
    const std::size_t n = current.size();
    if (n == 0) throw std::invalid_argument("regularization_factor: empty image");
    Image factor(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = current[(i + n - 1) % n];
        const double next = current[(i + 1) % n];
        const double v = current[i];
        if (v < prev && v < next)
            factor[i] = 1.0 / (1.0 - lambda);
        else if (v > prev && v > next)
            factor[i] = 1.0 / (1.0 + lambda);
    }
    return factor;
}

SolverRun rl_regularized(const Image& blurred, const Matrix& transfer, const RlParams& params,
                         const SolverConfig& config) {
    return run_richardson_lucy(blurred, transfer, params.lambda, config);
}

SolverRun lw_deblur(const Image& blurred, const Matrix& transfer, const LwParams& params,
                    const SolverConfig& config) {
    const std::size_t n = blurred.size();
    if (transfer.rows() != n || transfer.cols() != n)
        throw std::invalid_argument("lw: transfer matrix does not match the image size");
    validate_config(config, n);
    if (!(params.epsilon >= 0.0)) throw std::invalid_argument("lw: epsilon must be >= 0");

    const double sigma0 = svd(transfer).sigma.at(0);
    const double beta_limit = 2.0 / (sigma0 * sigma0);
    if (!(params.beta > 0.0) || !(params.beta < beta_limit))
        throw std::invalid_argument("lw: beta must lie in (0, 2/sigma_max^2)");

    SolverRun run;
    TraceRecorder recorder(run, config);
    Image f = make_initial(config.init, blurred, /*require_nonnegative=*/false);
    recorder.record(0, f, 0.0);

    const double keep = 1.0 - params.beta * params.epsilon;
    for (long k = 1; k <= config.max_iters; ++k) {
        Image residual = blurred;
        axpy(residual, -1.0, transfer.apply(f));
        const Image correction = transfer.apply_transposed(residual);
        Image next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = keep * f[i] + params.beta * correction[i];
        const double change = max_abs_diff(next, f);
        f = std::move(next);
        run.iterations_done = k;
        const bool hit_tol = change < config.conv_tol;
        if (recorder.due(k) || hit_tol || k == config.max_iters) recorder.record(k, f, change);
        if (hit_tol) {
            run.converged = true;
            break;
        }
    }
    run.restored = std::move(f);
    return run;
}

Image tsvd_deblur(const Image& blurred, const SvdFactorization& factorization, std::size_t m) {
    const std::size_t n = factorization.size();
    if (blurred.size() != n)
        throw std::invalid_argument("tsvd: image length does not match the factorization");
    if (m < 1 || m > n) throw std::invalid_argument("tsvd: m must lie in [1, n]");
    if (factorization.sigma[m - 1] <= factorization.rank_tol)
        throw numerical_error("tsvd: truncation index reaches a numerically zero singular value");

    // Widen m to the end of its degeneracy group, but never across the rank
    // boundary into numerically zero values.
    for (const SigmaGroup& group : degenerate_groups(factorization)) {
        if (m - 1 >= group.first && m - 1 < group.first + group.count) {
            m = group.first + group.count;
            break;
        }
    }
    while (m > 0 && factorization.sigma[m - 1] <= factorization.rank_tol) --m;

    Image f(n, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        const double coeff =
            dot(factorization.left_vector(a), blurred) / factorization.sigma[a];
        axpy(f, coeff, factorization.right_vector(a));
    }
    return f;
}

}  // namespace deblur
