#include "deblur/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deblur {

namespace {

constexpr double kVanishingCoeff = 1e-14;

double group_norm(const std::vector<double>& coeffs, const SigmaGroup& group) {
    double s = 0.0;
    for (std::size_t a = group.first; a < group.first + group.count; ++a) s += coeffs[a] * coeffs[a];
    return std::sqrt(s);
}

}  // namespace

TrajectoryTable coefficient_trajectories(const SolverRun& run, const Image& reference,
                                         const SvdFactorization& factorization) {
    if (run.trace.empty())
        throw std::invalid_argument("coefficient_trajectories: the run has an empty trace");
    const std::size_t n = factorization.size();
    if (reference.size() != n)
        throw std::invalid_argument(
            "coefficient_trajectories: reference length does not match the factorization");

    const std::vector<double> ref =
        decompose(reference, factorization, BasisSide::right).coeffs;

    TrajectoryTable table;
    table.groups = degenerate_groups(factorization);
    std::vector<double> ref_group_norms(table.groups.size());
    for (std::size_t g = 0; g < table.groups.size(); ++g)
        ref_group_norms[g] = group_norm(ref, table.groups[g]);

    for (const TraceRow& row : run.trace) {
        if (row.intensities.size() != n)
            throw std::invalid_argument(
                "coefficient_trajectories: trace image length does not match the factorization");
        const std::vector<double> coeffs =
            row.coefficients ? *row.coefficients
                             : decompose(row.intensities, factorization, BasisSide::right).coeffs;

        table.iterations.push_back(row.iteration);
        std::vector<std::optional<double>> ratios(n);
        for (std::size_t a = 0; a < n; ++a)
            if (std::abs(ref[a]) >= kVanishingCoeff) ratios[a] = coeffs[a] / ref[a];
        table.ratios.push_back(std::move(ratios));

        std::vector<std::optional<double>> group_ratios(table.groups.size());
        for (std::size_t g = 0; g < table.groups.size(); ++g)
            if (ref_group_norms[g] >= kVanishingCoeff)
                group_ratios[g] = group_norm(coeffs, table.groups[g]) / ref_group_norms[g];
        table.group_ratios.push_back(std::move(group_ratios));
    }
    return table;
}

QualityReport quality_report(const Image& restored, const Image& reference,
                             const SvdFactorization& factorization, double tol) {
    const std::size_t n = factorization.size();
    if (restored.size() != n || reference.size() != n)
        throw std::invalid_argument("quality_report: image lengths do not match the factorization");
    if (!(tol >= 0.0)) throw std::invalid_argument("quality_report: tol must be >= 0");

    const Image diff = subtract(restored, reference);
    QualityReport report;
    report.l2_error = norm2(diff);
    report.linf_error = norm_inf(diff);

    double null_sq = 0.0;
    double row_sq = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double c = dot(factorization.right_vector(a), diff);
        (factorization.sigma[a] <= tol ? null_sq : row_sq) += c * c;
    }
    report.nullspace_error = std::sqrt(null_sq);
    report.rowspace_error = std::sqrt(row_sq);

    for (double v : restored)
        if (v < 0.0) report.negativity -= v;
    return report;
}

QualityReport quality_report(const Image& restored, const Image& reference,
                             const SvdFactorization& factorization) {
    return quality_report(restored, reference, factorization, factorization.rank_tol);
}

ContrastMetric contrast_metric(const Image& image, double low_threshold) {
    if (image.empty()) throw std::invalid_argument("contrast_metric: empty image");
    if (!(low_threshold > 0.0) || !(low_threshold < 1.0))
        throw std::invalid_argument("contrast_metric: low_threshold must lie in (0, 1)");

    const auto [lo, hi] = std::minmax_element(image.begin(), image.end());
    ContrastMetric metric;
    std::size_t below = 0;
    for (double v : image)
        if (v < low_threshold * *hi) ++below;
    metric.fraction_low = static_cast<double>(below) / static_cast<double>(image.size());
    metric.range_ratio = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
    return metric;
}

}  // namespace deblur
