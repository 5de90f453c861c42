#pragma once

#include <optional>
#include <vector>

#include "deblur/linalg.hpp"
#include "deblur/solvers.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

/// Per-mode restoration progress of a solver run, measured against a
/// reference image in the right singular basis.
struct TrajectoryTable {
    std::vector<long> iterations;
    std::vector<SigmaGroup> groups;
    // ratios[row][a]: iterate coefficient over reference coefficient for mode
    // a; absent where the reference coefficient vanishes.
    std::vector<std::vector<std::optional<double>>> ratios;
    // group_ratios[row][g]: norm of the iterate's coefficients across
    // degeneracy group g over the same norm of the reference, which is
    // basis-independent even inside degenerate subspaces.
    std::vector<std::vector<std::optional<double>>> group_ratios;
};

TrajectoryTable coefficient_trajectories(const SolverRun& run, const Image& reference,
                                         const SvdFactorization& factorization);

struct QualityReport {
    double l2_error = 0.0;
    double linf_error = 0.0;
    double nullspace_error = 0.0;  // norm of the error inside the null space
    double rowspace_error = 0.0;   // norm of the error inside the row space
    double negativity = 0.0;       // total negative mass of the restored image
};

QualityReport quality_report(const Image& restored, const Image& reference,
                             const SvdFactorization& factorization, double tol);
QualityReport quality_report(const Image& restored, const Image& reference,
                             const SvdFactorization& factorization);

/// How "spiky" an image is: the fraction of pixels below low_threshold times
/// the maximum, and the full dynamic range relative to the maximum.
struct ContrastMetric {
    double fraction_low = 0.0;
    double range_ratio = 0.0;
};

ContrastMetric contrast_metric(const Image& image, double low_threshold = 0.1);

}  // namespace deblur
