#include "deblur/reproduce.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "deblur/analysis.hpp"
#include "deblur/io.hpp"
#include "deblur/model.hpp"
#include "deblur/solvers.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

std::string golden_table_csv(const GoldenTable& table) {
    CsvTable csv(table.columns);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::vector<std::string> cells;
        cells.reserve(table.rows[i].size() + 1);
        cells.push_back(std::to_string(i));
        for (double v : table.rows[i]) cells.push_back(format_float(v));
        if (cells.size() != table.columns.size())
            throw std::invalid_argument("golden table: row width does not match columns");
        csv.add_row(std::move(cells));
    }
    return csv.to_string();
}

namespace {

constexpr std::size_t kN = 12;
constexpr double kGoldenTol = 5e-4;  // reference tables carry 3 decimals

// Reference values for the delta-distribution study (peak at pixel 5,
// 5-tap kernel). Blurred column is exact; restored columns carry the
// 3-decimal precision of the bundled reference table.
constexpr std::array<double, kN> kDeltaBlurred = {0, 0,     0,    0.125, 0.25, 0.25,
                                                  0.25, 0.125, 0,    0,     0,    0};
constexpr std::array<double, kN> kDeltaLw = {0.083, -0.250, 0.083, 0.083, 0.083, 0.750,
                                             0.083, 0.083,  0.083, -0.250, 0.083, 0.083};
constexpr std::array<double, kN> kDeltaSvd = {-0.061, -0.167, 0.083, 0.000, 0.228, 0.583,
                                              0.228,  0.000,  0.083, -0.167, -0.061, 0.250};

// Reference blurred column for the 4-pixel flat-top study (pixels 5-8 at 1).
constexpr std::array<double, kN> kRampBlurred = {0,     0,     0,     0.125, 0.375, 0.625,
                                                 0.875, 0.875, 0.625, 0.375, 0.125, 0};

struct CaseContext {
    std::string name;
    std::filesystem::path dir;
    std::vector<CheckResult> checks;

    void check(const std::string& description, bool ok) {
        checks.push_back({name, description, false, ok});
    }
    void info(const std::string& description) { checks.push_back({name, description, true, true}); }
    void write(const std::string& file, const std::string& content) const {
        write_file_atomic(dir / file, content);
    }
};

double max_abs_diff_vs(const Image& x, const std::array<double, kN>& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < kN; ++i) worst = std::max(worst, std::abs(x[i] - ref[i]));
    return worst;
}

std::string restored_csv(const Image& original, const Image& blurred, const Image& restored) {
    CsvTable table({"i", "F", "g", "f"});
    for (std::size_t i = 0; i < original.size(); ++i)
        table.add_row({std::to_string(i), format_float(original[i]), format_float(blurred[i]),
                       format_float(restored[i])});
    return table.to_string();
}

/// Norm of an image's component inside the numerical null space.
double null_norm(const Image& x, const SvdFactorization& f) {
    double s = 0.0;
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (f.sigma[a] > f.rank_tol) continue;
        const double c = dot(f.right_vector(a), x);
        s += c * c;
    }
    return std::sqrt(s);
}

SolverConfig quiet_config(long max_iters) {
    SolverConfig config;
    config.max_iters = max_iters;
    config.conv_tol = 1e-12;
    config.trace_every = max_iters;  // keep only the endpoints
    return config;
}

void case_table1(CaseContext& ctx) {
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const Image original = generate_image(GeneratorDescriptor::delta(5, 1.0), kN);
    const Image blurred = blur(transfer, original);
    ctx.check("blurred column matches the reference exactly",
              max_abs_diff_vs(blurred, kDeltaBlurred) == 0.0);

    const SolverRun rl = rl_deblur(blurred, transfer, quiet_config(100000));
    ctx.check("RL restoration within 1e-3 of the original peak",
              max_abs_diff(rl.restored, original) <= 1e-3);

    const SolverRun lw = lw_deblur(blurred, transfer, {1.0, 0.0}, quiet_config(100000));
    ctx.check("LW restoration matches the reference within 5e-4",
              max_abs_diff_vs(lw.restored, kDeltaLw) <= kGoldenTol);

    const SvdFactorization factorization = svd(transfer);
    const Image fsvd = tsvd_deblur(blurred, factorization, 6);
    ctx.check("truncated-SVD restoration (m=6) matches the reference within 5e-4",
              max_abs_diff_vs(fsvd, kDeltaSvd) <= kGoldenTol);

    GoldenTable table;
    table.columns = {"i", "F", "g", "f_rl", "f_lw", "f_svd"};
    for (std::size_t i = 0; i < kN; ++i)
        table.rows.push_back(
            {original[i], blurred[i], rl.restored[i], lw.restored[i], fsvd[i]});
    ctx.write("table1.csv", golden_table_csv(table));
}

void case_table2(CaseContext& ctx) {
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const Image original = generate_image(GeneratorDescriptor::ramp(5, 4, 1.0), kN);
    const Image blurred = blur(transfer, original);
    ctx.check("blurred column matches the reference exactly",
              max_abs_diff_vs(blurred, kRampBlurred) == 0.0);

    const SolverRun rl = rl_deblur(blurred, transfer, quiet_config(100000));
    ctx.check("RL restores the flat top within 1e-3",
              max_abs_diff(rl.restored, original) <= 1e-3);

    const SolverRun lw = lw_deblur(blurred, transfer, {1.0, 0.0}, quiet_config(100000));
    ctx.check("LW restores the flat top within 5e-4",
              max_abs_diff(lw.restored, original) <= kGoldenTol);

    const SvdFactorization factorization = svd(transfer);
    const Image fsvd = tsvd_deblur(blurred, factorization, 9);
    ctx.check("truncated-SVD restoration over the full row space within 5e-4",
              max_abs_diff(fsvd, original) <= kGoldenTol);

    GoldenTable table;
    table.columns = {"i", "F", "g", "f_rl", "f_lw", "f_svd"};
    for (std::size_t i = 0; i < kN; ++i)
        table.rows.push_back(
            {original[i], blurred[i], rl.restored[i], lw.restored[i], fsvd[i]});
    ctx.write("table2.csv", golden_table_csv(table));
}

void case_fig5(CaseContext& ctx) {
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const Image original =
        generate_image(GeneratorDescriptor::background_plus_delta(0.75, 5, 0.25), kN);
    const Image blurred = blur(transfer, original);
    const SvdFactorization factorization = svd(transfer);

    const SolverRun classical = rl_deblur(blurred, transfer, quiet_config(10000));
    const double original_null = null_norm(original, factorization);
    const double classical_null = null_norm(classical.restored, factorization);
    ctx.check("classical RL leaves the null-space content below half the original's",
              classical_null < 0.5 * original_null);

    const SolverRun gentle =
        rl_regularized(blurred, transfer, {1e-4}, quiet_config(100000));
    ctx.check("regularization 1e-4 restores the image within 0.02",
              max_abs_diff(gentle.restored, original) <= 0.02);

    const SolverRun strong =
        rl_regularized(blurred, transfer, {1e-2}, quiet_config(100000));
    const double gentle_err = norm2(subtract(gentle.restored, original));
    const double strong_err = norm2(subtract(strong.restored, original));
    ctx.check("error grows when the regularization is two orders stronger",
              strong_err > gentle_err);

    ctx.write("fig5_classical.csv", restored_csv(original, blurred, classical.restored));
    ctx.write("fig5_lambda1e-4.csv", restored_csv(original, blurred, gentle.restored));
    ctx.write("fig5_lambda1e-2.csv", restored_csv(original, blurred, strong.restored));

    CsvTable coeffs({"alpha", "sigma", "c_original", "c_classical", "c_lambda1e-4",
                     "c_lambda1e-2"});
    const auto c_orig = decompose(original, factorization, BasisSide::right).coeffs;
    const auto c_cls = decompose(classical.restored, factorization, BasisSide::right).coeffs;
    const auto c_gentle = decompose(gentle.restored, factorization, BasisSide::right).coeffs;
    const auto c_strong = decompose(strong.restored, factorization, BasisSide::right).coeffs;
    for (std::size_t a = 0; a < kN; ++a)
        coeffs.add_row({std::to_string(a), format_float(factorization.sigma[a]),
                        format_float(c_orig[a]), format_float(c_cls[a]),
                        format_float(c_gentle[a]), format_float(c_strong[a])});
    ctx.write("fig5_coefficients.csv", coeffs.to_string());
}

void case_fig6(CaseContext& ctx) {
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const Image original = generate_image(GeneratorDescriptor::delta(5, 1.0), kN);
    const Image blurred = blur(transfer, original);
    const SvdFactorization factorization = svd(transfer);

    SolverConfig config;
    config.max_iters = 20000;
    config.conv_tol = 1e-12;
    config.trace_every = 1;
    const SolverRun run = rl_deblur(blurred, transfer, config);
    const TrajectoryTable table = coefficient_trajectories(run, original, factorization);

    // First iteration at which each degenerate group's restored fraction
    // reaches 0.9, for groups with sigma above 0.1.
    constexpr double kThreshold = 0.9;
    constexpr double kSigmaCut = 0.1;
    constexpr long kNever = std::numeric_limits<long>::max();
    std::vector<long> reach;
    std::vector<double> sigmas;
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
        if (table.groups[g].sigma < kSigmaCut) continue;
        long when = kNever;
        for (std::size_t row = 0; row < table.iterations.size(); ++row) {
            const auto& ratio = table.group_ratios[row][g];
            if (ratio && *ratio >= kThreshold) {
                when = table.iterations[row];
                break;
            }
        }
        reach.push_back(when);
        sigmas.push_back(table.groups[g].sigma);
    }
    bool ordered = !reach.empty();
    for (std::size_t i = 1; i < reach.size(); ++i)
        if (reach[i] < reach[i - 1]) ordered = false;
    ctx.check("slower modes take at least as long to reach 90% restoration", ordered);

    CsvTable csv({"k", "group", "sigma", "ratio"});
    for (std::size_t row = 0; row < table.iterations.size(); ++row)
        for (std::size_t g = 0; g < table.groups.size(); ++g)
            if (table.group_ratios[row][g])
                csv.add_row({std::to_string(table.iterations[row]), std::to_string(g),
                             format_float(table.groups[g].sigma),
                             format_float(*table.group_ratios[row][g])});
    ctx.write("fig6_group_ratios.csv", csv.to_string());

    CsvTable summary({"group", "sigma", "iterations_to_0.9"});
    for (std::size_t i = 0; i < reach.size(); ++i)
        summary.add_row({std::to_string(i), format_float(sigmas[i]),
                         reach[i] == kNever ? "-1" : std::to_string(reach[i])});
    ctx.write("fig6_summary.csv", summary.to_string());
}

void case_fig7(CaseContext& ctx) {
    // The low-contrast gallery has no published numeric columns, so these
    // stand-in images illustrate the same regime without golden checks.
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const SvdFactorization factorization = svd(transfer);
    const std::array<GeneratorDescriptor, 3> originals = {
        GeneratorDescriptor::background_plus_delta(0.10, 5, 0.50),
        GeneratorDescriptor::background_plus_delta(0.50, 5, 0.40),
        GeneratorDescriptor::background_plus_delta(0.80, 5, 0.15),
    };
    for (std::size_t c = 0; c < originals.size(); ++c) {
        const Image original = generate_image(originals[c], kN);
        const Image blurred = blur(transfer, original);
        const SolverRun classical = rl_deblur(blurred, transfer, quiet_config(10000));
        const SolverRun regularized =
            rl_regularized(blurred, transfer, {1e-3}, quiet_config(10000));
        const ContrastMetric contrast = contrast_metric(original);
        const double ratio = null_norm(original, factorization) > 0
                                 ? null_norm(classical.restored, factorization) /
                                       null_norm(original, factorization)
                                 : 0.0;
        std::ostringstream line;
        line << "stand-in " << c << ": fraction_low " << format_float(contrast.fraction_low)
             << ", range_ratio " << format_float(contrast.range_ratio)
             << ", classical null-content ratio " << format_float(ratio);
        ctx.info(line.str());
        const std::string tag = "fig7_case" + std::to_string(c);
        ctx.write(tag + "_classical.csv", restored_csv(original, blurred, classical.restored));
        ctx.write(tag + "_lambda1e-3.csv",
                  restored_csv(original, blurred, regularized.restored));
    }
}

void case_fig8(CaseContext& ctx) {
    const Matrix transfer = circulant_matrix(kernel_5bin(), kN);
    const Image original =
        generate_image(GeneratorDescriptor::background_plus_delta(0.75, 5, 0.25), kN);
    const Image blurred = blur(transfer, original);
    const SvdFactorization factorization = svd(transfer);

    const Image spur = factorization.right_vector(kN - 1);
    Image start = original;
    axpy(start, 0.05, spur);
    for (double v : start)
        if (v <= 0.0) throw std::logic_error("fig8: perturbed start lost positivity");

    const double c_original = dot(spur, original);
    const double c_start = dot(spur, start);

    SolverConfig classical_config;
    classical_config.max_iters = 10000;
    classical_config.conv_tol = 0.0;  // run the full budget; no early stop
    classical_config.trace_every = 1;
    classical_config.init = Init::custom(start);
    const SolverRun classical = rl_deblur(blurred, transfer, classical_config);
    double drift = 0.0;
    for (const TraceRow& row : classical.trace)
        drift = std::max(drift, std::abs(dot(spur, row.intensities) - c_start));
    ctx.check("classical RL keeps the seeded null component constant within 1e-10",
              drift <= 1e-10);

    // The regularized iteration has its own stationary null content (about
    // -0.045 here versus the original's -0.059), so the seed's fate is
    // measured differentially: the same run started without the seed gives
    // the baseline, and the seeded excess is the coefficient gap between the
    // two trajectories. It starts at exactly 0.05 and must shrink by 90%.
    SolverConfig reg_config;
    reg_config.max_iters = 10000;
    reg_config.conv_tol = 1e-12;
    reg_config.trace_every = 1;
    reg_config.init = Init::custom(start);
    const SolverRun regularized = rl_regularized(blurred, transfer, {1e-3}, reg_config);
    SolverConfig baseline_config = reg_config;
    baseline_config.init = Init::custom(original);
    const SolverRun baseline = rl_regularized(blurred, transfer, {1e-3}, baseline_config);
    const double excess_start = c_start - c_original;  // = 0.05 by construction
    const double excess_end =
        dot(spur, regularized.restored) - dot(spur, baseline.restored);
    ctx.check("regularization 1e-3 removes at least 90% of the seeded excess",
              std::abs(excess_end) <= 0.1 * std::abs(excess_start));

    CsvTable csv({"k", "c_classical", "excess_classical", "c_regularized",
                  "c_unseeded", "seeded_excess"});
    const std::size_t rows = std::min(
        {classical.trace.size(), regularized.trace.size(), baseline.trace.size()});
    for (std::size_t r = 0; r < rows; ++r) {
        const double cc = dot(spur, classical.trace[r].intensities);
        const double cr = dot(spur, regularized.trace[r].intensities);
        const double cb = dot(spur, baseline.trace[r].intensities);
        csv.add_row({std::to_string(classical.trace[r].iteration), format_float(cc),
                     format_float(cc - c_original), format_float(cr), format_float(cb),
                     format_float(cr - cb)});
    }
    ctx.write("fig8_null_coefficient.csv", csv.to_string());
    ctx.write("fig8_classical.csv", restored_csv(original, blurred, classical.restored));
    ctx.write("fig8_lambda1e-3.csv", restored_csv(original, blurred, regularized.restored));
}

}  // namespace

const std::vector<std::string>& reproduce_case_names() {
    static const std::vector<std::string> names = {"table1", "table2", "fig5",
                                                   "fig6",   "fig7",   "fig8"};
    return names;
}

std::vector<CheckResult> run_reproduce_case(const std::string& name,
                                            const std::filesystem::path& outdir) {
    CaseContext ctx;
    ctx.name = name;
    ctx.dir = outdir;
    if (name == "table1")
        case_table1(ctx);
    else if (name == "table2")
        case_table2(ctx);
    else if (name == "fig5")
        case_fig5(ctx);
    else if (name == "fig6")
        case_fig6(ctx);
    else if (name == "fig7")
        case_fig7(ctx);
    else if (name == "fig8")
        case_fig8(ctx);
    else
        throw std::invalid_argument("unknown reproduction case: " + name);
    return ctx.checks;
}

bool reproduce_suite(const std::string& only, const std::filesystem::path& outdir,
                     std::ostream& out) {
    bool all_passed = true;
    for (const std::string& name : reproduce_case_names()) {
        if (!only.empty() && name != only) continue;
        const std::vector<CheckResult> checks = run_reproduce_case(name, outdir);
        for (const CheckResult& check : checks) {
            const char* label = check.informational ? "INFO" : (check.passed ? "PASS" : "FAIL");
            out << label << "  " << check.case_name << ": " << check.description << "\n";
            if (!check.informational && !check.passed) all_passed = false;
        }
    }
    return all_passed;
}

}  // namespace deblur
