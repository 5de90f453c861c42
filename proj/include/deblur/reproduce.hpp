#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace deblur {

/// Pixel-indexed comparison table: one named column per image, n rows.
struct GoldenTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string golden_table_csv(const GoldenTable& table);

/// One golden check inside a bundled reproduction case. Informational rows
/// report context (no pass/fail semantics) and never fail a run.
struct CheckResult {
    std::string case_name;
    std::string description;
    bool informational = false;
    bool passed = false;
};

/// Names of the bundled cases, in execution order.
const std::vector<std::string>& reproduce_case_names();

/// Runs one bundled case, writing its data files under outdir. Throws
/// std::invalid_argument for an unknown case name.
std::vector<CheckResult> run_reproduce_case(const std::string& name,
                                            const std::filesystem::path& outdir);

/// Runs all bundled cases (or just `only` when nonempty), printing one line
/// per check to `out`. Returns true when every non-informational check
/// passed.
bool reproduce_suite(const std::string& only, const std::filesystem::path& outdir,
                     std::ostream& out);

}  // namespace deblur
