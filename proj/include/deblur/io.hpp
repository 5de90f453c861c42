#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deblur/linalg.hpp"

namespace deblur {

/// Shortest fixed form with 9 significant digits ("%.9g"), '.' decimal
/// separator, no grouping. Used for every CSV cell so output diffs bytewise.
std::string format_float(double value);

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::size_t row_count() const { return rows_.size(); }
    std::string to_string() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes content to path via a sibling temp file plus rename, so concurrent
/// readers never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Extracts an image from CSV text: the last column of each data row, with an
/// optional non-numeric header row skipped.
Image image_from_csv_text(const std::string& content);

/// Parses a JSON array of numbers.
Image image_from_json_text(const std::string& content);

/// Reads an image from a .json or .csv file, dispatching on the extension
/// (anything other than .json is treated as CSV).
Image read_image_file(const std::filesystem::path& path);

}  // namespace deblur
