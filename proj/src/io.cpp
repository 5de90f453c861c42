#include "deblur/io.hpp"

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <utility>

#include <json.hpp>

namespace deblur {

std::string format_float(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("csv: row width does not match the header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("rename failed for " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Image image_from_csv_text(const std::string& content) {
    Image values;
    std::istringstream in(content);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.rfind(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        std::size_t used = 0;
        double parsed = 0.0;
        bool numeric = true;
        try {
            parsed = std::stod(cell, &used);
        } catch (const std::exception&) {
            numeric = false;
        }
        if (numeric && used != cell.size()) numeric = false;
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header row
            }
            throw std::invalid_argument("csv image: non-numeric cell '" + cell + "'");
        }
        first = false;
        values.push_back(parsed);
    }
    if (values.empty()) throw std::invalid_argument("csv image: no data rows");
    return values;
}

Image image_from_json_text(const std::string& content) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("json image: ") + e.what());
    }
    if (!parsed.is_array()) throw std::invalid_argument("json image: expected an array of numbers");
    Image values;
    values.reserve(parsed.size());
    for (const auto& v : parsed) {
        if (!v.is_number()) throw std::invalid_argument("json image: expected an array of numbers");
        values.push_back(v.get<double>());
    }
    if (values.empty()) throw std::invalid_argument("json image: empty array");
    return values;
}

Image read_image_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    if (path.extension() == ".json") return image_from_json_text(content);
    return image_from_csv_text(content);
}

}  // namespace deblur
