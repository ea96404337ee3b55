#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "geoflow/grid.hpp"
#include "geoflow/norms.hpp"

namespace geoflow::app {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

nlohmann::json maximizer_json(const GridSpec& grid, const norms::Maximizer& where);

/// {"value": ..., "terms": {name: value, ...}, "maximizer": {...}}
nlohmann::json norm_report_json(const GridSpec& grid, const norms::NormReport& report);

/// Comma-separated table with a fixed header. Cells are written verbatim.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    CsvTable& cell(std::string_view text);
    CsvTable& cell(const char* text) { return cell(std::string_view(text)); }
    CsvTable& cell(double v);
    CsvTable& cell(long long v);
    CsvTable& cell(bool v);
    CsvTable& empty();
    /// Closes the current row; throws if its width differs from the header.
    void end_row();

    const std::vector<std::string>& columns() const { return columns_; }
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> current_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace geoflow::app
