#include "geoflow/app/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <variant>

namespace geoflow::app {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace {

json coords_json(const GridSpec& grid, std::size_t site) {
    json out = json::array();
    const auto c = grid.coords(site);
    for (int i = 0; i < grid.dim(); ++i) out.push_back(c[i]);
    return out;
}

}  // namespace

json maximizer_json(const GridSpec& grid, const norms::Maximizer& where) {
    return std::visit(
        [&](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, norms::BallSpec>) {
                return {{"kind", "ball"}, {"center", m.center}, {"coords", coords_json(grid, m.center)},
                        {"radius", m.radius}};
            } else if constexpr (std::is_same_v<T, norms::ParabolicCylinder>) {
                return {{"kind", "cylinder"}, {"center", m.center}, {"coords", coords_json(grid, m.center)},
                        {"radius", m.radius}, {"last_slice", m.last_slice}};
            } else if constexpr (std::is_same_v<T, norms::SliceIndex>) {
                return {{"kind", "slice"}, {"slice", m.slice}, {"time", m.time}};
            } else {
                return {{"kind", "none"}};
            }
        },
        where);
}

json norm_report_json(const GridSpec& grid, const norms::NormReport& report) {
    json terms = json::object();
    for (const auto& t : report.terms) terms[t.name] = t.value;
    return {{"value", report.value}, {"terms", terms}, {"maximizer", maximizer_json(grid, report.maximizer)}};
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::cell(std::string_view text) {
    if (text.find_first_of(",\"\n") != std::string_view::npos) {
        throw std::invalid_argument("csv cell needs quoting: " + std::string(text));
    }
    current_.emplace_back(text);
    return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable& CsvTable::cell(long long v) { return cell(std::to_string(v)); }

CsvTable& CsvTable::cell(bool v) { return cell(v ? "true" : "false"); }

CsvTable& CsvTable::empty() { return cell(""); }

void CsvTable::end_row() {
    if (current_.size() != columns_.size()) throw std::logic_error("csv row width differs from header");
    rows_.push_back(std::move(current_));
    current_.clear();
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace geoflow::app
