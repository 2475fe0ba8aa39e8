#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "urdf_inspect/bundle_scan.hpp"

namespace urdf_inspect {

using Cell = std::variant<std::string, long long, double, bool>;

class ReportTable {
public:
    ReportTable(std::string name, std::vector<std::string> columns)
        : name_(std::move(name)), columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) {
            throw std::invalid_argument("table '" + name_ + "': row has " +
                                        std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(columns_.size()));
        }
        rows_.push_back(std::move(row));
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

enum class Format { csv, json };

inline std::string_view extension_for(Format f) noexcept { return f == Format::csv ? "csv" : "json"; }

namespace detail {

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string cell_text(const Cell& c) {
    struct {
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    } visitor;
    return std::visit(visitor, c);
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
        }
        nlohmann::ordered_json operator()(bool b) const { return b; }
    } visitor;
    return std::visit(visitor, c);
}

}  // namespace detail

// CSV with a header row and RFC-4180 quoting.
inline std::string to_csv(const ReportTable& table) {
    std::string out;
    auto emit_line = [&out](const auto& cells, auto&& text) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += detail::csv_field(text(cells[i]));
        }
        out.push_back('\n');
    };
    emit_line(table.columns(), [](const std::string& s) { return s; });
    for (const auto& row : table.rows()) emit_line(row, detail::cell_text);
    return out;
}

// JSON array of objects keyed by column name, in column order.
inline std::string to_json(const ReportTable& table) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows()) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns()[i]] = detail::cell_json(row[i]);
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

inline std::string render(const ReportTable& table, Format format) {
    return format == Format::csv ? to_csv(table) : to_json(table);
}

// Writes the table to `sink`; returns the number of bytes written.
inline std::size_t emit(const ReportTable& table, Format format, std::ostream& sink) {
    std::string bytes = render(table, format);
    sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    sink.flush();
    if (!sink) throw IoError("failed writing table '" + table.name() + "'");
    return bytes.size();
}

// Writes `<dir>/<table name>.<csv|json>`.
inline std::size_t emit_to_dir(const ReportTable& table, Format format,
                               const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto path = dir / (table.name() + "." + std::string(extension_for(format)));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return emit(table, format, out);
}

}  // namespace urdf_inspect
