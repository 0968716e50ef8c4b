#include "pgcubic/cli/output.hpp"

#include <cstdio>

#include <json.hpp>

namespace pgcubic::cli {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell_to_csv(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return "";
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "1" : "0";
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_to_json(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return nullptr;
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
}

}  // namespace

void write_csv(const OutputDoc& doc, std::ostream& out) {
    for (const auto& [key, value] : doc.meta) out << "# " << key << "=" << cell_to_csv(value) << "\n";
    for (size_t i = 0; i < doc.columns.size(); ++i)
        out << doc.columns[i] << (i + 1 < doc.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : doc.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << cell_to_csv(row[i]) << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

void write_json(const OutputDoc& doc, std::ostream& out) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : doc.meta) meta[key] = cell_to_json(value);
    j["meta"] = meta;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : doc.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (size_t i = 0; i < row.size(); ++i) r[doc.columns[i]] = cell_to_json(row[i]);
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    out << j.dump(2) << "\n";
}

void write_doc(const OutputDoc& doc, Format format, std::ostream& out) {
    if (format == Format::kCsv)
        write_csv(doc, out);
    else
        write_json(doc, out);
}

}  // namespace pgcubic::cli
