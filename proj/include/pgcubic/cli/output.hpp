#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "pgcubic/cli/config.hpp"

namespace pgcubic::cli {

/// One table cell.  std::monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

/// A run's tabular result plus its metadata echo.  CSV renders meta as
/// leading '# key=value' lines; JSON as the "meta" object.
struct OutputDoc {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Round-trip-safe float formatting (17 significant digits).
std::string format_double(double v);

void write_csv(const OutputDoc& doc, std::ostream& out);
void write_json(const OutputDoc& doc, std::ostream& out);
void write_doc(const OutputDoc& doc, Format format, std::ostream& out);

}  // namespace pgcubic::cli
