#include "gcollapse/csv.hpp"

#include <cstdio>
#include <fstream>

#include "gcollapse/error.hpp"

namespace gcollapse::csv {

void Table::add(std::vector<std::string> row) {
    if (row.size() != header.size()) {
        throw DimensionError("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                             std::to_string(header.size()));
    }
    rows.push_back(std::move(row));
}

std::string number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string integer(std::uint64_t value) { return std::to_string(value); }

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render(const Table& table) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += quote(cells[i]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return out;
}

void write(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("csv: cannot open '" + path + "' for writing");
    const std::string text = render(table);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("csv: write to '" + path + "' failed");
}

}  // namespace gcollapse::csv
