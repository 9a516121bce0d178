#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcollapse::csv {

// A table with a fixed header. Cells are pre-formatted text; numbers go
// through `number` so every output carries 17 significant digits.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);  // throws DimensionError on width mismatch
};

std::string number(double value);
std::string integer(std::uint64_t value);

// RFC 4180 field quoting: fields holding a comma, quote, CR or LF are quoted
// and embedded quotes doubled.
std::string quote(const std::string& field);

std::string render(const Table& table);
void write(const Table& table, const std::string& path);

}  // namespace gcollapse::csv
