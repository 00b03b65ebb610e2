#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC 4180 reader/writer: comma separated, double-quoted fields may
// contain commas, quotes ("") and newlines. Blank lines are skipped.
namespace pvaudit::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Position of a header column, matched case-insensitively after trimming.
    std::optional<std::size_t> column(std::string_view name) const;
};

// Throws ValidationError on an unterminated quote or a row whose field count
// differs from the header. Throws SchemaError when there is no header.
Table parse(std::string_view text);

// Quotes the field if it contains the delimiter, a quote, or a line break.
std::string escape(std::string_view field, char delimiter = ',');

std::string trim(std::string_view s);

} // namespace pvaudit::csv
