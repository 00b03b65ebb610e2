#include "pvaudit/csv.hpp"

#include "pvaudit/errors.hpp"

#include <algorithm>
#include <cctype>

namespace pvaudit::csv {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

bool blank(const std::vector<std::string>& record) {
    return record.size() == 1 && trim(record[0]).empty();
}

} // namespace

std::string trim(std::string_view s) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (iequals(trim(header[i]), trim(name))) {
            return i;
        }
    }
    return std::nullopt;
}

Table parse(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool pending = false; // something has been read for the current record

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            pending = true;
            break;
        case ',':
            record.push_back(std::move(field));
            field.clear();
            pending = true;
            break;
        case '\r':
            break;
        case '\n':
            record.push_back(std::move(field));
            field.clear();
            if (!blank(record)) {
                records.push_back(std::move(record));
            }
            record.clear();
            pending = false;
            break;
        default:
            field += c;
            pending = true;
        }
    }
    if (in_quotes) {
        throw ValidationError(records.empty() ? 0 : records.size(), "unterminated quoted field");
    }
    if (pending) {
        record.push_back(std::move(field));
        if (!blank(record)) {
            records.push_back(std::move(record));
        }
    }

    if (records.empty()) {
        throw SchemaError("CSV input has no header row");
    }
    Table table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw ValidationError(r, "expected " + std::to_string(table.header.size()) +
                                         " fields, found " + std::to_string(records[r].size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

std::string escape(std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                              std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

} // namespace pvaudit::csv
