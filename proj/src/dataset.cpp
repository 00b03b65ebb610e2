#include "pvaudit/dataset.hpp"

#include "pvaudit/csv.hpp"
#include "pvaudit/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pvaudit::dataset {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::size_t require_column(const csv::Table& table, std::string_view name) {
    if (auto col = table.column(name)) {
        return *col;
    }
    throw SchemaError("missing required column '" + std::string(name) + "'");
}

std::optional<double> parse_real(std::string_view raw, std::size_t row, std::string_view what) {
    std::string text = csv::trim(raw);
    if (text.empty()) {
        return std::nullopt;
    }
    std::string_view digits = text;
    if (digits.front() == '+') {
        digits.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || !std::isfinite(value)) {
        throw ValidationError(row, std::string(what) + " '" + text + "' is not a finite decimal number");
    }
    return value;
}

std::optional<int> parse_integer(std::string_view raw, std::size_t row, std::string_view what) {
    std::string text = csv::trim(raw);
    if (text.empty()) {
        return std::nullopt;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(row, std::string(what) + " '" + text + "' is not an integer");
    }
    return value;
}

std::string format_real(double v) { return fmt::format("{}", v); }

} // namespace

std::string_view to_string(Instrument instrument) noexcept {
    return instrument == Instrument::iat ? "iat" : "explicit";
}

std::optional<Instrument> parse_instrument(std::string_view text) {
    const std::string key = lower(csv::trim(text));
    if (key == "iat") {
        return Instrument::iat;
    }
    if (key == "explicit") {
        return Instrument::explicit_measure;
    }
    return std::nullopt;
}

std::string_view to_string(Association association) noexcept {
    switch (association) {
    case Association::significant:
        return "s";
    case Association::non_significant:
        return "ns";
    case Association::unknown:
        return "";
    }
    return "";
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "': file not found or unreadable");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Dataset parse_correlation_csv(std::string_view text, std::string source) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_study = require_column(table, "study");
    const std::size_t c_criterion = require_column(table, "criterion");
    const std::size_t c_instrument = require_column(table, "instrument");
    const std::size_t c_category = require_column(table, "category");
    const std::size_t c_r = require_column(table, "r");
    const std::size_t c_n = require_column(table, "n");

    Dataset out;
    out.source = std::move(source);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& fields = table.rows[i];
        const std::size_t row = i + 1;

        std::string study = csv::trim(fields[c_study]);
        std::string criterion = csv::trim(fields[c_criterion]);
        if (study.empty()) {
            throw ValidationError(row, "study is empty");
        }
        if (criterion.empty()) {
            throw ValidationError(row, "criterion is empty");
        }
        const auto instrument = parse_instrument(fields[c_instrument]);
        if (!instrument) {
            throw ValidationError(row, "unknown instrument '" + csv::trim(fields[c_instrument]) +
                                           "' (expected iat or explicit)");
        }
        const auto r = parse_real(fields[c_r], row, "r");
        if (!r) {
            throw ValidationError(row, "r is missing");
        }
        if (!(std::abs(*r) < 1.0)) {
            throw ValidationError(row, "r = " + format_real(*r) +
                                           " is outside (-1, 1); arctanh(r) diverges at |r| = 1");
        }
        const auto n = parse_integer(fields[c_n], row, "n");
        if (!n) {
            throw ValidationError(row, "n is missing");
        }
        if (*n <= 3) {
            throw ValidationError(row, "n = " + std::to_string(*n) +
                                           " must exceed 3; SE = 1/sqrt(n - 3) is undefined");
        }
        out.records.push_back(CorrelationRecord{std::move(study), std::move(criterion), *instrument,
                                                csv::trim(fields[c_category]),
                                                corrstats::EffectSize(*r, *n)});
    }
    return out;
}

Dataset load_correlation_csv(const std::filesystem::path& path) {
    return parse_correlation_csv(read_text_file(path), path.string());
}

std::string serialize_correlation_csv(const Dataset& dataset) {
    std::string out = "study,criterion,instrument,category,r,n\n";
    for (const auto& rec : dataset.records) {
        out += fmt::format("{},{},{},{},{},{}\n", csv::escape(rec.study), csv::escape(rec.criterion),
                           to_string(rec.instrument), csv::escape(rec.category),
                           format_real(rec.effect.r()), rec.effect.n());
    }
    return out;
}

std::vector<OneSampleRecord> parse_one_sample_csv(std::string_view text) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_study = require_column(table, "study");
    const std::size_t c_year = require_column(table, "year");
    const std::size_t c_n = require_column(table, "n");
    const std::size_t c_mean = require_column(table, "mean");
    const std::size_t c_sd = require_column(table, "sd");
    const std::size_t c_se = require_column(table, "se");
    const auto c_assoc = table.column("association");

    std::vector<OneSampleRecord> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& fields = table.rows[i];
        const std::size_t row = i + 1;

        OneSampleRecord rec;
        rec.study = csv::trim(fields[c_study]);
        if (rec.study.empty()) {
            throw ValidationError(row, "study is empty");
        }
        const auto year = parse_integer(fields[c_year], row, "year");
        if (!year) {
            throw ValidationError(row, "year is missing");
        }
        rec.year = *year;
        rec.n = parse_integer(fields[c_n], row, "n");
        if (rec.n && *rec.n < 2) {
            throw ValidationError(row, "n must be at least 2");
        }

        const auto mean = parse_real(fields[c_mean], row, "mean");
        const auto sd = parse_real(fields[c_sd], row, "sd");
        const auto se = parse_real(fields[c_se], row, "se");
        if (sd && *sd < 0.0) {
            throw ValidationError(row, "sd must be nonnegative");
        }
        if (se && *se < 0.0) {
            throw ValidationError(row, "se must be nonnegative");
        }
        if (mean) {
            corrstats::OneSampleSummary summary{*mean, se, sd, rec.n};
            if (!se && !(sd && rec.n)) {
                throw ValidationError(row, "mean given without se, or sd and n, to derive it");
            }
            if (!se) {
                summary.se = *sd / std::sqrt(static_cast<double>(*rec.n));
            }
            if (!(*summary.se > 0.0)) {
                throw ValidationError(row, "standard error must be positive");
            }
            rec.summary = summary;
        }

        if (c_assoc) {
            const std::string flag = lower(csv::trim(fields[*c_assoc]));
            if (flag == "s" || flag == "significant") {
                rec.association = Association::significant;
            } else if (flag == "ns" || flag == "non_significant") {
                rec.association = Association::non_significant;
            } else if (flag.empty() || flag == "unknown") {
                rec.association = Association::unknown;
            } else {
                throw ValidationError(row, "unknown association flag '" + flag + "'");
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<LabeledPValue> parse_pvalue_csv(std::string_view text) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_p = require_column(table, "p");
    const auto c_label = table.column("label");
    std::vector<LabeledPValue> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t row = i + 1;
        const auto p = parse_real(table.rows[i][c_p], row, "p");
        if (!p) {
            throw ValidationError(row, "p is missing");
        }
        if (!(*p > 0.0 && *p <= 1.0)) {
            throw ValidationError(row, "p = " + format_real(*p) + " is outside (0, 1]");
        }
        out.push_back({c_label ? csv::trim(table.rows[i][*c_label]) : std::to_string(row), *p});
    }
    return out;
}

std::vector<OneSampleRecord> load_one_sample_csv(const std::filesystem::path& path) {
    return parse_one_sample_csv(read_text_file(path));
}

std::string serialize_one_sample_csv(const std::vector<OneSampleRecord>& records) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; };
    std::string out = "study,year,n,mean,sd,se,association\n";
    for (const auto& rec : records) {
        std::string mean;
        std::string sd;
        std::string se;
        if (rec.summary) {
            mean = format_real(rec.summary->mean);
            sd = opt(rec.summary->sd);
            se = opt(rec.summary->se);
        }
        out += fmt::format("{},{},{},{},{},{},{}\n", csv::escape(rec.study), rec.year,
                           rec.n ? std::to_string(*rec.n) : std::string{}, mean, sd, se,
                           to_string(rec.association));
    }
    return out;
}

} // namespace pvaudit::dataset
