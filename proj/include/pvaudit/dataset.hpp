#pragma once

#include "pvaudit/corrstats.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pvaudit::dataset {

enum class Instrument { iat, explicit_measure };

std::string_view to_string(Instrument instrument) noexcept;
// Accepts "iat" or "explicit" (case-insensitive).
std::optional<Instrument> parse_instrument(std::string_view text);

// One study-level effect size.
struct CorrelationRecord {
    std::string study;
    std::string criterion;
    Instrument instrument = Instrument::iat;
    std::string category;
    corrstats::EffectSize effect;

    friend bool operator==(const CorrelationRecord&, const CorrelationRecord&) = default;
};

struct Dataset {
    std::vector<CorrelationRecord> records; // input order
    std::string source;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

// correlations.csv: study,criterion,instrument,category,r,n (extra columns are
// ignored). Throws SchemaError for a missing column and ValidationError, with
// the 1-based data row, for any bad value.
Dataset parse_correlation_csv(std::string_view text, std::string source = {});
Dataset load_correlation_csv(const std::filesystem::path& path);
std::string serialize_correlation_csv(const Dataset& dataset);

enum class Association { significant, non_significant, unknown };

std::string_view to_string(Association association) noexcept;

struct OneSampleRecord {
    std::string study;
    int year = 0;
    std::optional<int> n;
    std::optional<corrstats::OneSampleSummary> summary; // absent when no mean is reported
    Association association = Association::unknown;
};

// one_sample.csv: study,year,n,mean,sd,se[,association]. mean/sd/se may be
// empty. se is derived as sd / sqrt(n) only when the se field is empty.
std::vector<OneSampleRecord> parse_one_sample_csv(std::string_view text);
std::vector<OneSampleRecord> load_one_sample_csv(const std::filesystem::path& path);
std::string serialize_one_sample_csv(const std::vector<OneSampleRecord>& records);

struct LabeledPValue {
    std::string label;
    double p = 1.0;
};

// p-value list: a `p` column and an optional `label` column. Every p must lie
// in (0, 1].
std::vector<LabeledPValue> parse_pvalue_csv(std::string_view text);

// Whole file into memory; throws IoError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

} // namespace pvaudit::dataset
