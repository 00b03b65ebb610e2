#pragma once

#include "pvaudit/dataset.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Values transcribed from the audited publication's printed tables. Only
// printed values are included; full figure data must be supplied by the user.
namespace pvaudit::fixtures {

// A row of an FDR table that prints labels and p-values but no (r, n).
struct PrintedPValueRow {
    std::string_view criterion;
    double unadjusted;
    double adjusted;
};

// A row of an FDR table that prints (r, n).
struct PrintedCorrelationRow {
    int rank;
    double r;
    int n;
    double unadjusted;
    double adjusted;
};

struct PrintedOneSampleRow {
    std::string_view study;
    int year;
    int n;
    std::optional<double> mean;
    std::optional<double> sd;
    std::optional<double> se;
    std::optional<double> neg_log10_p;
    std::optional<int> rank;
    dataset::Association association;
};

// Metadata of an FDR table: which figure family it belongs to, the family size
// m and the number of decimals the values are printed with.
struct FdrTableInfo {
    std::string_view id;
    std::size_t family;
    int decimals;
    dataset::Instrument instrument;
    std::string_view category;
};

struct FigureFacts {
    std::string_view id;
    dataset::Instrument instrument;
    std::string_view category;
    std::size_t k;
    std::optional<std::size_t> n_negative;
    std::optional<std::size_t> n_below_alpha;
    double chi_square;
    double combined_p;         // printed value, or the printed bound
    bool combined_p_is_bound;  // printed as "< value"
    std::string_view fdr_table; // id of the matching FDR table
};

std::span<const PrintedPValueRow> table1();
std::span<const PrintedPValueRow> table2();
std::span<const PrintedCorrelationRow> table3();
std::span<const PrintedCorrelationRow> table4();
std::span<const PrintedOneSampleRow> table5();

// "table1".."table4"; throws UsageError otherwise.
const FdrTableInfo& fdr_table_info(std::string_view id);
// "fig1".."fig4"; throws UsageError otherwise.
const FigureFacts& figure(std::string_view id);
std::span<const FigureFacts> figures();

// Tables 3 and 4 as correlation datasets (rows in printed rank order).
dataset::Dataset correlation_table_dataset(std::string_view id);
// Table 5 as one-sample records.
std::vector<dataset::OneSampleRecord> one_sample_records();

} // namespace pvaudit::fixtures
