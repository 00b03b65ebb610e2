#include "pvaudit/fixtures.hpp"

#include "pvaudit/errors.hpp"

#include <fmt/format.h>

#include <array>

namespace pvaudit::fixtures {

namespace {

using dataset::Association;
using dataset::Instrument;

constexpr std::array<PrintedPValueRow, 10> kTable1{{
    {"Cold", 0.000301, 0.022733},
    {"Speaking time", 0.000523, 0.022733},
    {"Hand/arm movement (load)", 0.002949, 0.085534},
    {"Speech errors", 0.005784, 0.121068},
    {"Expressive", 0.00766, 0.121068},
    {"Interactionally rigid", 0.009695, 0.121068},
    {"Smiling", 0.011133, 0.121068},
    {"Experiment's rating of interaction", 0.011133, 0.121068},
    {"Interactionally rigid", 0.013455, 0.130064},
    {"Seating selection", 0.015185, 0.130617},
}};

constexpr std::array<PrintedPValueRow, 5> kTable2{{
    {"Attitudes towards blacks, Carney", 0.0190, 0.5762},
    {"Attitudes towards blacks, Carney", 0.0284, 0.5762},
    {"Pro-black attitudes, Heider &...", 0.0301, 0.5762},
    {"Sem diff & F therm, McMonnell &...", 0.0346, 0.5762},
    {"Attitudes towards blacks, Carney", 0.0604, 0.8631},
}};

constexpr std::array<PrintedCorrelationRow, 10> kTable3{{
    {1, 0.582, 31, 0.000429, 0.032196},
    {2, 0.4182, 50, 0.002256, 0.084608},
    {3, 0.43, 31, 0.014952, 0.204054},
    {4, 0.46, 24, 0.022669, 0.204054},
    {5, 0.326, 47, 0.024811, 0.204054},
    {6, 0.217, 101, 0.029044, 0.204054},
    {7, -0.28, 60, 0.029859, 0.204054},
    {8, 0.48, 20, 0.031059, 0.204054},
    {9, 0.34, 39, 0.033624, 0.204054},
    {10, 0.24, 78, 0.034022, 0.204054},
}};

constexpr std::array<PrintedCorrelationRow, 5> kTable4{{
    {1, 0.700, 16, 0.001765, 0.106167},
    {2, 0.506, 32, 0.002688, 0.106167},
    {3, 0.320, 77, 0.004332, 0.114069},
    {4, -0.383, 35, 0.022434, 0.380790},
    {5, 0.390, 33, 0.024101, 0.380790},
}};

const std::array<PrintedOneSampleRow, 9> kTable5{{
    {"Blair", 2014, 138, 0.30, 0.29, 0.025, 32.44941, 7, Association::non_significant},
    {"Cassell", 2015, 216, 0.40, 0.43, 0.029, 42.55217, 5, Association::non_significant},
    {"Green", 2007, 287, 0.36, 0.40, 0.021, 65.14831, 2, Association::significant},
    {"Haider", 2014, 248, 0.41, 0.48, 0.024, 64.70442, 3, Association::non_significant},
    {"Haider", 2015, 215, 0.42, 0.41, 0.028, 50.13419, 4, Association::non_significant},
    {"Hirsh", 2015, 129, 0.50, 0.42, 0.037, 40.88553, 6, Association::non_significant},
    {"Oliver", 2014, 543, 0.43, 0.34, 0.0146, 189.9263, 1, Association::non_significant},
    {"Puumala", 2016, 48, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
     Association::non_significant},
    {"Sabin", 2008, 86, 0.18, 0.44, 0.048, 3.752433, 8, Association::non_significant},
}};

constexpr std::array<FdrTableInfo, 4> kFdrTables{{
    {"table1", 87, 6, Instrument::iat, "microbehavior"},
    {"table2", 83, 4, Instrument::explicit_measure, "microbehavior"},
    {"table3", 75, 6, Instrument::iat, "person_perception"},
    {"table4", 79, 6, Instrument::explicit_measure, "person_perception"},
}};

constexpr std::array<FigureFacts, 4> kFigures{{
    {"fig1", Instrument::iat, "microbehavior", 87, 30, 21, 322.51, 0.0001, true, "table1"},
    {"fig2", Instrument::explicit_measure, "microbehavior", 83, 33, std::nullopt, 160.63, 0.603,
     false, "table2"},
    {"fig3", Instrument::iat, "person_perception", 75, 26, std::nullopt, 249.82, 0.0001, true,
     "table3"},
    {"fig4", Instrument::explicit_measure, "person_perception", 79, 22, std::nullopt, 186.54, 0.0600,
     false, "table4"},
}};

} // namespace

std::span<const PrintedPValueRow> table1() { return kTable1; }
std::span<const PrintedPValueRow> table2() { return kTable2; }
std::span<const PrintedCorrelationRow> table3() { return kTable3; }
std::span<const PrintedCorrelationRow> table4() { return kTable4; }
std::span<const PrintedOneSampleRow> table5() { return kTable5; }

const FdrTableInfo& fdr_table_info(std::string_view id) {
    for (const auto& info : kFdrTables) {
        if (info.id == id) {
            return info;
        }
    }
    throw UsageError("unknown FDR table '" + std::string(id) + "'");
}

const FigureFacts& figure(std::string_view id) {
    for (const auto& fig : kFigures) {
        if (fig.id == id) {
            return fig;
        }
    }
    throw UsageError("unknown figure '" + std::string(id) + "'");
}

std::span<const FigureFacts> figures() { return kFigures; }

dataset::Dataset correlation_table_dataset(std::string_view id) {
    std::span<const PrintedCorrelationRow> rows;
    if (id == "table3") {
        rows = kTable3;
    } else if (id == "table4") {
        rows = kTable4;
    } else {
        throw UsageError("no correlation fixture for '" + std::string(id) + "'");
    }
    const FdrTableInfo& info = fdr_table_info(id);
    dataset::Dataset out;
    out.source = fmt::format("fixture:{}", id);
    for (const auto& row : rows) {
        out.records.push_back(dataset::CorrelationRecord{
            fmt::format("{}_rank{:02}", id, row.rank), fmt::format("rank {} of {}", row.rank, info.family),
            info.instrument, std::string(info.category), corrstats::EffectSize(row.r, row.n)});
    }
    return out;
}

std::vector<dataset::OneSampleRecord> one_sample_records() {
    std::vector<dataset::OneSampleRecord> out;
    for (const auto& row : kTable5) {
        dataset::OneSampleRecord rec;
        rec.study = std::string(row.study);
        rec.year = row.year;
        rec.n = row.n;
        rec.association = row.association;
        if (row.mean) {
            rec.summary = corrstats::OneSampleSummary{*row.mean, row.se, row.sd, row.n};
        }
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace pvaudit::fixtures
