#include "pvaudit/reproduce.hpp"

#include "pvaudit/corrstats.hpp"
#include "pvaudit/dataset.hpp"
#include "pvaudit/errors.hpp"
#include "pvaudit/fixtures.hpp"
#include "pvaudit/multiplicity.hpp"
#include "pvaudit/pvplot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

namespace pvaudit::reproduce {

namespace {

constexpr std::array<std::string_view, 9> kTargets{"table1", "table2", "table3", "table4", "table5",
                                                   "fig1",   "fig2",   "fig3",   "fig4"};

// Tolerances per quantity.
constexpr double kCorrelationPTolerance = 2e-5; // absorbs 3-4 significant digits in printed r
constexpr double kNegLog10Tolerance = 0.01;
constexpr double kChiSquareTolerance = 0.5;
constexpr double kCombinedPTolerance = 0.005;

double half_unit(int decimals) { return 0.5 * std::pow(10.0, -decimals); }

CellDiff compare(std::string row, std::string column, double expected, double got, double tol) {
    CellDiff cell{std::move(row), std::move(column), expected, got, tol, CellStatus::match, {}};
    if (!(std::abs(got - expected) <= tol)) {
        cell.status = CellStatus::mismatch;
    }
    return cell;
}

void write_file(const std::filesystem::path& path, const std::string& content, Result& result) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << content;
    result.artifacts.push_back(path);
}

struct FdrRow {
    std::string label;
    double printed_p;
    double printed_adjusted;
    std::optional<double> computed_p; // from (r, n) when the table prints them
};

// BH over the supplied rows with family m. When only the s smallest of m are
// known, a printed adjusted value can legitimately sit below what the s rows
// allow (the step-up minimum came from an unprinted rank). A single tail term
// T, fitted from the last row, must then explain every such cell:
// adjusted_i = min(computed_i, T), and T >= p_(s) is required.
void compare_fdr(const std::vector<FdrRow>& rows, std::size_t family, int decimals, Result& result) {
    std::vector<double> ps;
    for (const auto& row : rows) {
        ps.push_back(row.computed_p.value_or(row.printed_p));
    }
    const auto adj = multiplicity::bh_adjust(ps, family);
    const double h = half_unit(decimals);
    const std::size_t s = rows.size();
    const auto tol_for = [&](std::size_t rank) {
        return h * (1.0 + static_cast<double>(family) / static_cast<double>(rank));
    };

    std::vector<const multiplicity::AdjustedP*> ranked(s);
    for (const auto& e : adj.entries) {
        ranked[e.rank - 1] = &e;
    }

    std::optional<double> tail;
    {
        const auto& last = *ranked[s - 1];
        const double printed = rows[last.original_index].printed_adjusted;
        if (std::abs(last.adjusted - printed) > tol_for(s) && printed < last.adjusted && s < family &&
            printed >= last.unadjusted) {
            tail = printed;
        }
    }

    for (std::size_t i = 0; i < s; ++i) {
        const auto& e = *ranked[i];
        const FdrRow& row = rows[e.original_index];
        const std::string label = fmt::format("rank {:>2} {}", i + 1, row.label);

        if (row.computed_p) {
            result.cells.push_back(compare(label, "p", row.printed_p, *row.computed_p, kCorrelationPTolerance));
        } else {
            CellDiff input{label, "p", row.printed_p, row.printed_p, 0.0, CellStatus::skipped,
                           "printed input"};
            result.cells.push_back(std::move(input));
        }

        CellDiff cell = compare(label, "p_adjusted", row.printed_adjusted, e.adjusted, tol_for(i + 1));
        if (cell.status == CellStatus::mismatch && tail &&
            std::abs(std::min(e.adjusted, *tail) - row.printed_adjusted) <= tol_for(i + 1)) {
            cell.status = CellStatus::tail_dependent;
            cell.note = fmt::format("needs unprinted ranks > {} of {}", s, family);
        }
        result.cells.push_back(std::move(cell));
    }
}

Result reproduce_pvalue_table(std::string_view id, std::span<const fixtures::PrintedPValueRow> printed,
                              const std::optional<std::filesystem::path>& out_dir) {
    const auto& info = fixtures::fdr_table_info(id);
    Result result;
    result.id = std::string(id);
    std::vector<FdrRow> rows;
    for (const auto& row : printed) {
        rows.push_back({std::string(row.criterion), row.unadjusted, row.adjusted, std::nullopt});
    }
    compare_fdr(rows, info.family, info.decimals, result);
    result.message = fmt::format("partial mode: {} printed pairs, family m = {}", rows.size(), info.family);

    if (out_dir) {
        std::vector<pvplot::PValueInput> inputs;
        std::vector<std::string> labels;
        for (const auto& row : printed) {
            inputs.push_back({row.unadjusted, corrstats::Sign::zero, std::nullopt});
            labels.emplace_back(row.criterion);
        }
        const auto plot = pvplot::build_plot(inputs);
        const auto adj = pvplot::adjust_top(plot, plot.k, info.family);
        write_file(*out_dir / fmt::format("{}.csv", id),
                   pvplot::render_table(plot, adj, labels, {',', info.decimals}), result);
    }
    return result;
}

Result reproduce_correlation_table(std::string_view id, std::span<const fixtures::PrintedCorrelationRow> printed,
                                   const std::optional<std::filesystem::path>& out_dir) {
    const auto& info = fixtures::fdr_table_info(id);
    Result result;
    result.id = std::string(id);
    std::vector<FdrRow> rows;
    for (const auto& row : printed) {
        const auto test = corrstats::correlation_p(corrstats::EffectSize(row.r, row.n));
        rows.push_back({fmt::format("(r={}, n={})", row.r, row.n), row.unadjusted, row.adjusted, test.p});
    }
    compare_fdr(rows, info.family, info.decimals, result);
    result.message = fmt::format("{} printed rows recomputed from (r, n), family m = {}", rows.size(),
                                 info.family);

    if (out_dir) {
        const auto data = fixtures::correlation_table_dataset(id);
        const auto plot = pvplot::build_plot(data);
        const auto adj = pvplot::adjust_top(plot, plot.k, info.family);
        write_file(*out_dir / fmt::format("{}.csv", id), pvplot::render_table(plot, adj, data), result);
        write_file(*out_dir / fmt::format("{}.svg", id),
                   pvplot::render_svg(plot, {640, 480, std::string(id), "Rank", "p-value"}), result);
    }
    return result;
}

Result reproduce_one_sample(const std::optional<std::filesystem::path>& out_dir) {
    Result result;
    result.id = "table5";
    struct Computed {
        std::size_t row;
        double value;
    };
    std::vector<Computed> computed;
    const auto printed = fixtures::table5();
    for (std::size_t i = 0; i < printed.size(); ++i) {
        const auto& row = printed[i];
        const std::string label = fmt::format("{} {}", row.study, row.year);
        if (!row.mean || !row.se || !row.neg_log10_p) {
            result.cells.push_back({label, "neg_log10_p", std::nullopt, std::nullopt, 0.0,
                                    CellStatus::skipped, "no summary reported"});
            continue;
        }
        const double got =
            corrstats::one_sample_neglog10({*row.mean, row.se, row.sd, row.n}).neg_log10_p();
        result.cells.push_back(compare(label, "neg_log10_p", *row.neg_log10_p, got, kNegLog10Tolerance));
        computed.push_back({i, got});
    }
    // Rank column: 1 = smallest p = largest -log10 p.
    std::stable_sort(computed.begin(), computed.end(),
                     [](const Computed& a, const Computed& b) { return a.value > b.value; });
    for (std::size_t r = 0; r < computed.size(); ++r) {
        const auto& row = printed[computed[r].row];
        result.cells.push_back(compare(fmt::format("{} {}", row.study, row.year), "rank",
                                       static_cast<double>(*row.rank), static_cast<double>(r + 1), 0.0));
    }
    const std::size_t matched = static_cast<std::size_t>(std::count_if(
        result.cells.begin(), result.cells.end(),
        [](const CellDiff& c) { return c.column == "neg_log10_p" && c.status == CellStatus::match; }));
    result.message = fmt::format("{} of {} rows matched within {}", matched, printed.size(), kNegLog10Tolerance);

    if (out_dir) {
        std::string csv = "study,year,n,mean,sd,se,neg_log10_p\n";
        for (const auto& rec : fixtures::one_sample_records()) {
            if (!rec.summary) {
                csv += fmt::format("{},{},{},,,,\n", rec.study, rec.year, rec.n.value_or(0));
                continue;
            }
            csv += fmt::format("{},{},{},{},{},{},{:.6f}\n", rec.study, rec.year, rec.n.value_or(0),
                               rec.summary->mean, rec.summary->sd.value_or(0.0), *rec.summary->se,
                               corrstats::one_sample_neglog10(*rec.summary).neg_log10_p());
        }
        write_file(*out_dir / "table5.csv", csv, result);
    }
    return result;
}

Result reproduce_figure(std::string_view id, const std::optional<std::filesystem::path>& data_dir,
                        const std::optional<std::filesystem::path>& out_dir) {
    const auto& facts = fixtures::figure(id);
    Result result;
    result.id = std::string(id);
    if (!data_dir || !std::filesystem::exists(*data_dir / fmt::format("{}.csv", id))) {
        result.incomplete = true;
        result.message = fmt::format(
            "fixture incomplete: {} needs the full {}-record supplemental dataset as {}.csv "
            "(correlations.csv schema) in --data-dir or PVAUDIT_SUPPLEMENTAL_DIR",
            id, facts.k, id);
        return result;
    }

    const auto data = dataset::load_correlation_csv(*data_dir / fmt::format("{}.csv", id));
    const auto plot = pvplot::build_plot(data);
    result.cells.push_back(compare("plot", "k", static_cast<double>(facts.k), static_cast<double>(plot.k), 0.0));
    if (facts.n_negative) {
        result.cells.push_back(compare("plot", "n_negative", static_cast<double>(*facts.n_negative),
                                       static_cast<double>(plot.n_negative), 0.0));
    }
    if (facts.n_below_alpha) {
        result.cells.push_back(compare("plot", "n_below_0.05", static_cast<double>(*facts.n_below_alpha),
                                       static_cast<double>(plot.n_below_alpha), 0.0));
    }

    std::vector<numerics::LogTail> logs;
    for (const auto& e : plot.entries) {
        logs.push_back(e.log_p);
    }
    const auto combined = multiplicity::fisher_combine(logs);
    result.cells.push_back(compare("combined", "chi_square", facts.chi_square, combined.chi_square,
                                   kChiSquareTolerance));
    if (facts.combined_p_is_bound) {
        CellDiff cell{"combined", "p (< bound)", facts.combined_p, combined.p, 0.0,
                      combined.p < facts.combined_p ? CellStatus::match : CellStatus::mismatch, {}};
        result.cells.push_back(std::move(cell));
    } else {
        result.cells.push_back(compare("combined", "p", facts.combined_p, combined.p, kCombinedPTolerance));
    }

    // The matching FDR table, now with the complete family available.
    const auto& info = fixtures::fdr_table_info(facts.fdr_table);
    std::vector<std::pair<double, double>> printed; // unadjusted, adjusted
    if (facts.fdr_table == "table1" || facts.fdr_table == "table2") {
        for (const auto& row : facts.fdr_table == "table1" ? fixtures::table1() : fixtures::table2()) {
            printed.emplace_back(row.unadjusted, row.adjusted);
        }
    } else {
        for (const auto& row : facts.fdr_table == "table3" ? fixtures::table3() : fixtures::table4()) {
            printed.emplace_back(row.unadjusted, row.adjusted);
        }
    }
    const auto adj = pvplot::adjust_top(plot, printed.size(), plot.k);
    const double h = half_unit(info.decimals);
    for (const auto& e : adj.by_rank()) {
        const auto& [p_printed, adj_printed] = printed[e.rank - 1];
        const std::string label = fmt::format("{} rank {:>2}", info.id, e.rank);
        result.cells.push_back(compare(label, "p", p_printed, e.unadjusted, std::max(h, kCorrelationPTolerance)));
        result.cells.push_back(compare(label, "p_adjusted", adj_printed, e.adjusted,
                                       h * (1.0 + static_cast<double>(plot.k) / static_cast<double>(e.rank))));
    }
    result.message = fmt::format("full dataset: {} records from {}", plot.k, data.source);

    if (out_dir) {
        write_file(*out_dir / fmt::format("{}.svg", id),
                   pvplot::render_svg(plot, {640, 480, fmt::format("P-value plot of {} correlations", plot.k),
                                             "Rank", "p-value"}),
                   result);
        write_file(*out_dir / fmt::format("{}_{}.csv", id, info.id),
                   pvplot::render_table(plot, adj, data, {',', 6}), result);
    }
    return result;
}

std::string format_value(const std::optional<double>& v) {
    if (!v) {
        return "-";
    }
    if (*v == std::floor(*v) && std::abs(*v) < 1e9) {
        return fmt::format("{:.0f}", *v);
    }
    return fmt::format("{:.6f}", *v);
}

} // namespace

std::string_view to_string(CellStatus status) noexcept {
    switch (status) {
    case CellStatus::match:
        return "ok";
    case CellStatus::tail_dependent:
        return "tail";
    case CellStatus::mismatch:
        return "MISMATCH";
    case CellStatus::skipped:
        return "skipped";
    }
    return "skipped";
}

std::size_t Result::count(CellStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [&](const CellDiff& c) { return c.status == status; }));
}

bool is_known_target(std::string_view id) {
    return std::find(kTargets.begin(), kTargets.end(), id) != kTargets.end();
}

Result run(std::string_view id, const std::optional<std::filesystem::path>& data_dir,
           const std::optional<std::filesystem::path>& out_dir) {
    if (!is_known_target(id)) {
        throw UsageError("unknown reproduction target '" + std::string(id) +
                         "' (expected table1..table5 or fig1..fig4)");
    }
    if (id == "table1") {
        return reproduce_pvalue_table(id, fixtures::table1(), out_dir);
    }
    if (id == "table2") {
        return reproduce_pvalue_table(id, fixtures::table2(), out_dir);
    }
    if (id == "table3") {
        return reproduce_correlation_table(id, fixtures::table3(), out_dir);
    }
    if (id == "table4") {
        return reproduce_correlation_table(id, fixtures::table4(), out_dir);
    }
    if (id == "table5") {
        return reproduce_one_sample(out_dir);
    }
    return reproduce_figure(id, data_dir, out_dir);
}

std::string format(const Result& result) {
    std::string out = fmt::format("{}: {}\n", result.id, result.message);
    for (const auto& c : result.cells) {
        out += fmt::format("  {:<44} {:<12} expected {:>10}  got {:>10}  tol {:<8.1e} {}{}\n", c.row,
                           c.column, format_value(c.expected), format_value(c.got), c.tolerance,
                           to_string(c.status), c.note.empty() ? "" : " (" + c.note + ")");
    }
    if (!result.incomplete) {
        out += fmt::format("{}: {} ok, {} tail-dependent, {} mismatched, {} skipped\n", result.id,
                           result.count(CellStatus::match), result.count(CellStatus::tail_dependent),
                           result.count(CellStatus::mismatch), result.count(CellStatus::skipped));
    }
    for (const auto& path : result.artifacts) {
        out += fmt::format("wrote {}\n", path.string());
    }
    return out;
}

} // namespace pvaudit::reproduce
