#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Regenerates the printed tables and figure diagnostics of the audited
// meta-analysis and diffs every cell against the transcribed value.
namespace pvaudit::reproduce {

enum class CellStatus {
    match,
    // Printed value is smaller than the supplied rows allow but equals the
    // step-up minimum once an unprinted tail term is admitted; it cannot be
    // checked further without the full family.
    tail_dependent,
    mismatch,
    skipped,
};

std::string_view to_string(CellStatus status) noexcept;

struct CellDiff {
    std::string row;
    std::string column;
    std::optional<double> expected;
    std::optional<double> got;
    double tolerance = 0.0;
    CellStatus status = CellStatus::skipped;
    std::string note;
};

struct Result {
    std::string id;
    std::vector<CellDiff> cells;
    bool incomplete = false; // supplemental data needed but absent
    std::string message;
    std::vector<std::filesystem::path> artifacts;

    std::size_t count(CellStatus status) const;
    bool has_mismatch() const { return count(CellStatus::mismatch) > 0; }
};

// Known targets: table1..table5, fig1..fig4.
bool is_known_target(std::string_view id);

// Figures read <data_dir>/<id>.csv (correlations.csv schema). Throws
// UsageError for an unknown id.
Result run(std::string_view id, const std::optional<std::filesystem::path>& data_dir,
           const std::optional<std::filesystem::path>& out_dir);

// Human-readable per-cell diff and summary line.
std::string format(const Result& result);

} // namespace pvaudit::reproduce
