#pragma once

#include "pvaudit/numerics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pvaudit::multiplicity {

inline constexpr const char* kIndependenceWarning =
    "Fisher's combined test assumes independent p-values; effect sizes drawn from the same "
    "study are dependent, so the combined p-value is not calibrated for this family.";

struct CombinedTestResult {
    double chi_square = 0.0; // -2 sum ln p_i
    int df = 0;              // 2k
    double p = 1.0;          // chi-square upper tail at df
    std::size_t k = 0;
    std::string independence_warning = kIndependenceWarning;
};

// Throws UsageError on an empty list, DomainError on any p outside (0, 1].
CombinedTestResult fisher_combine(std::span<const double> ps);
// Same test fed from log-domain p-values, for families with p below DBL_MIN.
CombinedTestResult fisher_combine(std::span<const numerics::LogTail> ps);

struct AdjustedP {
    double unadjusted = 0.0;
    double adjusted = 0.0;
    std::size_t original_index = 0;
    std::size_t rank = 0; // 1-based, ascending unadjusted p, ties in input order
};

struct AdjustmentResult {
    std::vector<AdjustedP> entries; // caller's input order
    std::size_t m = 0;              // family size used in the step-up factor

    // Entries reordered by rank.
    std::vector<AdjustedP> by_rank() const;
};

// Benjamini-Hochberg step-up adjustment:
//   adjusted_(i) = min(1, min_{j >= i} p_(j) * m / j)
// with j ranging over the supplied values. When only the smallest values of a
// larger family are supplied, pass the full family size as `family`; the
// supplied values must then be that family's smallest.
//
// Throws UsageError for an empty list or family < ps.size(), DomainError for
// p outside (0, 1].
AdjustmentResult bh_adjust(std::span<const double> ps, std::optional<std::size_t> family = {});

} // namespace pvaudit::multiplicity
