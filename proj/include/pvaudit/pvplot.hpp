#pragma once

#include "pvaudit/corrstats.hpp"
#include "pvaudit/dataset.hpp"
#include "pvaudit/multiplicity.hpp"
#include "pvaudit/numerics.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pvaudit::pvplot {

struct PValueEntry {
    double p = 1.0;
    numerics::LogTail log_p;
    std::size_t rank = 0; // 1-based
    corrstats::Sign sign = corrstats::Sign::zero;
    std::size_t record_ref = 0; // index into the source records
};

// Schweder-Spjotvoll plot: p-values sorted ascending against rank 1..k.
struct PValuePlot {
    std::vector<PValueEntry> entries; // ascending p, ranks 1..k
    std::size_t k = 0;
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::size_t n_zero = 0;
    std::size_t n_below_alpha = 0; // strictly below alpha
    double alpha = 0.05;
    double ks_d = 0.0; // Kolmogorov-Smirnov distance to Uniform(0, 1)

    // Height of the uniform reference line at a rank: rank / k.
    double reference(std::size_t rank) const { return static_cast<double>(rank) / static_cast<double>(k); }
};

struct PValueInput {
    double p;
    corrstats::Sign sign = corrstats::Sign::zero;
    std::optional<numerics::LogTail> log_p;
};

// Runs the correlation test for every record and ranks the results. Ties in p
// keep input order. Throws UsageError on an empty dataset, DomainError for an
// alpha outside (0, 1).
PValuePlot build_plot(const dataset::Dataset& data, double alpha = 0.05,
                      corrstats::Sidedness sidedness = corrstats::Sidedness::two_sided);
PValuePlot build_plot(std::span<const PValueInput> inputs, double alpha = 0.05);

// D = max_i max(|i/k - p_(i)|, |(i-1)/k - p_(i)|) for ascending p_(i).
double ks_uniform_distance(std::span<const double> sorted_ps);

// BH adjustment of the `top` smallest entries. The family defaults to the
// whole plot (k), matching the practice of adjusting the s smallest of k.
multiplicity::AdjustmentResult adjust_top(const PValuePlot& plot, std::size_t top,
                                          std::optional<std::size_t> family = {});

struct SvgOptions {
    int width = 640;
    int height = 480;
    std::string title;
    std::string x_label = "Rank";
    std::string y_label = "p-value";
};

// Deterministic SVG 1.1: filled circles for positive correlations, downward
// triangles for negative ones, open circles for zero, and a dashed reference
// line from (1, 1/k) to (k, 1).
std::string render_svg(const PValuePlot& plot, const SvgOptions& options = {});

struct TableOptions {
    char delimiter = ',';
    int decimals = 6;
};

// rank,criterion,r,n,p,p_adjusted for the adjusted entries, in rank order.
// Throws UsageError when `adj` is empty or was not computed over the plot's
// leading entries.
std::string render_table(const PValuePlot& plot, const multiplicity::AdjustmentResult& adj,
                         const dataset::Dataset& source, const TableOptions& options = {});
// rank,label,p,p_adjusted; labels are indexed by record_ref.
std::string render_table(const PValuePlot& plot, const multiplicity::AdjustmentResult& adj,
                         std::span<const std::string> labels, const TableOptions& options = {});

} // namespace pvaudit::pvplot
