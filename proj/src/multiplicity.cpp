#include "pvaudit/multiplicity.hpp"

#include "pvaudit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace pvaudit::multiplicity {

namespace {

void require_probability(double p, std::size_t index) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("p-value at index " + std::to_string(index) + " must lie in (0, 1]");
    }
}

CombinedTestResult finish(double chi_square, std::size_t k) {
    CombinedTestResult result;
    result.chi_square = chi_square;
    result.k = k;
    result.df = static_cast<int>(2 * k);
    result.p = numerics::chisq_sf(chi_square, result.df);
    return result;
}

} // namespace

CombinedTestResult fisher_combine(std::span<const double> ps) {
    if (ps.empty()) {
        throw UsageError("fisher_combine: no p-values supplied");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        require_probability(ps[i], i);
        sum += std::log(ps[i]);
    }
    return finish(-2.0 * sum, ps.size());
}

CombinedTestResult fisher_combine(std::span<const numerics::LogTail> ps) {
    if (ps.empty()) {
        throw UsageError("fisher_combine: no p-values supplied");
    }
    double sum = 0.0;
    for (const numerics::LogTail& t : ps) {
        sum += t.neg_log10_p();
    }
    return finish(2.0 * std::numbers::ln10 * sum, ps.size());
}

std::vector<AdjustedP> AdjustmentResult::by_rank() const {
    std::vector<AdjustedP> out = entries;
    std::sort(out.begin(), out.end(),
              [](const AdjustedP& a, const AdjustedP& b) { return a.rank < b.rank; });
    return out;
}

AdjustmentResult bh_adjust(std::span<const double> ps, std::optional<std::size_t> family) {
    if (ps.empty()) {
        throw UsageError("bh_adjust: no p-values supplied");
    }
    const std::size_t k = ps.size();
    const std::size_t m = family.value_or(k);
    if (m < k) {
        throw UsageError("bh_adjust: family size " + std::to_string(m) +
                         " is smaller than the " + std::to_string(k) + " supplied p-values");
    }
    for (std::size_t i = 0; i < k; ++i) {
        require_probability(ps[i], i);
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ps[a] < ps[b]; });

    AdjustmentResult result;
    result.m = m;
    result.entries.resize(k);
    double running = 1.0;
    for (std::size_t pos = k; pos-- > 0;) {
        const std::size_t idx = order[pos];
        const double rank = static_cast<double>(pos + 1);
        running = std::min(running, ps[idx] * static_cast<double>(m) / rank);
        result.entries[idx] = AdjustedP{ps[idx], std::min(1.0, running), idx, pos + 1};
    }
    return result;
}

} // namespace pvaudit::multiplicity
