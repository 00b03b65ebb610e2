#include "pvaudit/corrstats.hpp"

#include "pvaudit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pvaudit::corrstats {

std::string_view to_string(Sign sign) noexcept {
    switch (sign) {
    case Sign::positive:
        return "positive";
    case Sign::negative:
        return "negative";
    case Sign::zero:
        return "zero";
    }
    return "zero";
}

Sign sign_of(double value) noexcept {
    if (value > 0.0) {
        return Sign::positive;
    }
    if (value < 0.0) {
        return Sign::negative;
    }
    return Sign::zero;
}

EffectSize::EffectSize(double r, int n) : r_(r), n_(n) {
    if (!(std::abs(r) < 1.0)) {
        throw DomainError("correlation r = " + std::to_string(r) +
                          " must satisfy |r| < 1 (Fisher z diverges at +/-1)");
    }
    if (n < 4) {
        throw DomainError("sample size n = " + std::to_string(n) +
                          " must be at least 4 (SE = 1/sqrt(n - 3))");
    }
}

double fisher_z(double r) {
    if (!(std::abs(r) < 1.0)) {
        throw DomainError("fisher_z: |r| must be < 1");
    }
    return std::atanh(r);
}

double fisher_se(int n) {
    if (n <= 3) {
        throw DomainError("fisher_se: n must exceed 3");
    }
    return 1.0 / std::sqrt(static_cast<double>(n - 3));
}

CorrelationTest correlation_p(const EffectSize& effect, Sidedness sidedness) {
    CorrelationTest t;
    t.z = fisher_z(effect.r());
    t.se = fisher_se(effect.n());
    t.z_ratio = t.z / t.se;
    t.sign = sign_of(effect.r());

    // |r| path so that p(r) == p(-r) bit for bit
    const double a = fisher_z(std::abs(effect.r())) / t.se;
    if (sidedness == Sidedness::two_sided) {
        t.log_p = numerics::normal_two_sided_log10(a);
        t.p = std::min(1.0, 2.0 * numerics::normal_sf(a));
    } else {
        t.log_p = numerics::normal_sf_log10(a);
        t.p = numerics::normal_sf(a);
    }
    t.p = std::max(t.p, std::numeric_limits<double>::min());
    return t;
}

double OneSampleSummary::effective_se() const {
    if (se) {
        if (!(*se > 0.0)) {
            throw DomainError("one-sample standard error must be positive");
        }
        return *se;
    }
    if (sd && n) {
        if (!(*sd > 0.0) || *n < 1) {
            throw DomainError("one-sample SD must be positive and n >= 1");
        }
        return *sd / std::sqrt(static_cast<double>(*n));
    }
    throw DomainError("one-sample summary needs se, or sd and n");
}

numerics::LogTail one_sample_neglog10(const OneSampleSummary& summary) {
    const double se = summary.effective_se();
    if (!std::isfinite(summary.mean)) {
        throw DomainError("one-sample mean must be finite");
    }
    return numerics::normal_two_sided_log10(summary.mean / se);
}

} // namespace pvaudit::corrstats
