#pragma once

#include "pvaudit/numerics.hpp"

#include <optional>
#include <string_view>

namespace pvaudit::corrstats {

enum class Sign { positive, negative, zero };

std::string_view to_string(Sign sign) noexcept;
Sign sign_of(double value) noexcept;

enum class Sidedness { two_sided, one_sided };

// A Pearson correlation and the sample size it came from. |r| < 1, n >= 4.
class EffectSize {
public:
    // Throws DomainError when either invariant fails.
    EffectSize(double r, int n);

    double r() const noexcept { return r_; }
    int n() const noexcept { return n_; }

    friend bool operator==(const EffectSize&, const EffectSize&) = default;

private:
    double r_;
    int n_;
};

struct CorrelationTest {
    double z = 0.0;        // arctanh(r)
    double se = 0.0;       // 1 / sqrt(n - 3)
    double z_ratio = 0.0;  // z / se
    double p = 1.0;        // p-value for the requested sidedness, floored at DBL_MIN
    numerics::LogTail log_p; // same p-value in log domain, never floored
    Sign sign = Sign::zero;
};

// 0.5 ln((1 + r) / (1 - r)). Throws DomainError for |r| >= 1 or NaN.
double fisher_z(double r);

// 1 / sqrt(n - 3). Throws DomainError for n <= 3.
double fisher_se(int n);

// Fisher z test of H0: rho = 0. The p-value depends on |r| only; the sign is
// carried along as metadata. One-sided means P(Z > |z|/se).
CorrelationTest correlation_p(const EffectSize& effect, Sidedness sidedness = Sidedness::two_sided);

// Group mean with its standard error, or the SD and n to derive it from.
struct OneSampleSummary {
    double mean = 0.0;
    std::optional<double> se;
    std::optional<double> sd;
    std::optional<int> n;

    // Supplied se wins; otherwise sd / sqrt(n). Throws DomainError if neither
    // route yields a positive value.
    double effective_se() const;
};

// -log10 of the two-sided p-value for H0: mean = 0, z = mean / se.
numerics::LogTail one_sample_neglog10(const OneSampleSummary& summary);

} // namespace pvaudit::corrstats
