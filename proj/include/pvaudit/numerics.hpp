#pragma once

// Tail probabilities for the standard normal and chi-square distributions.
//
// Everything downstream of an effect size ends up here: correlation p-values,
// the one-sample tests whose p-values sit near 1e-190, and the Fisher combined
// statistic. The normal tail is evaluated directly (no erfc round trip) and has
// a log-domain twin that never forms the underflowing probability.
//
// All functions are pure and thread-safe.

namespace pvaudit::numerics {

// A probability stored as decimal orders of magnitude below one:
// neg_log10_p = -log10(p). Zero iff p == 1.
class LogTail {
public:
    constexpr LogTail() = default;

    // Throws DomainError for negative or NaN input.
    static LogTail from_neg_log10(double neg_log10_p);
    // Throws DomainError unless p is in (0, 1].
    static LogTail from_probability(double p);

    constexpr double neg_log10_p() const noexcept { return neg_log10_p_; }
    // Natural log of the probability (<= 0).
    double ln_p() const noexcept;
    // 10^(-neg_log10_p); underflows to 0 below ~1e-308.
    double probability() const noexcept;

    friend constexpr bool operator==(LogTail, LogTail) = default;

private:
    constexpr explicit LogTail(double v) : neg_log10_p_(v) {}
    double neg_log10_p_ = 0.0;
};

// P(Z > z) for standard normal Z. Throws DomainError if z is not finite.
double normal_sf(double z);

// -log10 P(Z > z), accurate where normal_sf underflows.
LogTail normal_sf_log10(double z);

// -log10 P(|Z| > |z|).
LogTail normal_two_sided_log10(double z);

// P(X > x) for X ~ chi-square(df). Throws DomainError for x < 0, NaN, or df < 1.
double chisq_sf(double x, int df);

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

} // namespace pvaudit::numerics
