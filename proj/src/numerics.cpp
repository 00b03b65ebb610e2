#include "pvaudit/numerics.hpp"

#include "pvaudit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pvaudit::numerics {

namespace {

constexpr double kLn10 = std::numbers::ln10;
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;
constexpr double kLnSqrt2Pi = 0.918938533204672741780329736405617640;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this the Taylor series of Phi is used, above it the Mills-ratio
// continued fraction. At 3 the series loses at most ~400x eps to cancellation.
constexpr double kSeriesCutover = 3.0;
// Above this the log-domain tail switches to the asymptotic expansion.
constexpr double kAsymptoticCutover = 8.0;

double clamp_probability(double p) {
    if (!(p > 0.0)) {
        return 0.0;
    }
    return std::min(p, 1.0);
}

void require_finite(double z, const char* what) {
    if (!std::isfinite(z)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

// -a^2/2 split into a rounded head and the exact rounding error, so that
// exp(-a^2/2) keeps full relative precision for |a| up to ~38.
struct HalfSquare {
    double head;
    double tail;
};

HalfSquare neg_half_square(double a) {
    const double sq = a * a;
    const double err = std::fma(a, a, -sq);
    return {-0.5 * sq, -0.5 * err};
}

double normal_pdf(double a) {
    const HalfSquare h = neg_half_square(a);
    return kInvSqrt2Pi * std::exp(h.head) * std::exp(h.tail);
}

// Sum_{k>=0} a^(2k+1) / (2k+1)!!, so that Phi(a) - 1/2 = pdf(a) * series.
double phi_series(double a) {
    const double a2 = a * a;
    double term = a;
    double sum = a;
    for (int k = 1; k < 500; ++k) {
        term *= a2 / static_cast<double>(2 * k + 1);
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return sum;
}

// Mills ratio R(a) = P(Z > a) / pdf(a) via
// R = 1 / (a + 1/(a + 2/(a + 3/(a + ...)))), modified Lentz.
double mills_ratio_cf(double a) {
    constexpr double tiny = 1e-300;
    double f = a;
    double c = a;
    double d = 0.0;
    for (int j = 1; j < 5000; ++j) {
        const double aj = static_cast<double>(j);
        d = a + aj * d;
        if (d == 0.0) {
            d = tiny;
        }
        c = a + aj / c;
        if (c == 0.0) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return 1.0 / f;
}

// Upper and lower tail for a >= 0, computed together so that they sum to one
// to within rounding of the larger.
struct TailPair {
    double upper;
    double lower;
};

TailPair tails(double a) {
    if (a < kSeriesCutover) {
        const double half_span = normal_pdf(a) * phi_series(a);
        return {0.5 - half_span, 0.5 + half_span};
    }
    const double upper = normal_pdf(a) * mills_ratio_cf(a);
    return {upper, 1.0 - upper};
}

// ln P(Z > a) for a > kAsymptoticCutover:
// -a^2/2 - ln(a sqrt(2 pi)) + ln(1 - 1/a^2 + 3/a^4 - 15/a^6 + ...).
double ln_upper_tail_asymptotic(double a) {
    const double inv_a2 = 1.0 / (a * a);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = -term * static_cast<double>(2 * k - 1) * inv_a2;
        if (std::abs(next) >= std::abs(term)) {
            break; // asymptotic series has started to diverge
        }
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            break;
        }
    }
    const HalfSquare h = neg_half_square(a);
    return h.head + h.tail - std::log(a) - kLnSqrt2Pi + std::log(sum);
}

double ln_upper_tail(double a) {
    if (a > kAsymptoticCutover) {
        return ln_upper_tail_asymptotic(a);
    }
    return std::log(tails(a).upper);
}

// log(1 + d) - d without cancellation for small |d|.
double log1pmx(double d) {
    if (std::abs(d) < 0.1) {
        double power = d * d;
        double sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            const double term = power / static_cast<double>(k);
            sum += (k % 2 == 0) ? -term : term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
            power *= d;
        }
        return sum;
    }
    return std::log1p(d) - d;
}

// ln Gamma(a) - [(a - 1/2) ln a - a + ln sqrt(2 pi)].
double stirling_correction(double a) {
    if (a < 10.0) {
        return std::lgamma(a) - ((a - 0.5) * std::log(a) - a + kLnSqrt2Pi);
    }
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return inv *
           (1.0 / 12.0 -
            inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
}

// x^a e^-x / Gamma(a).
double gamma_prefactor(double a, double x) {
    if (a < 10.0) {
        if (x < 700.0) {
            const double direct = std::exp(-x) * std::pow(x, a) / std::tgamma(a);
            if (std::isfinite(direct) && direct > 0.0) {
                return direct;
            }
        }
        return std::exp(a * std::log(x) - x - std::lgamma(a));
    }
    const double d = (x - a) / a;
    return std::exp(a * log1pmx(d) - stirling_correction(a)) * std::sqrt(a / (2.0 * std::numbers::pi));
}

double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * gamma_prefactor(a, x);
}

double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return gamma_prefactor(a, x) * h;
}

} // namespace

LogTail LogTail::from_neg_log10(double neg_log10_p) {
    if (!(neg_log10_p >= 0.0)) {
        throw DomainError("LogTail: -log10 p must be nonnegative");
    }
    return LogTail(neg_log10_p);
}

LogTail LogTail::from_probability(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("LogTail: probability must lie in (0, 1]");
    }
    return LogTail(p == 1.0 ? 0.0 : -std::log10(p));
}

double LogTail::ln_p() const noexcept { return -neg_log10_p_ * kLn10; }

double LogTail::probability() const noexcept { return std::pow(10.0, -neg_log10_p_); }

double normal_sf(double z) {
    require_finite(z, "normal_sf");
    if (z >= 0.0) {
        return clamp_probability(tails(z).upper);
    }
    return clamp_probability(tails(-z).lower);
}

LogTail normal_sf_log10(double z) {
    require_finite(z, "normal_sf_log10");
    if (z < 0.0) {
        // P(Z > z) = 1 - P(Z > |z|); log1p keeps the tiny deficit.
        const double deficit = tails(-z).upper;
        return LogTail::from_neg_log10(std::max(0.0, -std::log1p(-deficit) / kLn10));
    }
    return LogTail::from_neg_log10(std::max(0.0, -ln_upper_tail(z) / kLn10));
}

LogTail normal_two_sided_log10(double z) {
    require_finite(z, "normal_two_sided_log10");
    const double a = std::abs(z);
    if (a == 0.0) {
        return LogTail{};
    }
    if (a < kSeriesCutover) {
        // 2 P(Z > a) = 1 - 2 pdf(a) series(a)
        const double span = 2.0 * normal_pdf(a) * phi_series(a);
        return LogTail::from_neg_log10(std::max(0.0, -std::log1p(-span) / kLn10));
    }
    return LogTail::from_neg_log10(std::max(0.0, -(ln_upper_tail(a) + std::numbers::ln2) / kLn10));
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("gamma_q: shape must be positive and finite");
    }
    if (!(x >= 0.0)) {
        throw DomainError("gamma_q: x must be nonnegative");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return clamp_probability(1.0 - gamma_p_series(a, x));
    }
    return clamp_probability(gamma_q_continued_fraction(a, x));
}

double chisq_sf(double x, int df) {
    if (df < 1) {
        throw DomainError("chisq_sf: degrees of freedom must be >= 1");
    }
    if (!(x >= 0.0)) {
        throw DomainError("chisq_sf: statistic must be nonnegative");
    }
    return gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

} // namespace pvaudit::numerics
