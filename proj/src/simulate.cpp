#include "pvaudit/simulate.hpp"

#include "pvaudit/errors.hpp"
#include "pvaudit/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pvaudit::simulate {

namespace {

int sample_size_for(const SimSpec& spec, int study, rng::Stream& stream) {
    if (const auto* list = std::get_if<std::vector<int>>(&spec.sample_sizes)) {
        return (*list)[static_cast<std::size_t>(study) % list->size()];
    }
    const auto& range = std::get<SampleSizeRange>(spec.sample_sizes);
    return static_cast<int>(stream.uniform_int(range.lo, range.hi));
}

} // namespace

void validate(const SimSpec& spec) {
    if (spec.k < 1) {
        throw UsageError("simulate: k must be at least 1");
    }
    if (!(std::abs(spec.rho) < 1.0)) {
        throw UsageError("simulate: rho must satisfy |rho| < 1");
    }
    if (spec.cluster_size < 1) {
        throw UsageError("simulate: cluster size must be at least 1");
    }
    if (const auto* list = std::get_if<std::vector<int>>(&spec.sample_sizes)) {
        if (list->empty()) {
            throw UsageError("simulate: sample size list is empty");
        }
        for (int n : *list) {
            if (n < 4) {
                throw UsageError("simulate: every sample size must be at least 4");
            }
        }
    } else {
        const auto& range = std::get<SampleSizeRange>(spec.sample_sizes);
        if (range.lo < 4 || range.hi < range.lo) {
            throw UsageError("simulate: sample size range must satisfy 4 <= lo <= hi");
        }
    }
}

dataset::Dataset generate(const SimSpec& spec) {
    validate(spec);

    const double mu = std::atanh(spec.rho);
    const bool clustered = spec.cluster_size > 1;
    const double shared_scale = std::sqrt(kClusterWeight);
    const double own_scale = std::sqrt(1.0 - kClusterWeight);
    constexpr double r_limit = 1.0 - std::numeric_limits<double>::epsilon();

    dataset::Dataset out;
    out.source = fmt::format("simulated k={} rho={} cluster={} seed={}", spec.k, spec.rho,
                             spec.cluster_size, spec.seed);
    out.records.reserve(static_cast<std::size_t>(spec.k));

    double latent = 0.0;
    int current_cluster = -1;
    for (int i = 0; i < spec.k; ++i) {
        const int cluster = i / spec.cluster_size;
        if (clustered && cluster != current_cluster) {
            rng::Stream cluster_stream(spec.seed, rng::Stream::Domain::cluster,
                                       static_cast<std::uint64_t>(cluster));
            latent = cluster_stream.standard_normal();
            current_cluster = cluster;
        }

        rng::Stream stream(spec.seed, rng::Stream::Domain::study, static_cast<std::uint64_t>(i));
        const int n = sample_size_for(spec, i, stream);
        const double own = stream.standard_normal();
        const double noise = clustered ? shared_scale * latent + own_scale * own : own;
        const double z = mu + noise / std::sqrt(static_cast<double>(n - 3));
        const double r = std::clamp(std::tanh(z), -r_limit, r_limit);

        out.records.push_back(dataset::CorrelationRecord{
            fmt::format("sim{:05}", i), fmt::format("cluster {}", cluster), dataset::Instrument::iat,
            "simulated", corrstats::EffectSize(r, n)});
    }
    return out;
}

} // namespace pvaudit::simulate
