#pragma once

#include "pvaudit/dataset.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace pvaudit::simulate {

// Inclusive range of sample sizes drawn uniformly per study.
struct SampleSizeRange {
    int lo = 4;
    int hi = 4;
};

struct SimSpec {
    int k = 1;
    // A list is cycled by study index; a range is sampled per study.
    std::variant<std::vector<int>, SampleSizeRange> sample_sizes = std::vector<int>{50};
    double rho = 0.0;
    int cluster_size = 1;
    std::uint64_t seed = 0;
};

// Weight of the shared cluster component in each study's standardized noise.
inline constexpr double kClusterWeight = 0.5;

// Throws UsageError when the spec is invalid (k < 1, |rho| >= 1, any n < 4,
// empty size list, lo > hi, cluster_size < 1).
void validate(const SimSpec& spec);

// One correlation per study: z = arctanh(rho) + e / sqrt(n - 3), r = tanh(z),
// with e standard normal. Studies i are grouped into clusters i / cluster_size;
// when cluster_size > 1, e = sqrt(w) L_c + sqrt(1 - w) E_i with the shared L_c
// drawn once per cluster (w = kClusterWeight). Marginally every study is
// still exactly Normal(arctanh(rho), 1/(n - 3)).
//
// Study i draws from rng stream (seed, study, i); cluster c from (seed,
// cluster, c). Output depends only on the spec.
dataset::Dataset generate(const SimSpec& spec);

} // namespace pvaudit::simulate
