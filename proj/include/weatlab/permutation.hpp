#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "weatlab/rng.hpp"
#include "weatlab/weat.hpp"

namespace weatlab {

enum class PermutationMode { Exact, MonteCarlo };

struct PermutationPlan {
    PermutationMode mode = PermutationMode::Exact;
    std::size_t n_total = 0;
    std::size_t size_x = 0;
    std::size_t num_samples = 100000;      // monte-carlo only
    std::uint64_t seed = 0;                // monte-carlo only
    std::uint64_t exact_threshold = 200000; // max partition count for exact mode
    std::size_t workers = 1;
};

/// Picks exact enumeration when C(n_total, size_x) fits under the
/// threshold, seeded Monte Carlo otherwise.
PermutationPlan make_plan(std::size_t n_total, std::size_t size_x,
                          std::uint64_t exact_threshold = 200000,
                          std::size_t num_samples = 100000,
                          std::uint64_t seed = 0, std::size_t workers = 1);

struct SignificanceResult {
    double p_value = 0.0;
    PermutationMode mode = PermutationMode::Exact;
    std::uint64_t partitions_evaluated = 0;
    std::uint64_t qualifying = 0; // exact mode: p_value = qualifying / partitions_evaluated
    std::uint64_t ties = 0;       // permuted statistics equal to the observed one
    double p_value_smoothed = 0.0; // (count+1)/(samples+1), monte-carlo only
    double alpha = 0.05;
    bool significant = false;
};

/// C(n, k) with saturation at uint64 max.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Streams every size-k subset of {0..n-1} in lexicographic order.
class PartitionStream {
public:
    PartitionStream(std::size_t n_total, std::size_t size_x);
    std::optional<const std::vector<std::size_t>*> next();

private:
    std::size_t n_, k_;
    std::vector<std::size_t> current_;
    bool started_ = false, done_ = false;
};

void enumerate_partitions(std::size_t n_total, std::size_t size_x,
                          const std::function<void(const std::vector<std::size_t>&)>& fn);

/// Uniform size-k subset of {0..n-1} via Fisher-Yates prefix selection;
/// consumes exactly size_x generator draws. Output is sorted.
std::vector<std::size_t> sample_partition(Rng& rng, std::size_t n_total,
                                          std::size_t size_x);

/// Permutation-test p-value: the share of partitions whose statistic is
/// strictly greater (similarity metric) or strictly smaller (distance
/// metric) than the observed one. Exact mode counts all partitions,
/// the original included.
SignificanceResult p_value(const ResolvedTest& test, Metric metric,
                           const PermutationPlan& plan, double alpha = 0.05);

SignificanceResult p_value(const AssociationProfile& profile, Metric metric,
                           const PermutationPlan& plan, double alpha = 0.05);

} // namespace weatlab
