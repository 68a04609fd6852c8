#include "weatlab/permutation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace weatlab {

namespace {

constexpr double kTieTolerance = 1e-12;
// MC samples are split over a fixed number of ranges regardless of the
// worker count, so counts (and p-values) do not depend on threading.
constexpr std::size_t kSampleRanges = 64;

} // namespace

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 c = 1;
    const unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

PermutationPlan make_plan(std::size_t n_total, std::size_t size_x,
                          std::uint64_t exact_threshold, std::size_t num_samples,
                          std::uint64_t seed, std::size_t workers) {
    if (size_x == 0 || size_x >= n_total)
        throw Error("partition sizes invalid: need 0 < |X| < |X|+|Y|");
    PermutationPlan plan;
    plan.n_total = n_total;
    plan.size_x = size_x;
    plan.exact_threshold = exact_threshold;
    plan.num_samples = num_samples;
    plan.seed = seed;
    plan.workers = workers == 0 ? 1 : workers;
    plan.mode = binomial(n_total, size_x) <= exact_threshold
                    ? PermutationMode::Exact
                    : PermutationMode::MonteCarlo;
    return plan;
}

PartitionStream::PartitionStream(std::size_t n_total, std::size_t size_x)
    : n_(n_total), k_(size_x) {
    if (size_x == 0 || size_x >= n_total)
        throw Error("partition sizes invalid: need 0 < size_x < n_total");
    current_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) current_[i] = i;
}

std::optional<const std::vector<std::size_t>*> PartitionStream::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
        return &current_;
    }
    // Advance to the next subset in lexicographic order.
    std::size_t i = k_;
    while (i > 0) {
        --i;
        if (current_[i] != i + n_ - k_) {
            ++current_[i];
            for (std::size_t j = i + 1; j < k_; ++j)
                current_[j] = current_[j - 1] + 1;
            return &current_;
        }
    }
    done_ = true;
    return std::nullopt;
}

void enumerate_partitions(std::size_t n_total, std::size_t size_x,
                          const std::function<void(const std::vector<std::size_t>&)>& fn) {
    PartitionStream stream(n_total, size_x);
    while (auto p = stream.next()) fn(**p);
}

std::vector<std::size_t> sample_partition(Rng& rng, std::size_t n_total,
                                          std::size_t size_x) {
    if (size_x == 0 || size_x >= n_total)
        throw Error("partition sizes invalid: need 0 < size_x < n_total");
    // Fisher-Yates prefix: after size_x swaps the prefix is a uniform subset.
    std::vector<std::size_t> pool(n_total);
    for (std::size_t i = 0; i < n_total; ++i) pool[i] = i;
    for (std::size_t i = 0; i < size_x; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.bounded(n_total - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> out(pool.begin(), pool.begin() + size_x);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct RangeCounts {
    std::uint64_t qualifying = 0;
    std::uint64_t ties = 0;
};

// Statistic of a partition, from cached per-term associations:
// sum over the selected indices minus sum over the rest,
// i.e. 2 * sum_selected - sum_all.
double partition_statistic(const std::vector<double>& assoc,
                           const std::vector<std::size_t>& selected,
                           double total) {
    double sel = 0.0;
    for (std::size_t idx : selected) sel += assoc[idx];
    return 2.0 * sel - total;
}

void classify(double stat, double observed, bool similarity, RangeCounts& counts) {
    if (std::abs(stat - observed) <= kTieTolerance) {
        ++counts.ties;
        return;
    }
    if (similarity ? (stat > observed) : (stat < observed)) ++counts.qualifying;
}

} // namespace

SignificanceResult p_value(const AssociationProfile& profile, Metric metric,
                           const PermutationPlan& plan, double alpha) {
    std::size_t n = profile.x_assoc.size() + profile.y_assoc.size();
    if (plan.n_total != n || plan.size_x != profile.x_assoc.size())
        throw Error("permutation plan does not match test sizes");

    std::vector<double> assoc;
    assoc.reserve(n);
    assoc.insert(assoc.end(), profile.x_assoc.begin(), profile.x_assoc.end());
    assoc.insert(assoc.end(), profile.y_assoc.begin(), profile.y_assoc.end());

    double total = 0.0;
    for (double v : assoc) total += v;

    // The observed statistic is recomputed through the same partition
    // path so that the original partition compares exactly equal.
    std::vector<std::size_t> original(plan.size_x);
    for (std::size_t i = 0; i < plan.size_x; ++i) original[i] = i;
    const double observed = partition_statistic(assoc, original, total);
    const bool similarity = is_similarity(metric);

    SignificanceResult result;
    result.mode = plan.mode;
    result.alpha = alpha;

    if (plan.mode == PermutationMode::Exact) {
        RangeCounts counts;
        std::uint64_t evaluated = 0;
        enumerate_partitions(n, plan.size_x, [&](const std::vector<std::size_t>& sel) {
            classify(partition_statistic(assoc, sel, total), observed, similarity, counts);
            ++evaluated;
        });
        result.partitions_evaluated = evaluated;
        result.qualifying = counts.qualifying;
        result.ties = counts.ties;
        result.p_value = static_cast<double>(counts.qualifying) /
                         static_cast<double>(evaluated);
        result.p_value_smoothed = result.p_value;
    } else {
        if (plan.num_samples == 0) throw Error("monte-carlo mode requires num_samples > 0");
        std::vector<RangeCounts> per_range(kSampleRanges);
        std::size_t chunk = (plan.num_samples + kSampleRanges - 1) / kSampleRanges;

        auto run_range = [&](std::size_t r) {
            std::size_t begin = r * chunk;
            if (begin >= plan.num_samples) return;
            std::size_t count = std::min(chunk, plan.num_samples - begin);
            Rng rng = derive_rng(plan.seed, r);
            for (std::size_t s = 0; s < count; ++s) {
                auto sel = sample_partition(rng, n, plan.size_x);
                classify(partition_statistic(assoc, sel, total), observed,
                         similarity, per_range[r]);
            }
        };

        std::size_t workers = std::min(plan.workers, kSampleRanges);
        if (workers <= 1) {
            for (std::size_t r = 0; r < kSampleRanges; ++r) run_range(r);
        } else {
            std::vector<std::thread> threads;
            std::atomic<std::size_t> next_range{0};
            for (std::size_t w = 0; w < workers; ++w) {
                threads.emplace_back([&] {
                    for (;;) {
                        std::size_t r = next_range.fetch_add(1);
                        if (r >= kSampleRanges) return;
                        run_range(r);
                    }
                });
            }
            for (auto& t : threads) t.join();
        }

        RangeCounts counts;
        for (const RangeCounts& rc : per_range) {
            counts.qualifying += rc.qualifying;
            counts.ties += rc.ties;
        }
        result.partitions_evaluated = plan.num_samples;
        result.qualifying = counts.qualifying;
        result.ties = counts.ties;
        result.p_value = static_cast<double>(counts.qualifying) /
                         static_cast<double>(plan.num_samples);
        result.p_value_smoothed = static_cast<double>(counts.qualifying + 1) /
                                  static_cast<double>(plan.num_samples + 1);
    }

    result.significant = result.p_value < alpha;
    return result;
}

SignificanceResult p_value(const ResolvedTest& test, Metric metric,
                           const PermutationPlan& plan, double alpha) {
    return p_value(compute_associations(test, metric), metric, plan, alpha);
}

} // namespace weatlab
