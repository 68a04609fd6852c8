#pragma once

#include <span>
#include <string>
#include <vector>

#include "weatlab/lexicon.hpp"

namespace weatlab {

enum class Metric {
    CosineSimilarity,  // higher = closer
    EuclideanDistance, // lower = closer
};

const char* metric_name(Metric m);
Metric parse_metric(const std::string& s);

/// True when larger metric values mean closer terms (similarity
/// orientation); the permutation test's qualifying event depends on it.
bool is_similarity(Metric m);

/// cosine = <u,v> / (|u||v|); euclidean = |u - v|. The label is only
/// used in error messages for the zero-vector case under cosine.
double metric_value(Metric metric, std::span<const double> u,
                    std::span<const double> v, const std::string& label = "");

/// Mean closeness of t to A minus mean closeness of t to B.
double association(std::span<const double> t,
                   const std::vector<std::vector<double>>& a,
                   const std::vector<std::vector<double>>& b, Metric metric,
                   const std::string& label = "");

/// Per-term associations for X then Y, with set means and the pooled
/// population standard deviation over X union Y.
struct AssociationProfile {
    std::vector<double> x_assoc;
    std::vector<double> y_assoc;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double stddev = 0.0; // population (divide by |X union Y|)
};

AssociationProfile compute_associations(const ResolvedTest& test, Metric metric);

/// Summed association difference between the target sets (not averaged).
double test_statistic(const ResolvedTest& test, Metric metric);
double test_statistic(const AssociationProfile& profile);

/// (mean_X - mean_Y) / pooled population stddev. Throws if the
/// associations are all identical (stddev = 0).
double effect_size(const ResolvedTest& test, Metric metric);
double effect_size(const AssociationProfile& profile);

/// Deterministic summation: pairwise for long inputs, input order.
double pairwise_sum(std::span<const double> values);

} // namespace weatlab
