#include "weatlab/weat.hpp"

#include <cmath>

namespace weatlab {

const char* metric_name(Metric m) {
    return m == Metric::CosineSimilarity ? "cosine" : "euclidean";
}

Metric parse_metric(const std::string& s) {
    if (s == "cosine") return Metric::CosineSimilarity;
    if (s == "euclidean") return Metric::EuclideanDistance;
    throw Error("unknown metric '" + s + "' (expected cosine or euclidean)");
}

bool is_similarity(Metric m) { return m == Metric::CosineSimilarity; }

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double metric_value(Metric metric, std::span<const double> u,
                    std::span<const double> v, const std::string& label) {
    if (u.size() != v.size())
        throw Error("metric_value: dimension mismatch (" + std::to_string(u.size()) +
                    " vs " + std::to_string(v.size()) + ")");
    if (metric == Metric::CosineSimilarity) {
        double dot = 0.0, nu = 0.0, nv = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            dot += u[i] * v[i];
            nu += u[i] * u[i];
            nv += v[i] * v[i];
        }
        if (nu == 0.0 || nv == 0.0)
            throw Error("cosine similarity undefined for zero vector" +
                        (label.empty() ? "" : " (term '" + label + "')"));
        return dot / (std::sqrt(nu) * std::sqrt(nv));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double d = u[i] - v[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double association(std::span<const double> t,
                   const std::vector<std::vector<double>>& a,
                   const std::vector<std::vector<double>>& b, Metric metric,
                   const std::string& label) {
    if (a.empty() || b.empty())
        throw Error("association requires non-empty attribute sets");
    std::vector<double> vals;
    vals.reserve(a.size());
    for (const auto& av : a) vals.push_back(metric_value(metric, t, av, label));
    double mean_a = pairwise_sum(vals) / static_cast<double>(a.size());
    vals.clear();
    for (const auto& bv : b) vals.push_back(metric_value(metric, t, bv, label));
    double mean_b = pairwise_sum(vals) / static_cast<double>(b.size());
    return mean_a - mean_b;
}

AssociationProfile compute_associations(const ResolvedTest& test, Metric metric) {
    if (test.x.empty() || test.y.empty() || test.a.empty() || test.b.empty())
        throw Error("test " + test.test_id + ": all four sets must be non-empty");

    AssociationProfile p;
    p.x_assoc.reserve(test.x.size());
    p.y_assoc.reserve(test.y.size());
    for (std::size_t i = 0; i < test.x.size(); ++i)
        p.x_assoc.push_back(association(test.x[i], test.a, test.b, metric,
                                        i < test.x_labels.size() ? test.x_labels[i] : ""));
    for (std::size_t i = 0; i < test.y.size(); ++i)
        p.y_assoc.push_back(association(test.y[i], test.a, test.b, metric,
                                        i < test.y_labels.size() ? test.y_labels[i] : ""));

    p.mean_x = pairwise_sum(p.x_assoc) / static_cast<double>(p.x_assoc.size());
    p.mean_y = pairwise_sum(p.y_assoc) / static_cast<double>(p.y_assoc.size());

    std::size_t n = p.x_assoc.size() + p.y_assoc.size();
    double mean_all = (pairwise_sum(p.x_assoc) + pairwise_sum(p.y_assoc)) /
                      static_cast<double>(n);
    std::vector<double> sq;
    sq.reserve(n);
    for (double v : p.x_assoc) sq.push_back((v - mean_all) * (v - mean_all));
    for (double v : p.y_assoc) sq.push_back((v - mean_all) * (v - mean_all));
    p.stddev = std::sqrt(pairwise_sum(sq) / static_cast<double>(n));
    return p;
}

double test_statistic(const AssociationProfile& profile) {
    return pairwise_sum(profile.x_assoc) - pairwise_sum(profile.y_assoc);
}

double test_statistic(const ResolvedTest& test, Metric metric) {
    return test_statistic(compute_associations(test, metric));
}

double effect_size(const AssociationProfile& profile) {
    if (profile.x_assoc.size() + profile.y_assoc.size() < 2)
        throw Error("effect size requires at least two terms across X and Y");
    if (profile.stddev == 0.0)
        throw Error("effect size degenerate: all association values are identical");
    return (profile.mean_x - profile.mean_y) / profile.stddev;
}

double effect_size(const ResolvedTest& test, Metric metric) {
    return effect_size(compute_associations(test, metric));
}

} // namespace weatlab
