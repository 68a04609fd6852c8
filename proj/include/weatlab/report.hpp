#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "weatlab/lexicon.hpp"
#include "weatlab/permutation.hpp"
#include "weatlab/weat.hpp"

namespace weatlab {

/// One evaluated (test, language direction). Discarded rows carry no
/// effect size or p-value, only the coverage report.
struct ReportRow {
    std::string test_id;
    std::string target_language;
    std::string attribute_language;
    std::string metric;
    bool discarded = false;
    std::string discard_reason;
    double effect_size = 0.0;
    double statistic = 0.0;
    double p_value = 0.0;
    double p_value_smoothed = 0.0;
    bool significant = false;
    std::string mode; // "exact" or "monte-carlo"
    std::uint64_t partitions_evaluated = 0;
    std::uint64_t ties = 0;
    std::uint64_t seed = 0;
    std::vector<SetCoverage> coverage;
};

struct LanguageSummary {
    std::string language;
    double avg_all = 0.0;
    std::size_t n_all = 0;
    std::optional<double> avg_sig; // empty when no test is significant everywhere
};

struct PairSummary {
    std::string target_language;
    std::string attribute_language;
    double mean_effect = 0.0;
    std::size_t n = 0;
    bool any_insignificant = false;
};

struct Aggregates {
    std::vector<LanguageSummary> languages;    // monolingual rows
    std::vector<std::string> sig_subset;       // test ids significant in every language
    std::vector<PairSummary> pairs;            // cross-lingual directed pairs
};

enum class AggregateMode { AvgAll, AvgSig };

/// Per-language and per-direction means of effect sizes. avg_all covers
/// every non-discarded test; avg_sig covers the subset of test ids that
/// are significant in every monolingual language group of the run.
Aggregates aggregate(const std::vector<ReportRow>& rows);

/// Mean effect for one language under the given mode; std::nullopt for
/// AvgSig when no test id is significant across all language groups.
std::optional<double> aggregate_language(const std::vector<ReportRow>& rows,
                                         const std::string& language,
                                         AggregateMode mode);

enum class ReportFormat { Json, Tsv };

ReportFormat parse_report_format(const std::string& s);

struct EmitOptions {
    ReportFormat format = ReportFormat::Json;
    bool with_timestamp = true;
};

void emit(const std::vector<ReportRow>& rows, const Aggregates& aggregates,
          const EmitOptions& options, std::ostream& out);

/// Round-trippable row serialization (numeric fields at full precision).
std::string rows_to_tsv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_tsv(const std::string& tsv);

/// Two-decimal display rendering, half-to-even.
std::string display_2dp(double value);

} // namespace weatlab
