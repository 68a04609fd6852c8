#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weatlab/align.hpp"
#include "weatlab/report.hpp"

namespace weatlab {

struct EmbeddingSpec {
    std::string language;
    std::string path;
};

/// Fits an orthogonal map from source into target and enables the two
/// cross-lingual directions for that language pair.
struct AlignJob {
    std::string source_language;
    std::string target_language;
    std::string dict_path;
    FitNormalization normalization = FitNormalization::None;
};

struct RunConfig {
    std::vector<EmbeddingSpec> embeddings;
    std::string lexicon_path;
    std::vector<std::string> tests; // empty = every test in the lexicon
    std::vector<Metric> metrics = {Metric::CosineSimilarity};
    double alpha = 0.05;
    double coverage_threshold = 0.20;
    std::size_t permutations = 100000;
    std::uint64_t exact_threshold = 200000;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::optional<std::size_t> max_vocab;
    LookupPolicy policy;
    std::vector<AlignJob> align_jobs;
    ReportFormat format = ReportFormat::Json;
};

/// Flat key-value config file: `key = value`, `#` comments. Repeatable
/// keys: `embedding = LANG PATH`, `align = SRC TGT DICT_PATH`.
RunConfig load_config(const std::string& path);

struct RunResult {
    std::vector<ReportRow> rows;
    Aggregates aggregates;
};

/// End-to-end run: load spaces, resolve tests, evaluate monolingual and
/// cross-lingual rows, aggregate. Deterministic given the config.
RunResult run(const RunConfig& config);

/// Evaluation of one already-resolved test under run settings.
ReportRow evaluate(const ResolveOutcome& outcome, Metric metric,
                   std::size_t permutations, std::uint64_t exact_threshold,
                   std::uint64_t seed, std::size_t workers, double alpha);

} // namespace weatlab
