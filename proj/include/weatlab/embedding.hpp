#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "weatlab/error.hpp"

namespace weatlab {

enum class CaseStrategy {
    ExactOnly,
    ExactThenLowercase,
};

enum class DuplicatePolicy {
    KeepFirst,
    Fail,
};

struct LookupPolicy {
    CaseStrategy case_strategy = CaseStrategy::ExactThenLowercase;
    DuplicatePolicy on_duplicate_line = DuplicatePolicy::KeepFirst;
};

/// Immutable word-vector space: vocabulary -> dense row index plus an
/// n x d matrix. Values are stored exactly as loaded; any normalization
/// is the caller's concern. Text-loaded spaces hold 32-bit values (large
/// vocabularies); derived spaces (e.g. projections) hold 64-bit values.
class EmbeddingSpace {
public:
    EmbeddingSpace(std::string language, std::size_t dim,
                   std::vector<std::string> words,
                   std::vector<float> matrix, std::string source);
    EmbeddingSpace(std::string language, std::size_t dim,
                   std::vector<std::string> words,
                   std::vector<double> matrix, std::string source);

    const std::string& language() const { return language_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    const std::string& source() const { return source_; }
    const std::vector<std::string>& words() const { return words_; }
    bool double_precision() const { return !mat64_.empty(); }

    double value(std::size_t i, std::size_t j) const {
        return mat64_.empty() ? static_cast<double>(mat32_[i * dim_ + j])
                              : mat64_[i * dim_ + j];
    }

    std::vector<double> row_copy(std::size_t i) const;

    std::optional<std::size_t> find(const std::string& word) const;

    // Number of duplicate data lines skipped at load time (keep-first policy).
    std::size_t duplicates_skipped() const { return duplicates_skipped_; }

private:
    friend EmbeddingSpace load_embeddings(const std::string&, const std::string&,
                                          std::optional<std::size_t>, DuplicatePolicy);
    EmbeddingSpace() = default;
    void build_vocab();
    void check_finite() const;

    std::string language_;
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<float> mat32_;
    std::vector<double> mat64_;
    std::string source_;
    std::unordered_map<std::string, std::size_t> vocab_;
    std::size_t duplicates_skipped_ = 0;
};

/// Resolves a surface form against a space under a lookup policy.
/// Exact match first; under ExactThenLowercase the ASCII-lowercased
/// form is tried next. Absence is not an error.
std::optional<std::size_t> lookup(const EmbeddingSpace& space,
                                  const std::string& term,
                                  const LookupPolicy& policy);

/// Loads a whitespace-separated text vector file. A first line consisting
/// of exactly two integer tokens is treated as an `n d` header, otherwise
/// it is data. Every data line must be `word v1 ... vd` with a consistent d.
EmbeddingSpace load_embeddings(const std::string& path,
                               const std::string& language,
                               std::optional<std::size_t> limit = std::nullopt,
                               DuplicatePolicy on_duplicate = DuplicatePolicy::KeepFirst);

/// Writes the space back out in headered form, with enough digits that
/// reloading reproduces the stored values exactly.
void save_embeddings(const EmbeddingSpace& space, const std::string& path);

std::string ascii_lower(const std::string& s);

} // namespace weatlab
