#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weatlab/embedding.hpp"
#include "weatlab/linalg.hpp"

namespace weatlab {

/// Ordered (source word, target word) pairs used to supervise the map.
/// Repeated source words are allowed (many-to-many dictionaries).
struct BilingualDictionary {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string source_language;
    std::string target_language;
};

/// One pair per line: `source<TAB>target`.
BilingualDictionary load_dictionary(const std::string& path,
                                    const std::string& source_language,
                                    const std::string& target_language);

/// Row i of source_rows and target_rows correspond to the same kept pair.
struct AlignedMatrices {
    Mat source_rows; // m x d
    Mat target_rows; // m x d
    std::vector<std::pair<std::string, std::string>> kept_pairs;
    std::size_t dropped_pairs = 0;
    bool under_determined = false; // m < d
};

enum class FitNormalization { None, Unit, Center, CenterUnit };

FitNormalization parse_fit_normalization(const std::string& s);

AlignedMatrices extract_aligned(const BilingualDictionary& dict,
                                const EmbeddingSpace& source,
                                const EmbeddingSpace& target,
                                const LookupPolicy& policy);

/// d x d orthogonal map from the source space into the target space.
struct ProjectionMatrix {
    Mat w;
};

/// Orthogonal Procrustes: W = U V^T from the SVD of the d x d
/// cross-covariance S^T T, minimizing |S W - T|_F over orthogonal W.
ProjectionMatrix fit_procrustes(const AlignedMatrices& aligned,
                                FitNormalization normalization = FitNormalization::None);

/// Applies x -> x W to every row; vocabulary and language metadata are
/// preserved, provenance is annotated.
EmbeddingSpace project(const EmbeddingSpace& space, const ProjectionMatrix& w);

} // namespace weatlab
