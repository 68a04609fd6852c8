#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weatlab/embedding.hpp"

namespace weatlab {

/// One stimulus with its surface-form variants (e.g. gendered forms
/// of a translation). A group resolves if at least one variant does.
struct TermGroup {
    std::string canonical;
    std::vector<std::string> variants;
};

enum class SetRole { TargetX, TargetY, AttrA, AttrB };

const char* set_role_name(SetRole role);

/// A WEAT-style bias test: two target sets and two attribute sets.
/// Target and attribute languages may differ (cross-lingual test).
struct BiasTest {
    std::string test_id; // T1..T10
    std::vector<TermGroup> target_x;
    std::vector<TermGroup> target_y;
    std::vector<TermGroup> attr_a;
    std::vector<TermGroup> attr_b;
    std::string target_language;
    std::string attribute_language;

    const std::vector<TermGroup>& set(SetRole role) const;
};

struct SetCoverage {
    SetRole role;
    std::size_t found = 0; // groups with >= 1 resolved variant
    std::size_t total = 0;
};

/// A test with stimuli replaced by embedding vectors. Each found variant
/// contributes one vector; stimuli with no found variant are dropped.
struct ResolvedTest {
    std::string test_id;
    std::string target_language;
    std::string attribute_language;
    std::vector<std::vector<double>> x, y, a, b;
    std::vector<std::string> x_labels, y_labels, a_labels, b_labels;
    std::vector<SetCoverage> coverage; // order: X, Y, A, B
    std::vector<std::pair<SetRole, std::string>> dropped_terms;
};

/// Result of the vocabulary-coverage filter: the test is kept only if
/// every set resolves strictly more than `threshold` of its stimuli.
struct Discarded {
    std::string test_id;
    std::string target_language;
    std::string attribute_language;
    double threshold = 0.0;
    std::vector<SetCoverage> coverage;
};

using ResolveOutcome = std::variant<ResolvedTest, Discarded>;

/// Parses the lexicon file: blocks headed `[test_id language role]`,
/// one stimulus per line as `canonical = form1|form2` or a bare form.
std::vector<BiasTest> load_lexicon(const std::string& path);

/// Builds the two directed cross-lingual tests from same-id tests in two
/// languages: (targets L1, attrs L2) and (targets L2, attrs L1).
std::pair<BiasTest, BiasTest> make_cross_lingual(const BiasTest& test_l1,
                                                 const BiasTest& test_l2);

ResolveOutcome resolve(const BiasTest& test,
                       const EmbeddingSpace& target_space,
                       const EmbeddingSpace& attr_space,
                       const LookupPolicy& policy,
                       double threshold = 0.20);

} // namespace weatlab
