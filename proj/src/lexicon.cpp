#include "weatlab/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace weatlab {

namespace {

const std::set<std::string> kKnownTestIds = {
    "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10",
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

SetRole parse_role(const std::string& s, const std::string& where) {
    if (s == "target_X") return SetRole::TargetX;
    if (s == "target_Y") return SetRole::TargetY;
    if (s == "attr_A") return SetRole::AttrA;
    if (s == "attr_B") return SetRole::AttrB;
    throw Error(where + ": unknown set role '" + s + "'");
}

TermGroup parse_stimulus(const std::string& line, const std::string& where) {
    TermGroup group;
    std::size_t eq = line.find('=');
    std::string variants_part;
    if (eq == std::string::npos) {
        group.canonical = trim(line);
        variants_part = group.canonical;
    } else {
        group.canonical = trim(line.substr(0, eq));
        variants_part = trim(line.substr(eq + 1));
    }
    if (group.canonical.empty())
        throw Error(where + ": empty stimulus");

    std::size_t pos = 0;
    while (pos <= variants_part.size()) {
        std::size_t bar = variants_part.find('|', pos);
        std::string form = trim(bar == std::string::npos
                                    ? variants_part.substr(pos)
                                    : variants_part.substr(pos, bar - pos));
        if (form.empty())
            throw Error(where + ": empty variant in '" + line + "'");
        if (std::find(group.variants.begin(), group.variants.end(), form) !=
            group.variants.end())
            throw Error(where + ": duplicate variant '" + form + "'");
        group.variants.push_back(form);
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    return group;
}

} // namespace

const char* set_role_name(SetRole role) {
    switch (role) {
        case SetRole::TargetX: return "target_X";
        case SetRole::TargetY: return "target_Y";
        case SetRole::AttrA: return "attr_A";
        case SetRole::AttrB: return "attr_B";
    }
    return "?";
}

const std::vector<TermGroup>& BiasTest::set(SetRole role) const {
    switch (role) {
        case SetRole::TargetX: return target_x;
        case SetRole::TargetY: return target_y;
        case SetRole::AttrA: return attr_a;
        case SetRole::AttrB: return attr_b;
    }
    throw Error("invalid set role");
}

std::vector<BiasTest> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);

    // (test_id, language) -> partially filled test
    std::map<std::pair<std::string, std::string>, BiasTest> tests;
    std::vector<std::pair<std::string, std::string>> order;

    std::vector<TermGroup>* current = nullptr;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where = path + ":" + std::to_string(line_no);
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw Error(where + ": unterminated block header");
            std::istringstream hdr(line.substr(1, line.size() - 2));
            std::string test_id, language, role_str;
            if (!(hdr >> test_id >> language >> role_str))
                throw Error(where + ": malformed block header '" + line + "'");
            std::string extra;
            if (hdr >> extra) throw Error(where + ": malformed block header '" + line + "'");
            if (!kKnownTestIds.count(test_id))
                throw Error(where + ": unknown test id '" + test_id + "'");
            SetRole role = parse_role(role_str, where);

            auto key = std::make_pair(test_id, language);
            auto it = tests.find(key);
            if (it == tests.end()) {
                BiasTest t;
                t.test_id = test_id;
                t.target_language = language;
                t.attribute_language = language;
                it = tests.emplace(key, std::move(t)).first;
                order.push_back(key);
            }
            switch (role) {
                case SetRole::TargetX: current = &it->second.target_x; break;
                case SetRole::TargetY: current = &it->second.target_y; break;
                case SetRole::AttrA: current = &it->second.attr_a; break;
                case SetRole::AttrB: current = &it->second.attr_b; break;
            }
            continue;
        }

        if (!current) throw Error(where + ": stimulus line outside of a block");
        current->push_back(parse_stimulus(line, where));
    }

    std::vector<BiasTest> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        BiasTest& t = tests.at(key);
        for (SetRole role : {SetRole::TargetX, SetRole::TargetY, SetRole::AttrA, SetRole::AttrB}) {
            if (t.set(role).empty())
                throw Error(path + ": test " + t.test_id + " (" + t.target_language +
                            ") has an empty or missing " + set_role_name(role) + " set");
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::pair<BiasTest, BiasTest> make_cross_lingual(const BiasTest& test_l1,
                                                 const BiasTest& test_l2) {
    if (test_l1.test_id != test_l2.test_id)
        throw Error("cross-lingual pairing requires matching test ids (" +
                    test_l1.test_id + " vs " + test_l2.test_id + ")");
    if (test_l1.target_language == test_l2.target_language)
        throw Error("cross-lingual pairing requires two distinct languages (" +
                    test_l1.target_language + ")");

    BiasTest first;
    first.test_id = test_l1.test_id;
    first.target_x = test_l1.target_x;
    first.target_y = test_l1.target_y;
    first.attr_a = test_l2.attr_a;
    first.attr_b = test_l2.attr_b;
    first.target_language = test_l1.target_language;
    first.attribute_language = test_l2.attribute_language;

    BiasTest second;
    second.test_id = test_l2.test_id;
    second.target_x = test_l2.target_x;
    second.target_y = test_l2.target_y;
    second.attr_a = test_l1.attr_a;
    second.attr_b = test_l1.attr_b;
    second.target_language = test_l2.target_language;
    second.attribute_language = test_l1.attribute_language;

    return {std::move(first), std::move(second)};
}

namespace {

SetCoverage resolve_set(const std::vector<TermGroup>& groups, SetRole role,
                        const EmbeddingSpace& space, const LookupPolicy& policy,
                        std::vector<std::vector<double>>& vectors,
                        std::vector<std::string>& labels,
                        std::vector<std::pair<SetRole, std::string>>& dropped) {
    SetCoverage cov{role, 0, groups.size()};
    for (const TermGroup& group : groups) {
        bool any = false;
        for (const std::string& variant : group.variants) {
            auto idx = lookup(space, variant, policy);
            if (!idx) continue;
            any = true;
            vectors.push_back(space.row_copy(*idx));
            labels.push_back(variant);
        }
        if (any) {
            ++cov.found;
        } else {
            dropped.emplace_back(role, group.canonical);
        }
    }
    return cov;
}

} // namespace

ResolveOutcome resolve(const BiasTest& test,
                       const EmbeddingSpace& target_space,
                       const EmbeddingSpace& attr_space,
                       const LookupPolicy& policy,
                       double threshold) {
    if (threshold < 0.0 || threshold >= 1.0)
        throw Error("coverage threshold must be in [0, 1)");
    if (target_space.dim() != attr_space.dim())
        throw Error("dimension mismatch between target space (" +
                    std::to_string(target_space.dim()) + ") and attribute space (" +
                    std::to_string(attr_space.dim()) + ")");

    ResolvedTest r;
    r.test_id = test.test_id;
    r.target_language = test.target_language;
    r.attribute_language = test.attribute_language;
    r.coverage.push_back(resolve_set(test.target_x, SetRole::TargetX, target_space,
                                     policy, r.x, r.x_labels, r.dropped_terms));
    r.coverage.push_back(resolve_set(test.target_y, SetRole::TargetY, target_space,
                                     policy, r.y, r.y_labels, r.dropped_terms));
    r.coverage.push_back(resolve_set(test.attr_a, SetRole::AttrA, attr_space,
                                     policy, r.a, r.a_labels, r.dropped_terms));
    r.coverage.push_back(resolve_set(test.attr_b, SetRole::AttrB, attr_space,
                                     policy, r.b, r.b_labels, r.dropped_terms));

    // Keep only if every set resolves strictly more than `threshold`.
    for (const SetCoverage& cov : r.coverage) {
        double frac = cov.total == 0 ? 0.0
                                     : static_cast<double>(cov.found) /
                                           static_cast<double>(cov.total);
        if (!(frac > threshold)) {
            Discarded d;
            d.test_id = r.test_id;
            d.target_language = r.target_language;
            d.attribute_language = r.attribute_language;
            d.threshold = threshold;
            d.coverage = r.coverage;
            return d;
        }
    }
    return r;
}

} // namespace weatlab
