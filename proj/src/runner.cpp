#include "weatlab/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace weatlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) {
        part = trim(part);
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

int test_number(const std::string& test_id) {
    if (test_id.size() < 2 || test_id[0] != 'T') return 0;
    return std::atoi(test_id.c_str() + 1);
}

std::string coverage_reason(const Discarded& d) {
    std::ostringstream out;
    out << "coverage <= threshold (" << d.threshold << "):";
    for (const SetCoverage& c : d.coverage)
        out << ' ' << set_role_name(c.role) << '=' << c.found << '/' << c.total;
    return out.str();
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);

    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where = path + ":" + std::to_string(line_no);
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw Error(where + ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw Error(where + ": empty value for key '" + key + "'");

        if (key == "lexicon") {
            config.lexicon_path = value;
        } else if (key == "embedding") {
            std::istringstream v(value);
            EmbeddingSpec spec;
            if (!(v >> spec.language >> spec.path))
                throw Error(where + ": embedding needs `LANG PATH`");
            config.embeddings.push_back(std::move(spec));
        } else if (key == "align") {
            std::istringstream v(value);
            AlignJob job;
            if (!(v >> job.source_language >> job.target_language >> job.dict_path))
                throw Error(where + ": align needs `SRC TGT DICT_PATH`");
            config.align_jobs.push_back(std::move(job));
        } else if (key == "tests") {
            config.tests = split(value, ',');
        } else if (key == "metric") {
            config.metrics.clear();
            for (const std::string& m : split(value, ','))
                config.metrics.push_back(parse_metric(m));
            if (config.metrics.empty()) throw Error(where + ": no metric given");
        } else if (key == "alpha") {
            config.alpha = std::stod(value);
        } else if (key == "coverage_threshold") {
            config.coverage_threshold = std::stod(value);
        } else if (key == "permutations") {
            config.permutations = std::stoull(value);
        } else if (key == "exact_threshold") {
            config.exact_threshold = std::stoull(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "workers") {
            config.workers = std::stoull(value);
        } else if (key == "max_vocab") {
            config.max_vocab = std::stoull(value);
        } else if (key == "normalize_before_fit") {
            FitNormalization norm = parse_fit_normalization(value);
            for (AlignJob& job : config.align_jobs) job.normalization = norm;
        } else if (key == "case") {
            if (value == "exact-only")
                config.policy.case_strategy = CaseStrategy::ExactOnly;
            else if (value == "exact-then-lowercase")
                config.policy.case_strategy = CaseStrategy::ExactThenLowercase;
            else
                throw Error(where + ": unknown case strategy '" + value + "'");
        } else if (key == "format") {
            config.format = parse_report_format(value);
        } else {
            throw Error(where + ": unknown config key '" + key + "'");
        }
    }
    if (config.lexicon_path.empty()) throw Error(path + ": missing `lexicon` key");
    if (config.embeddings.empty()) throw Error(path + ": missing `embedding` entries");
    return config;
}

ReportRow evaluate(const ResolveOutcome& outcome, Metric metric,
                   std::size_t permutations, std::uint64_t exact_threshold,
                   std::uint64_t seed, std::size_t workers, double alpha) {
    ReportRow row;
    row.metric = metric_name(metric);

    if (const Discarded* d = std::get_if<Discarded>(&outcome)) {
        row.test_id = d->test_id;
        row.target_language = d->target_language;
        row.attribute_language = d->attribute_language;
        row.discarded = true;
        row.discard_reason = coverage_reason(*d);
        row.coverage = d->coverage;
        return row;
    }

    const ResolvedTest& test = std::get<ResolvedTest>(outcome);
    row.test_id = test.test_id;
    row.target_language = test.target_language;
    row.attribute_language = test.attribute_language;
    row.coverage = test.coverage;

    AssociationProfile profile = compute_associations(test, metric);
    row.statistic = test_statistic(profile);
    row.effect_size = effect_size(profile);

    PermutationPlan plan = make_plan(test.x.size() + test.y.size(), test.x.size(),
                                     exact_threshold, permutations, seed, workers);
    SignificanceResult sig = p_value(profile, metric, plan, alpha);
    row.p_value = sig.p_value;
    row.p_value_smoothed = sig.p_value_smoothed;
    row.significant = sig.significant;
    row.mode = sig.mode == PermutationMode::Exact ? "exact" : "monte-carlo";
    row.partitions_evaluated = sig.partitions_evaluated;
    row.ties = sig.ties;
    row.seed = seed;
    return row;
}

RunResult run(const RunConfig& config) {
    std::vector<BiasTest> lexicon = load_lexicon(config.lexicon_path);

    // Selected test ids, defaulting to everything in the lexicon.
    std::vector<std::string> selected = config.tests;
    if (selected.empty()) {
        for (const BiasTest& t : lexicon)
            if (std::find(selected.begin(), selected.end(), t.test_id) == selected.end())
                selected.push_back(t.test_id);
    } else {
        for (const std::string& id : selected) {
            bool found = false;
            for (const BiasTest& t : lexicon)
                if (t.test_id == id) found = true;
            if (!found)
                throw Error("selected test " + id + " not present in lexicon " +
                            config.lexicon_path);
        }
    }

    std::map<std::string, EmbeddingSpace> spaces;
    for (const EmbeddingSpec& spec : config.embeddings) {
        if (spaces.count(spec.language))
            throw Error("duplicate embedding for language " + spec.language);
        spaces.emplace(spec.language,
                       load_embeddings(spec.path, spec.language, config.max_vocab));
    }

    auto tests_for = [&](const std::string& id, const std::string& language)
        -> const BiasTest* {
        for (const BiasTest& t : lexicon)
            if (t.test_id == id && t.target_language == language) return &t;
        return nullptr;
    };

    std::vector<ReportRow> rows;

    // Monolingual rows: every selected test available in a loaded language.
    for (const auto& [language, space] : spaces) {
        for (const std::string& id : selected) {
            const BiasTest* test = tests_for(id, language);
            if (!test) continue;
            ResolveOutcome outcome = resolve(*test, space, space, config.policy,
                                             config.coverage_threshold);
            for (Metric metric : config.metrics)
                rows.push_back(evaluate(outcome, metric, config.permutations,
                                        config.exact_threshold, config.seed,
                                        config.workers, config.alpha));
        }
    }

    // Cross-lingual rows: both directions per align job, evaluated in the
    // target-language space with the source side projected into it.
    for (const AlignJob& job : config.align_jobs) {
        auto src_it = spaces.find(job.source_language);
        auto tgt_it = spaces.find(job.target_language);
        if (src_it == spaces.end() || tgt_it == spaces.end())
            throw Error("align job " + job.source_language + "->" +
                        job.target_language + " needs both embedding spaces loaded");

        BilingualDictionary dict = load_dictionary(job.dict_path, job.source_language,
                                                   job.target_language);
        AlignedMatrices aligned =
            extract_aligned(dict, src_it->second, tgt_it->second, config.policy);
        ProjectionMatrix w = fit_procrustes(aligned, job.normalization);
        EmbeddingSpace projected = project(src_it->second, w);

        for (const std::string& id : selected) {
            const BiasTest* test_src = tests_for(id, job.source_language);
            const BiasTest* test_tgt = tests_for(id, job.target_language);
            if (!test_src || !test_tgt) continue;
            auto [src_targets, tgt_targets] = make_cross_lingual(*test_src, *test_tgt);

            ResolveOutcome a = resolve(src_targets, projected, tgt_it->second,
                                       config.policy, config.coverage_threshold);
            ResolveOutcome b = resolve(tgt_targets, tgt_it->second, projected,
                                       config.policy, config.coverage_threshold);
            for (Metric metric : config.metrics) {
                rows.push_back(evaluate(a, metric, config.permutations,
                                        config.exact_threshold, config.seed,
                                        config.workers, config.alpha));
                rows.push_back(evaluate(b, metric, config.permutations,
                                        config.exact_threshold, config.seed,
                                        config.workers, config.alpha));
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (test_number(a.test_id) != test_number(b.test_id))
            return test_number(a.test_id) < test_number(b.test_id);
        if (a.target_language != b.target_language)
            return a.target_language < b.target_language;
        if (a.attribute_language != b.attribute_language)
            return a.attribute_language < b.attribute_language;
        return a.metric < b.metric;
    });

    RunResult result;
    result.rows = std::move(rows);
    result.aggregates = aggregate(result.rows);
    return result;
}

} // namespace weatlab
