#include "weatlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace weatlab {

namespace {

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string coverage_to_string(const std::vector<SetCoverage>& cov) {
    std::ostringstream out;
    for (std::size_t i = 0; i < cov.size(); ++i) {
        if (i) out << '|';
        out << set_role_name(cov[i].role) << ':' << cov[i].found << '/' << cov[i].total;
    }
    return out.str();
}

std::vector<SetCoverage> coverage_from_string(const std::string& s) {
    std::vector<SetCoverage> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, '|')) {
        std::size_t colon = part.rfind(':');
        std::size_t slash = part.rfind('/');
        if (colon == std::string::npos || slash == std::string::npos || slash < colon)
            throw Error("malformed coverage field: " + s);
        SetCoverage cov;
        std::string role = part.substr(0, colon);
        if (role == "target_X") cov.role = SetRole::TargetX;
        else if (role == "target_Y") cov.role = SetRole::TargetY;
        else if (role == "attr_A") cov.role = SetRole::AttrA;
        else if (role == "attr_B") cov.role = SetRole::AttrB;
        else throw Error("malformed coverage field: " + s);
        cov.found = std::stoull(part.substr(colon + 1, slash - colon - 1));
        cov.total = std::stoull(part.substr(slash + 1));
        out.push_back(cov);
    }
    return out;
}

nlohmann::json row_to_json(const ReportRow& r) {
    nlohmann::json j;
    j["test_id"] = r.test_id;
    j["target_language"] = r.target_language;
    j["attribute_language"] = r.attribute_language;
    j["metric"] = r.metric;
    j["discarded"] = r.discarded;
    if (r.discarded) {
        j["discard_reason"] = r.discard_reason;
    } else {
        j["effect_size"] = r.effect_size;
        j["effect_size_display"] = display_2dp(r.effect_size);
        j["statistic"] = r.statistic;
        j["p_value"] = r.p_value;
        j["p_value_smoothed"] = r.p_value_smoothed;
        j["significant"] = r.significant;
        j["marker"] = r.significant ? "" : "*";
        j["mode"] = r.mode;
        j["partitions_evaluated"] = r.partitions_evaluated;
        j["ties"] = r.ties;
        if (r.mode == "monte-carlo") j["seed"] = r.seed;
    }
    nlohmann::json cov = nlohmann::json::array();
    for (const SetCoverage& c : r.coverage) {
        cov.push_back({{"set", set_role_name(c.role)},
                       {"found", c.found},
                       {"total", c.total}});
    }
    j["coverage"] = cov;
    return j;
}

} // namespace

std::string display_2dp(double value) {
    // Half-to-even at two decimals (nearbyint under the default
    // round-to-nearest mode).
    double scaled = std::nearbyint(value * 100.0);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", scaled / 100.0);
    return buf;
}

ReportFormat parse_report_format(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "tsv") return ReportFormat::Tsv;
    throw Error("unknown report format '" + s + "' (expected json or tsv)");
}

std::optional<double> aggregate_language(const std::vector<ReportRow>& rows,
                                         const std::string& language,
                                         AggregateMode mode) {
    Aggregates agg = aggregate(rows);
    for (const LanguageSummary& s : agg.languages) {
        if (s.language != language) continue;
        if (mode == AggregateMode::AvgAll) return s.avg_all;
        return s.avg_sig;
    }
    return std::nullopt;
}

Aggregates aggregate(const std::vector<ReportRow>& rows) {
    Aggregates agg;

    // Monolingual groups.
    std::map<std::string, std::vector<const ReportRow*>> by_language;
    for (const ReportRow& r : rows) {
        if (r.target_language == r.attribute_language)
            by_language[r.target_language].push_back(&r);
    }

    // A test id qualifies for avg_sig when it is present, kept, and
    // significant in every language group of this run.
    std::set<std::string> candidates;
    for (const auto& [lang, group] : by_language)
        for (const ReportRow* r : group) candidates.insert(r->test_id);
    for (const std::string& id : candidates) {
        bool everywhere = !by_language.empty();
        for (const auto& [lang, group] : by_language) {
            bool ok = false;
            for (const ReportRow* r : group)
                if (r->test_id == id && !r->discarded && r->significant) ok = true;
            if (!ok) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) agg.sig_subset.push_back(id);
    }

    for (const auto& [lang, group] : by_language) {
        LanguageSummary summary;
        summary.language = lang;
        double sum_all = 0.0;
        for (const ReportRow* r : group) {
            if (r->discarded) continue;
            sum_all += r->effect_size;
            ++summary.n_all;
        }
        if (summary.n_all > 0) sum_all /= static_cast<double>(summary.n_all);
        summary.avg_all = sum_all;

        if (!agg.sig_subset.empty()) {
            double sum_sig = 0.0;
            std::size_t n_sig = 0;
            for (const ReportRow* r : group) {
                if (r->discarded) continue;
                if (std::find(agg.sig_subset.begin(), agg.sig_subset.end(),
                              r->test_id) == agg.sig_subset.end())
                    continue;
                sum_sig += r->effect_size;
                ++n_sig;
            }
            if (n_sig > 0) summary.avg_sig = sum_sig / static_cast<double>(n_sig);
        }
        agg.languages.push_back(std::move(summary));
    }

    // Cross-lingual directed pairs.
    std::map<std::pair<std::string, std::string>, std::vector<const ReportRow*>> by_pair;
    for (const ReportRow& r : rows) {
        if (r.target_language != r.attribute_language)
            by_pair[{r.target_language, r.attribute_language}].push_back(&r);
    }
    for (const auto& [key, group] : by_pair) {
        PairSummary summary;
        summary.target_language = key.first;
        summary.attribute_language = key.second;
        double sum = 0.0;
        for (const ReportRow* r : group) {
            if (r->discarded) continue;
            sum += r->effect_size;
            ++summary.n;
            if (!r->significant) summary.any_insignificant = true;
        }
        if (summary.n > 0) summary.mean_effect = sum / static_cast<double>(summary.n);
        agg.pairs.push_back(std::move(summary));
    }

    return agg;
}

std::string rows_to_tsv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "test_id\ttarget_language\tattribute_language\tmetric\tdiscarded\t"
           "discard_reason\teffect_size\teffect_size_display\tstatistic\t"
           "p_value\tp_value_smoothed\tsignificant\tmarker\tmode\t"
           "partitions_evaluated\tties\tseed\tcoverage\n";
    for (const ReportRow& r : rows) {
        out << r.test_id << '\t' << r.target_language << '\t'
            << r.attribute_language << '\t' << r.metric << '\t'
            << (r.discarded ? 1 : 0) << '\t' << r.discard_reason << '\t'
            << full_precision(r.effect_size) << '\t' << display_2dp(r.effect_size)
            << '\t' << full_precision(r.statistic) << '\t'
            << full_precision(r.p_value) << '\t' << full_precision(r.p_value_smoothed)
            << '\t' << (r.significant ? 1 : 0) << '\t'
            << (r.discarded ? "" : (r.significant ? "" : "*")) << '\t' << r.mode
            << '\t' << r.partitions_evaluated << '\t' << r.ties << '\t' << r.seed
            << '\t' << coverage_to_string(r.coverage) << '\n';
    }
    return out.str();
}

std::vector<ReportRow> rows_from_tsv(const std::string& tsv) {
    std::istringstream in(tsv);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty TSV document");

    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t tab = line.find('\t', pos);
            fields.push_back(line.substr(pos, tab == std::string::npos
                                                  ? std::string::npos
                                                  : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (fields.size() != 18)
            throw Error("malformed TSV row (expected 18 fields, got " +
                        std::to_string(fields.size()) + ")");
        ReportRow r;
        r.test_id = fields[0];
        r.target_language = fields[1];
        r.attribute_language = fields[2];
        r.metric = fields[3];
        r.discarded = fields[4] == "1";
        r.discard_reason = fields[5];
        r.effect_size = std::strtod(fields[6].c_str(), nullptr);
        r.statistic = std::strtod(fields[8].c_str(), nullptr);
        r.p_value = std::strtod(fields[9].c_str(), nullptr);
        r.p_value_smoothed = std::strtod(fields[10].c_str(), nullptr);
        r.significant = fields[11] == "1";
        r.mode = fields[13];
        r.partitions_evaluated = std::stoull(fields[14]);
        r.ties = std::stoull(fields[15]);
        r.seed = std::stoull(fields[16]);
        r.coverage = coverage_from_string(fields[17]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit(const std::vector<ReportRow>& rows, const Aggregates& aggregates,
          const EmitOptions& options, std::ostream& out) {
    if (options.format == ReportFormat::Tsv) {
        if (options.with_timestamp) out << "# generated_at " << iso_timestamp() << '\n';
        out << rows_to_tsv(rows);
        for (const LanguageSummary& s : aggregates.languages) {
            out << "# language\t" << s.language << "\tavg_all\t"
                << full_precision(s.avg_all) << "\tavg_sig\t"
                << (s.avg_sig ? full_precision(*s.avg_sig) : std::string("none"))
                << '\n';
        }
        for (const PairSummary& p : aggregates.pairs) {
            out << "# pair\t" << p.target_language << '\t' << p.attribute_language
                << "\tmean_effect\t" << full_precision(p.mean_effect)
                << (p.any_insignificant ? "\t*" : "") << '\n';
        }
        return;
    }

    nlohmann::json doc;
    doc["schema"] = "weatlab-report/1";
    if (options.with_timestamp) doc["generated_at"] = iso_timestamp();
    doc["rows"] = nlohmann::json::array();
    for (const ReportRow& r : rows) doc["rows"].push_back(row_to_json(r));

    nlohmann::json langs = nlohmann::json::array();
    for (const LanguageSummary& s : aggregates.languages) {
        nlohmann::json j;
        j["language"] = s.language;
        j["avg_all"] = s.avg_all;
        j["avg_all_display"] = display_2dp(s.avg_all);
        j["tests_included"] = s.n_all;
        if (s.avg_sig) {
            j["avg_sig"] = *s.avg_sig;
            j["avg_sig_display"] = display_2dp(*s.avg_sig);
        } else {
            j["avg_sig"] = nullptr;
        }
        langs.push_back(std::move(j));
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairSummary& p : aggregates.pairs) {
        pairs.push_back({{"target_language", p.target_language},
                         {"attribute_language", p.attribute_language},
                         {"mean_effect", p.mean_effect},
                         {"mean_effect_display", display_2dp(p.mean_effect)},
                         {"tests_included", p.n},
                         {"any_insignificant", p.any_insignificant}});
    }
    doc["aggregates"] = {{"languages", std::move(langs)},
                         {"significant_everywhere", aggregates.sig_subset},
                         {"pairs", std::move(pairs)}};
    out << doc.dump(2) << '\n';
}

} // namespace weatlab
