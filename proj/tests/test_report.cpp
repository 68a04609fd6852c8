#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "weatlab/report.hpp"

using namespace weatlab;

namespace {

ReportRow row(const std::string& id, const std::string& tgt, const std::string& attr,
              double effect, bool significant) {
    ReportRow r;
    r.test_id = id;
    r.target_language = tgt;
    r.attribute_language = attr;
    r.metric = "cosine";
    r.effect_size = effect;
    r.statistic = effect; // placeholder
    r.p_value = significant ? 0.001 : 0.5;
    r.p_value_smoothed = r.p_value;
    r.significant = significant;
    r.mode = "exact";
    r.partitions_evaluated = 100;
    r.coverage = {{SetRole::TargetX, 8, 8},
                  {SetRole::TargetY, 8, 8},
                  {SetRole::AttrA, 8, 8},
                  {SetRole::AttrB, 8, 8}};
    return r;
}

// The published multilingual table's EN column: per-test effects with
// T1, T2, T6 significant across every language of that run.
std::vector<ReportRow> en_fixture() {
    return {
        row("T1", "en", "en", 1.67, true),  row("T2", "en", "en", 1.55, true),
        row("T6", "en", "en", 1.83, true),  row("T7", "en", "en", 1.30, false),
        row("T8", "en", "en", 1.30, false), row("T9", "en", "en", 1.72, false),
    };
}

} // namespace

TEST_CASE("avg_all and avg_sig reproduce the published EN aggregates") {
    auto rows = en_fixture();
    auto agg = aggregate(rows);
    REQUIRE(agg.languages.size() == 1);
    CHECK(agg.languages[0].language == "en");
    CHECK(display_2dp(agg.languages[0].avg_all) == "1.56");
    CHECK(std::abs(agg.languages[0].avg_all - 1.56) < 0.005);

    REQUIRE(agg.sig_subset == std::vector<std::string>{"T1", "T2", "T6"});
    REQUIRE(agg.languages[0].avg_sig.has_value());
    CHECK(display_2dp(*agg.languages[0].avg_sig) == "1.68");
    CHECK(std::abs(*agg.languages[0].avg_sig - (1.67 + 1.55 + 1.83) / 3.0) < 1e-12);

    CHECK(*aggregate_language(rows, "en", AggregateMode::AvgAll) ==
          doctest::Approx(agg.languages[0].avg_all));
}

TEST_CASE("avg_sig subset requires significance in every language group") {
    auto rows = en_fixture();
    // A second language where only T1 is significant.
    rows.push_back(row("T1", "de", "de", 1.36, true));
    rows.push_back(row("T2", "de", "de", 1.25, false));
    rows.push_back(row("T6", "de", "de", 1.59, true));
    auto agg = aggregate(rows);
    CHECK(agg.sig_subset == std::vector<std::string>{"T1", "T6"});
    // T2 significant in en but not de, T6 missing T2 etc.
    for (const LanguageSummary& s : agg.languages) {
        REQUIRE(s.avg_sig.has_value());
    }
}

TEST_CASE("empty qualifying subset is an explicit marker") {
    std::vector<ReportRow> rows{row("T1", "en", "en", 1.0, false)};
    auto agg = aggregate(rows);
    CHECK(agg.sig_subset.empty());
    CHECK_FALSE(agg.languages[0].avg_sig.has_value());
    CHECK(aggregate_language(rows, "en", AggregateMode::AvgSig) == std::nullopt);
}

TEST_CASE("cross-lingual pair aggregate reproduces the published EN/ES cell") {
    // Per-test cross-lingual effects for EN targets with ES attributes.
    std::vector<ReportRow> rows{
        row("T1", "en", "es", 1.63, true), row("T2", "en", "es", 1.51, true),
        row("T6", "en", "es", 1.81, true), row("T7", "en", "es", 1.36, true),
        row("T8", "en", "es", 1.49, true), row("T9", "en", "es", 1.66, true),
    };
    auto agg = aggregate(rows);
    REQUIRE(agg.pairs.size() == 1);
    CHECK(agg.pairs[0].target_language == "en");
    CHECK(agg.pairs[0].attribute_language == "es");
    CHECK(display_2dp(agg.pairs[0].mean_effect) == "1.58");
    CHECK(std::abs(agg.pairs[0].mean_effect - 1.58) < 0.005);
    CHECK_FALSE(agg.pairs[0].any_insignificant);

    rows[3].significant = false;
    auto flagged = aggregate(rows);
    CHECK(flagged.pairs[0].any_insignificant);
}

TEST_CASE("avg_all lies between the min and max included effect") {
    auto rows = en_fixture();
    auto agg = aggregate(rows);
    double lo = 1e9, hi = -1e9;
    for (const ReportRow& r : rows) {
        lo = std::min(lo, r.effect_size);
        hi = std::max(hi, r.effect_size);
    }
    CHECK(agg.languages[0].avg_all >= lo);
    CHECK(agg.languages[0].avg_all <= hi);
}

TEST_CASE("discarded rows are excluded from aggregates and carry a reason") {
    auto rows = en_fixture();
    ReportRow d;
    d.test_id = "T3";
    d.target_language = "en";
    d.attribute_language = "en";
    d.metric = "cosine";
    d.discarded = true;
    d.discard_reason = "coverage <= threshold (0.2): target_X=1/32";
    d.coverage = {{SetRole::TargetX, 1, 32},
                  {SetRole::TargetY, 0, 32},
                  {SetRole::AttrA, 25, 25},
                  {SetRole::AttrB, 25, 25}};
    rows.push_back(d);

    auto agg = aggregate(rows);
    CHECK(agg.languages[0].n_all == 6); // discarded row not counted

    std::ostringstream out;
    emit(rows, agg, {ReportFormat::Json, false}, out);
    auto doc = nlohmann::json::parse(out.str());
    bool found = false;
    for (const auto& jr : doc["rows"]) {
        if (jr["test_id"] == "T3") {
            found = true;
            CHECK(jr["discarded"] == true);
            CHECK(jr.contains("discard_reason"));
            CHECK_FALSE(jr.contains("effect_size"));
            CHECK(jr["coverage"][0]["found"] == 1);
        }
    }
    CHECK(found);
}

TEST_CASE("TSV round-trip preserves numeric fields bit-exactly") {
    auto rows = en_fixture();
    rows[0].effect_size = 1.2345678901234567;
    rows[0].p_value = 1.0 / 3.0;
    rows[0].p_value_smoothed = 2.0 / 7.0;
    rows[0].statistic = -0.1234567890123456;

    auto tsv = rows_to_tsv(rows);
    auto back = rows_from_tsv(tsv);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].effect_size == rows[i].effect_size);
        CHECK(back[i].statistic == rows[i].statistic);
        CHECK(back[i].p_value == rows[i].p_value);
        CHECK(back[i].p_value_smoothed == rows[i].p_value_smoothed);
        CHECK(back[i].test_id == rows[i].test_id);
        CHECK(back[i].significant == rows[i].significant);
        CHECK(back[i].coverage.size() == rows[i].coverage.size());
    }

    // JSON -> TSV -> JSON keeps the same values too.
    auto tsv2 = rows_to_tsv(back);
    CHECK(tsv2 == tsv);
}

TEST_CASE("empty row list still emits a valid document") {
    std::ostringstream out;
    emit({}, aggregate({}), {ReportFormat::Json, false}, out);
    auto doc = nlohmann::json::parse(out.str());
    CHECK(doc["rows"].is_array());
    CHECK(doc["rows"].empty());

    CHECK_NOTHROW((void)rows_from_tsv(rows_to_tsv({})));
}

TEST_CASE("insignificant rows carry the asterisk marker") {
    auto rows = en_fixture();
    auto tsv = rows_to_tsv(rows);
    std::istringstream in(tsv);
    std::string line;
    std::getline(in, line); // header
    int stars = 0;
    while (std::getline(in, line))
        if (line.find("\t*\t") != std::string::npos) ++stars;
    CHECK(stars == 3); // T7, T8, T9 insignificant
}

TEST_CASE("display rounding is half-to-even at two decimals") {
    CHECK(display_2dp(0.125) == "0.12");
    CHECK(display_2dp(0.375) == "0.38");
    CHECK(display_2dp(-0.125) == "-0.12");
    CHECK(display_2dp(1.56) == "1.56");
    CHECK(display_2dp(1.005000001) == "1.01");
}
