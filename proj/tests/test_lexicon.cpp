#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "util.hpp"
#include "weatlab/lexicon.hpp"

using namespace weatlab;

namespace {

EmbeddingSpace space_from(const std::vector<std::string>& words, std::size_t dim = 3,
                          unsigned seed = 7) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    std::vector<float> matrix(words.size() * dim);
    for (float& v : matrix) v = dist(gen);
    return EmbeddingSpace("en", dim, words, std::move(matrix), "synthetic");
}

} // namespace

TEST_CASE("shipped English lexicon loads with the ten tests") {
    auto tests = load_lexicon(std::string(WEATLAB_DATA_DIR) + "/weat_en.txt");
    REQUIRE(tests.size() == 10);

    const BiasTest& t1 = tests.front();
    CHECK(t1.test_id == "T1");
    CHECK(t1.target_language == "en");
    CHECK(t1.attribute_language == "en");
    CHECK(t1.target_x.size() == 25);
    CHECK(t1.target_y.size() == 25);
    CHECK(t1.attr_a.size() == 25);
    CHECK(t1.attr_b.size() == 25);
    CHECK(t1.target_x.front().canonical == "aster");

    for (const BiasTest& t : tests) {
        if (t.test_id != "T6") continue;
        CHECK(t.target_x.size() == 8);
        CHECK(t.attr_a.size() == 8);
        bool has_paul = false, has_lisa = false;
        for (const TermGroup& g : t.target_x)
            if (g.canonical == "Paul") has_paul = true;
        for (const TermGroup& g : t.target_y)
            if (g.canonical == "Lisa") has_lisa = true;
        CHECK(has_paul);
        CHECK(has_lisa);
    }
}

TEST_CASE("gender variants parse into one group with several forms") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T1 de target_X]\nBlume\n[T1 de target_Y]\nInsekt\n"
                         "[T1 de attr_A]\nfriend = Freund|Freundin\n"
                         "[T1 de attr_B]\nFeind\n");
    auto tests = load_lexicon(path);
    REQUIRE(tests.size() == 1);
    REQUIRE(tests[0].attr_a.size() == 1);
    CHECK(tests[0].attr_a[0].canonical == "friend");
    REQUIRE(tests[0].attr_a[0].variants.size() == 2);
    CHECK(tests[0].attr_a[0].variants[0] == "Freund");
    CHECK(tests[0].attr_a[0].variants[1] == "Freundin");
}

TEST_CASE("lexicon format errors") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");

    SUBCASE("empty set") {
        testutil::write_file(path,
                             "[T1 en target_X]\na\n[T1 en target_Y]\nb\n"
                             "[T1 en attr_A]\nc\n[T1 en attr_B]\n");
        CHECK_THROWS_WITH_AS(load_lexicon(path), doctest::Contains("attr_B"), Error);
    }
    SUBCASE("unknown test id") {
        testutil::write_file(path, "[T11 en target_X]\na\n");
        CHECK_THROWS_WITH_AS(load_lexicon(path), doctest::Contains("T11"), Error);
    }
    SUBCASE("unknown role") {
        testutil::write_file(path, "[T1 en target_Z]\na\n");
        CHECK_THROWS_AS(load_lexicon(path), Error);
    }
    SUBCASE("stimulus outside block has location") {
        testutil::write_file(path, "# hello\nstray\n");
        CHECK_THROWS_WITH_AS(load_lexicon(path), doctest::Contains(":2"), Error);
    }
    SUBCASE("duplicate variant") {
        testutil::write_file(path, "[T1 en target_X]\nx = a|a\n");
        CHECK_THROWS_AS(load_lexicon(path), Error);
    }
}

TEST_CASE("cross-lingual pairing swaps attribute sets and languages") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T2 de target_X]\nKlavier\nCello\n[T2 de target_Y]\nGewehr\n"
                         "[T2 de attr_A]\nLiebe\n[T2 de attr_B]\nMord\n"
                         "[T2 it target_X]\npianoforte\nvioloncello\n[T2 it target_Y]\nfucile\n"
                         "[T2 it attr_A]\namore\n[T2 it attr_B]\nomicidio\n");
    auto tests = load_lexicon(path);
    REQUIRE(tests.size() == 2);

    auto [de_targets, it_targets] = make_cross_lingual(tests[0], tests[1]);
    CHECK(de_targets.target_language == "de");
    CHECK(de_targets.attribute_language == "it");
    CHECK(de_targets.target_x[0].canonical == "Klavier");
    CHECK(de_targets.attr_a[0].canonical == "amore");
    CHECK(it_targets.target_language == "it");
    CHECK(it_targets.attribute_language == "de");
    CHECK(it_targets.target_x[0].canonical == "pianoforte");
    CHECK(it_targets.attr_a[0].canonical == "Liebe");

    CHECK_THROWS_AS(make_cross_lingual(tests[0], tests[0]), Error); // L1 = L2

    BiasTest other = tests[1];
    other.test_id = "T1";
    CHECK_THROWS_AS(make_cross_lingual(tests[0], other), Error); // id mismatch
}

TEST_CASE("seven languages give 42 directed cross-lingual tests") {
    // 21 unordered pairs, two directions each.
    const int languages = 7;
    int directed = 0;
    for (int i = 0; i < languages; ++i)
        for (int j = 0; j < languages; ++j)
            if (i != j) ++directed;
    CHECK(directed == 42);
}

TEST_CASE("resolve keeps all vectors when everything is found") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T6 en target_X]\na1\na2\n[T6 en target_Y]\nb1\nb2\n"
                         "[T6 en attr_A]\nc1\n[T6 en attr_B]\nd1\n");
    auto tests = load_lexicon(path);
    auto space = space_from({"a1", "a2", "b1", "b2", "c1", "d1"});

    auto outcome = resolve(tests[0], space, space, LookupPolicy{});
    REQUIRE(std::holds_alternative<ResolvedTest>(outcome));
    const auto& r = std::get<ResolvedTest>(outcome);
    CHECK(r.x.size() == 2);
    CHECK(r.y.size() == 2);
    CHECK(r.dropped_terms.empty());
    for (const SetCoverage& c : r.coverage) CHECK(c.found == c.total);
}

TEST_CASE("exactly 20% coverage is discarded (strictly-more-than rule)") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T1 en target_X]\np1\np2\np3\np4\np5\n"
                         "[T1 en target_Y]\nq1\nq2\n"
                         "[T1 en attr_A]\nr1\n[T1 en attr_B]\ns1\n");
    auto tests = load_lexicon(path);
    // Only p1 of the five X stimuli exists: coverage 1/5 = 20% exactly.
    auto space = space_from({"p1", "q1", "q2", "r1", "s1"});

    auto outcome = resolve(tests[0], space, space, LookupPolicy{}, 0.20);
    REQUIRE(std::holds_alternative<Discarded>(outcome));
    const auto& d = std::get<Discarded>(outcome);
    CHECK(d.coverage[0].found == 1);
    CHECK(d.coverage[0].total == 5);

    // Looser threshold keeps it.
    auto kept = resolve(tests[0], space, space, LookupPolicy{}, 0.19);
    CHECK(std::holds_alternative<ResolvedTest>(kept));
}

TEST_CASE("discard is monotone in the threshold") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T1 en target_X]\np1\np2\np3\n[T1 en target_Y]\nq1\n"
                         "[T1 en attr_A]\nr1\n[T1 en attr_B]\ns1\n");
    auto tests = load_lexicon(path);
    auto space = space_from({"p1", "p2", "q1", "r1", "s1"}); // X coverage 2/3

    bool discarded_before = false;
    for (double threshold : {0.0, 0.2, 0.4, 0.6, 0.66, 0.7, 0.9}) {
        bool discarded = std::holds_alternative<Discarded>(
            resolve(tests[0], space, space, LookupPolicy{}, threshold));
        if (discarded_before) CHECK(discarded);
        discarded_before = discarded;
    }
}

TEST_CASE("each found variant contributes its own vector; lost stimuli are recorded") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T1 en target_X]\nfriend = fa|fb\nlost = nope\ng1\n"
                         "[T1 en target_Y]\nh1\n"
                         "[T1 en attr_A]\ni1\n[T1 en attr_B]\nj1\n");
    auto tests = load_lexicon(path);
    auto space = space_from({"fa", "fb", "g1", "h1", "i1", "j1"});

    auto outcome = resolve(tests[0], space, space, LookupPolicy{});
    REQUIRE(std::holds_alternative<ResolvedTest>(outcome));
    const auto& r = std::get<ResolvedTest>(outcome);
    // friend contributes two vectors, g1 one; lost contributes none.
    CHECK(r.x.size() == 3);
    CHECK(r.coverage[0].found == 2);
    CHECK(r.coverage[0].total == 3);
    REQUIRE(r.dropped_terms.size() == 1);
    CHECK(r.dropped_terms[0].second == "lost");

    // A group with one of two variants found still counts as found.
    auto partial = space_from({"fa", "g1", "nope", "h1", "i1", "j1"});
    auto outcome2 = resolve(tests[0], partial, partial, LookupPolicy{});
    REQUIRE(std::holds_alternative<ResolvedTest>(outcome2));
    CHECK(std::get<ResolvedTest>(outcome2).coverage[0].found == 3);
}

TEST_CASE("resolve result is invariant under stimulus reordering (as a multiset)") {
    testutil::TempDir dir;
    auto p1 = dir.file("lex1.txt");
    auto p2 = dir.file("lex2.txt");
    testutil::write_file(p1,
                         "[T1 en target_X]\na\nb\nc\n[T1 en target_Y]\nd\n"
                         "[T1 en attr_A]\ne\n[T1 en attr_B]\nf\n");
    testutil::write_file(p2,
                         "[T1 en target_X]\nc\na\nb\n[T1 en target_Y]\nd\n"
                         "[T1 en attr_A]\ne\n[T1 en attr_B]\nf\n");
    auto space = space_from({"a", "b", "c", "d", "e", "f"});
    auto r1 = std::get<ResolvedTest>(
        resolve(load_lexicon(p1)[0], space, space, LookupPolicy{}));
    auto r2 = std::get<ResolvedTest>(
        resolve(load_lexicon(p2)[0], space, space, LookupPolicy{}));

    auto sorted = [](std::vector<std::vector<double>> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(r1.x) == sorted(r2.x));
}

TEST_CASE("dimension mismatch between spaces is an error") {
    testutil::TempDir dir;
    auto path = dir.file("lex.txt");
    testutil::write_file(path,
                         "[T1 en target_X]\na\n[T1 en target_Y]\nb\n"
                         "[T1 en attr_A]\nc\n[T1 en attr_B]\nd\n");
    auto tests = load_lexicon(path);
    auto s3 = space_from({"a", "b", "c", "d"}, 3);
    auto s4 = space_from({"a", "b", "c", "d"}, 4);
    CHECK_THROWS_AS(resolve(tests[0], s3, s4, LookupPolicy{}), Error);
}
