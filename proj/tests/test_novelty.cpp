#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace sapphire;
using Catch::Approx;

namespace {

ProblemSapphire make(const std::string& id, Provenance prov, ConstructMap constructs) {
    ProblemSapphire p;
    p.id = id;
    p.provenance = prov;
    p.constructs = std::move(constructs);
    return p;
}

const ProblemSapphire* find(const ProblemCorpus& c, const std::string& id) {
    for (const auto& p : c.problems)
        if (p.id == id)
            return &p;
    return nullptr;
}

// Backend whose answers come from a caller-supplied table keyed by text.
class TableBackend final : public SimilarityBackend {
public:
    std::map<std::pair<std::string, std::string>, double> values;

    BackendKind kind() const noexcept override { return BackendKind::Fixture; }
    Similarity compare(std::string_view a, std::string_view b) const override {
        std::pair<std::string, std::string> key{std::string(a), std::string(b)};
        if (key.second < key.first)
            std::swap(key.first, key.second);
        return {values.at(key), false};
    }
    void set(const std::string& a, const std::string& b, double v) {
        values[a < b ? std::pair{a, b} : std::pair{b, a}] = v;
    }
};

}  // namespace

TEST_CASE("construct_novelty", "[novelty]") {
    CHECK(construct_novelty(0.314) == 0.686);
    CHECK(construct_novelty(1.0) == 0.0);
    CHECK(construct_novelty(0.0) == 1.0);
    CHECK_THROWS_AS(construct_novelty(1.01), DataError);
    CHECK_THROWS_AS(construct_novelty(-0.01), DataError);
    CHECK_THROWS_AS(construct_novelty(std::nan("")), DataError);
}

TEST_CASE("construct_novelty is 1 - similarity", "[novelty][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double s = unit(rng);
        const double n = construct_novelty(s);
        REQUIRE(std::abs(n - (1.0 - s)) <= 1e-15);
        REQUIRE(n >= 0.0);
        REQUIRE(n <= 1.0);
    }
}

TEST_CASE("aggregate_novelty", "[novelty]") {
    using L = ConstructLevel;
    const std::vector<L> six(kNonActionLevels.begin(), kNonActionLevels.end());

    LevelScores ps1_ps3{{L::StateChange, 0.686}, {L::Phenomena, 0.519}, {L::Effect, 0.0},
                        {L::Input, 0.699},       {L::Organ, 0.796},     {L::Parts, 0.613}};
    const double a = aggregate_novelty(ps1_ps3, six);
    CHECK(a == Approx(3.313 / 6).margin(1e-12));
    CHECK(format_fixed(a, 2) == "0.55");

    LevelScores ps2_ps5{{L::StateChange, 0.553}, {L::Phenomena, 0.799}, {L::Effect, 0.755},
                        {L::Input, 0.763},       {L::Organ, 0.588},     {L::Parts, 0.731}};
    const double b = aggregate_novelty(ps2_ps5, six);
    CHECK(b == Approx(4.189 / 6).margin(1e-12));
    CHECK(format_fixed(b, 2) == "0.70");

    LevelScores zeros;
    for (auto l : six)
        zeros[l] = 0.0;
    CHECK(aggregate_novelty(zeros, six) == 0.0);

    CHECK_THROWS_AS(aggregate_novelty(zeros, {}), DataError);
    const std::vector<L> with_action{L::Action, L::Parts};
    zeros[L::Action] = 0.0;
    CHECK_THROWS_AS(aggregate_novelty(zeros, with_action), DataError);
    const std::vector<L> parts_only{L::Parts};
    CHECK_THROWS_AS(aggregate_novelty(LevelScores{{L::Organ, 0.5}}, parts_only), DataError);
}

TEST_CASE("aggregate_novelty matches brute-force summation", "[novelty][property]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        LevelScores scores;
        for (auto l : kNonActionLevels)
            scores[l] = unit(rng);
        const double mean = aggregate_novelty(
            scores, std::vector<ConstructLevel>(kNonActionLevels.begin(), kNonActionLevels.end()));
        long double sum = 0;
        for (const auto& [level, v] : scores)
            sum += v;
        REQUIRE(std::abs(mean - static_cast<double>(sum / 6)) <= 1e-12);
    }
}

TEST_CASE("classify_novelty", "[novelty]") {
    CHECK(classify_novelty(0.55) == NoveltyBand::Medium);
    CHECK(classify_novelty(0.70) == NoveltyBand::High);
    CHECK(classify_novelty(0.0) == NoveltyBand::Low);
    CHECK(classify_novelty(1.0) == NoveltyBand::High);
    CHECK(classify_novelty(0.2949) == NoveltyBand::Low);
    CHECK(classify_novelty(0.295) == NoveltyBand::Medium);  // displays as 0.30
    CHECK(classify_novelty(0.3) == NoveltyBand::Medium);
    CHECK(classify_novelty(0.6949) == NoveltyBand::Medium);
    CHECK(classify_novelty(4.189 / 6) == NoveltyBand::High);  // 0.698 displays as 0.70
    CHECK_THROWS_AS(classify_novelty(1.2), DataError);
    CHECK_THROWS_AS(classify_novelty(-0.1), DataError);
}

TEST_CASE("classify_novelty is monotone", "[novelty][property]") {
    NoveltyBand prev = NoveltyBand::Low;
    for (int i = 0; i <= 100000; ++i) {
        const auto band = classify_novelty(i / 100000.0);
        REQUIRE(band >= prev);
        prev = band;
    }
}

TEST_CASE("round_half_up", "[novelty]") {
    CHECK(round_half_up(0.545, 2) == 0.55);
    CHECK(round_half_up(0.5449, 2) == 0.54);
    CHECK(round_half_up(0.6225, 3) == 0.623);
    CHECK(format_fixed(0.0, 3) == "0.000");
    CHECK(format_fixed(0.6859999999999999, 3) == "0.686");
}

TEST_CASE("action_match", "[novelty]") {
    LexicalBackend lexical;
    auto a = make("A", Provenance::Past, {{ConstructLevel::Action, "spilling of liquid"}});
    auto b = make("B", Provenance::Current, {{ConstructLevel::Action, "spilling of liquid"}});
    auto m = action_match(a, b, lexical, 0.7);
    CHECK(m.matched);
    CHECK(m.similarity == 1.0);

    auto x = make("X", Provenance::Past, {{ConstructLevel::Action, "alpha beta"}});
    auto y = make("Y", Provenance::Current, {{ConstructLevel::Action, "gamma delta"}});
    m = action_match(x, y, lexical, 0.7);
    CHECK_FALSE(m.matched);
    CHECK(m.similarity == 0.0);

    // Threshold is inclusive.
    CHECK(action_match(x, y, lexical, 0.0).matched);
    CHECK_THROWS_AS(action_match(x, y, lexical, 1.5), DataError);

    auto invalid = make("bad id", Provenance::Past, {{ConstructLevel::Action, "spilling"}});
    CHECK_THROWS_AS(action_match(invalid, b, lexical), ValidationError);
}

TEST_CASE("case-study pairs gate through on the shared action", "[novelty][case-study]") {
    auto past = testing::case_study_past();
    auto current = testing::case_study_current();
    auto fixture = testing::case_study_fixture();
    REQUIRE(construct_text(*find(past, "PS1"), ConstructLevel::Action) == "spilling of liquid");
    auto m = action_match(*find(past, "PS1"), *find(current, "PS3"), fixture);
    CHECK(m.matched);
    CHECK(m.similarity == 1.0);
}

TEST_CASE("assess_pair", "[novelty]") {
    auto past = testing::case_study_past();
    auto current = testing::case_study_current();
    auto fixture = testing::case_study_fixture();

    SECTION("PS1 vs PS3 replays the published column") {
        auto r = assess_pair(*find(past, "PS1"), *find(current, "PS3"), fixture);
        REQUIRE(r);
        CHECK(r->construct_novelty.at(ConstructLevel::Action) == 0.0);
        CHECK(r->construct_novelty.at(ConstructLevel::StateChange) == 0.686);
        CHECK(r->included_levels.size() == 6);
        REQUIRE(r->average_novelty);
        CHECK(*r->average_novelty == Approx(0.55).margin(0.005));
        CHECK(r->band == NoveltyBand::Medium);
        CHECK_FALSE(r->reduced());
        for (auto level : r->included_levels)
            CHECK(r->construct_novelty.at(level) == construct_novelty(r->construct_similarity.at(level)));
    }
    SECTION("a problem against itself is zero novelty") {
        LexicalBackend lexical;
        const auto& p = *find(past, "PS1");
        auto r = assess_pair(p, p, lexical);
        REQUIRE(r);
        for (const auto& [level, n] : r->construct_novelty)
            CHECK(n == 0.0);
        CHECK(r->average_novelty == 0.0);
        CHECK(r->band == NoveltyBand::Low);
    }
    SECTION("gate failure gives no assessment") {
        LexicalBackend lexical;
        auto a = make("A", Provenance::Past, {{ConstructLevel::Action, "alpha beta"}});
        auto b = make("B", Provenance::Current, {{ConstructLevel::Action, "gamma delta"}});
        CHECK_FALSE(assess_pair(a, b, lexical));
    }
}

TEST_CASE("assess_pair averages only shared constructs", "[novelty]") {
    TableBackend backend;
    backend.set("act", "act", 1.0);
    backend.set("s1", "s2", 0.4);
    backend.set("p1", "p2", 0.8);
    auto a = make("A", Provenance::Past,
                  {{ConstructLevel::Action, "act"},
                   {ConstructLevel::StateChange, "s1"},
                   {ConstructLevel::Parts, "p1"},
                   {ConstructLevel::Organ, "o1"}});
    auto b = make("B", Provenance::Current,
                  {{ConstructLevel::Action, "act"},
                   {ConstructLevel::StateChange, "s2"},
                   {ConstructLevel::Parts, "p2"},
                   {ConstructLevel::Effect, "e2"}});
    auto r = assess_pair(a, b, backend);
    REQUIRE(r);
    CHECK(r->included_levels == std::vector<ConstructLevel>{ConstructLevel::StateChange, ConstructLevel::Parts});
    CHECK(r->reduced());
    CHECK(*r->average_novelty == Approx((0.6 + 0.2) / 2).margin(1e-12));
    CHECK_FALSE(r->construct_similarity.contains(ConstructLevel::Organ));
    CHECK_FALSE(r->construct_similarity.contains(ConstructLevel::Effect));

    SECTION("no shared non-action construct") {
        auto c = make("C", Provenance::Current, {{ConstructLevel::Action, "act"}});
        auto rc = assess_pair(a, c, backend);
        REQUIRE(rc);
        CHECK_FALSE(rc->comparable());
        CHECK_FALSE(rc->band);
        CHECK(rc->included_levels.empty());
    }
}

TEST_CASE("rank_current_problems on the case study", "[novelty][case-study]") {
    auto report = rank_current_problems(testing::case_study_past(), testing::case_study_current(),
                                        testing::case_study_fixture());
    REQUIRE(report.ranked.size() == 3);
    CHECK(report.unmatched.empty());
    CHECK(report.ranked[0].current_id == "PS5");
    CHECK(report.ranked[1].current_id == "PS4");
    CHECK(report.ranked[2].current_id == "PS3");
    CHECK(*report.ranked[0].min_novelty == Approx(0.70).margin(0.005));
    CHECK(*report.ranked[1].min_novelty == Approx(0.65).margin(0.005));
    CHECK(*report.ranked[2].min_novelty == Approx(0.55).margin(0.005));
    CHECK(report.ranked[0].closest_past_id == "PS2");
    CHECK(report.ranked[0].band == NoveltyBand::High);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.ranked[i].rank == i + 1);
        CHECK(report.ranked[i].pairs.size() == 2);
    }
}

TEST_CASE("rank_current_problems edge cases", "[novelty]") {
    LexicalBackend lexical;
    auto past = testing::case_study_past();

    SECTION("current problem identical to a past problem") {
        ProblemCorpus current{"c", Provenance::Current, {past.problems[0]}};
        current.problems[0].provenance = Provenance::Current;
        current.problems[0].id = "C1";
        auto report = rank_current_problems(past, current, lexical);
        REQUIRE(report.ranked.size() == 1);
        CHECK(report.ranked[0].min_novelty == 0.0);
        CHECK(report.ranked[0].band == NoveltyBand::Low);
        CHECK(report.ranked[0].rank == 1);
    }
    SECTION("action matching no past problem is unmatched") {
        ProblemCorpus current{"c", Provenance::Current,
                              {make("C9", Provenance::Current,
                                    {{ConstructLevel::Action, "heating does not stop"},
                                     {ConstructLevel::Parts, "switch"}})}};
        auto report = rank_current_problems(past, current, lexical);
        CHECK(report.ranked.empty());
        REQUIRE(report.unmatched.size() == 1);
        CHECK(report.unmatched[0].current_id == "C9");
        CHECK_FALSE(report.unmatched[0].min_novelty);
        CHECK(report.unmatched[0].rank == 0);
    }
    SECTION("ties are broken by ascending id") {
        ProblemCorpus current{"c", Provenance::Current, {}};
        for (const char* id : {"Z", "M", "A"}) {
            auto p = past.problems[0];
            p.id = id;
            p.provenance = Provenance::Current;
            current.problems.push_back(p);
        }
        auto report = rank_current_problems(past, current, lexical);
        REQUIRE(report.ranked.size() == 3);
        CHECK(report.ranked[0].current_id == "A");
        CHECK(report.ranked[1].current_id == "M");
        CHECK(report.ranked[2].current_id == "Z");
    }
    SECTION("empty past corpus is rejected") {
        ProblemCorpus empty{"p", Provenance::Past, {}};
        CHECK_THROWS_AS(rank_current_problems(empty, testing::case_study_current(), lexical), DataError);
    }
    SECTION("invalid corpus is rejected") {
        auto current = testing::case_study_current();
        current.problems[1].id = current.problems[0].id;
        CHECK_THROWS_AS(rank_current_problems(past, current, lexical), ValidationError);
    }
    SECTION("empty current corpus gives an empty report") {
        ProblemCorpus empty{"c", Provenance::Current, {}};
        auto report = rank_current_problems(past, empty, lexical);
        CHECK(report.ranked.empty());
        CHECK(report.unmatched.empty());
    }
}

TEST_CASE("backend errors propagate out of ranking", "[novelty]") {
    FixtureBackend empty_fixture(FixtureTable{});
    CHECK_THROWS_AS(rank_current_problems(testing::case_study_past(), testing::case_study_current(),
                                          empty_fixture, {0.7, 4}),
                    MissingFixtureError);
}

TEST_CASE("pipeline properties on random corpora", "[novelty][property]") {
    std::mt19937_64 rng(31);
    WordVectorBackend wordvec(std::make_shared<const WordVectorTable>(testing::random_word_table(rng)));
    LexicalBackend lexical;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 200; ++trial) {
        auto a = testing::random_problem(rng, "P", Provenance::Past);
        auto b = testing::random_problem(rng, "C", Provenance::Current);
        const double threshold = unit(rng);
        for (const SimilarityBackend* backend : {static_cast<const SimilarityBackend*>(&lexical),
                                                 static_cast<const SimilarityBackend*>(&wordvec)}) {
            const auto gate = action_match(a, b, *backend, threshold);
            const auto r = assess_pair(a, b, *backend, threshold);
            REQUIRE(r.has_value() == gate.matched);
            if (!r || !r->average_novelty)
                continue;
            REQUIRE(*r->average_novelty >= 0.0);
            REQUIRE(*r->average_novelty <= 1.0);
            long double sum = 0;
            for (auto level : r->included_levels)
                sum += 1.0L - r->construct_similarity.at(level);
            REQUIRE(std::abs(*r->average_novelty - static_cast<double>(sum / r->included_levels.size()))
                    <= 1e-12);
        }
    }
}

TEST_CASE("raising one construct similarity never raises average novelty", "[novelty][property]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, kNonActionLevels.size() - 1);
    const std::vector<ConstructLevel> six(kNonActionLevels.begin(), kNonActionLevels.end());
    for (int i = 0; i < 10000; ++i) {
        std::map<ConstructLevel, double> sims;
        for (auto l : six)
            sims[l] = unit(rng);
        LevelScores before;
        for (auto [l, s] : sims)
            before[l] = construct_novelty(s);
        const auto level = six[pick(rng)];
        const double raised = sims[level] + (1.0 - sims[level]) * unit(rng);
        LevelScores after = before;
        after[level] = construct_novelty(raised);
        REQUIRE(aggregate_novelty(after, six) <= aggregate_novelty(before, six));
    }
}

TEST_CASE("o_score", "[novelty][oscore]") {
    CHECK(o_score({5, 5}) == 0.0);
    CHECK(o_score({0, 5}) == 1.0);
    CHECK(o_score({2, 8}) == 0.75);
    CHECK_THROWS_AS(o_score({0, 0}), DataError);
    CHECK_THROWS_AS(o_score({3, 2}), DataError);
    CHECK_THROWS_AS(o_score({-1, 2}), DataError);
}
