#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "puzzle_eval/grader.hpp"

using namespace puzzle_eval;
using grader::Classification;
using grader::GradeReport;
using grader::Transcript;

namespace {

Transcript hanoi_t(std::string id, int n, std::string text) {
    Transcript t;
    t.id = std::move(id);
    t.params = grader::HanoiParams{n};
    t.text = std::move(text);
    return t;
}

Transcript river_t(std::string id, int pairs, int capacity, std::string text) {
    Transcript t;
    t.id = std::move(id);
    t.params = grader::RiverParams{pairs, capacity};
    t.text = std::move(text);
    return t;
}

Transcript blocks_t(std::string id, blocks::State initial, blocks::State goal,
                    std::string text) {
    Transcript t;
    t.id = std::move(id);
    t.params = grader::BlocksParams{std::move(initial), std::move(goal)};
    t.text = std::move(text);
    return t;
}

const std::string kHanoi3Solution =
    "[[1,0,2],[2,0,1],[1,2,1],[3,0,2],[1,1,0],[2,1,2],[1,0,2]]";

}  // namespace

TEST_CASE("full hanoi solution grades Correct and optimal") {
    auto rep = grader::grade(hanoi_t("h1", 3, "Solution: " + kHanoi3Solution));
    CHECK(rep.classification == Classification::Correct);
    CHECK(rep.moves_found == 7);
    REQUIRE(rep.optimal.has_value());
    CHECK(*rep.optimal);
}

TEST_CASE("legal but non-optimal hanoi solution grades CorrectSuboptimal") {
    auto rep = grader::grade(hanoi_t(
        "h2", 2, "[[1,0,2],[1,2,1],[2,0,2],[1,1,0],[1,0,2]]"));
    CHECK(rep.classification == Classification::CorrectSuboptimal);
    REQUIRE(rep.optimal.has_value());
    CHECK_FALSE(*rep.optimal);
}

TEST_CASE("truncated valid prefix with the stop-here phrase") {
    auto rep = grader::grade(hanoi_t(
        "h3", 10,
        "[[1,0,2],[2,0,1], ... the pattern continues, but to avoid making "
        "this too long, I'll stop here"));
    CHECK(rep.classification == Classification::TruncatedValidPrefix);
    CHECK(rep.truncation_phrase_detected);
    REQUIRE(rep.prefix_length.has_value());
    CHECK(*rep.prefix_length == 2);
}

TEST_CASE("a long canonical prefix plus stop-phrase grades as truncation") {
    // First 100 canonical moves of the 10-disk solution, then the classic
    // excuse for stopping.
    auto moves = hanoi::solve(10);
    moves.resize(100);
    auto rep = grader::grade(hanoi_t(
        "h10", 10,
        wire::to_json(moves).dump() + " ... I'll stop here to keep this short."));
    CHECK(rep.classification == Classification::TruncatedValidPrefix);
    REQUIRE(rep.prefix_length.has_value());
    CHECK(*rep.prefix_length == 100);
    CHECK(rep.truncation_phrase_detected);
}

TEST_CASE("incomplete without any truncation signal still grades as prefix") {
    auto rep = grader::grade(hanoi_t("h4", 3, "I start with [[1,0,2],[2,0,1]]"));
    CHECK(rep.classification == Classification::TruncatedValidPrefix);
    CHECK_FALSE(rep.truncation_phrase_detected);
}

TEST_CASE("invalid move reports index and reason") {
    auto rep = grader::grade(hanoi_t("h5", 3, "[[2,0,2],[1,0,1]]"));
    CHECK(rep.classification == Classification::InvalidMove);
    REQUIRE(rep.invalid_index.has_value());
    CHECK(*rep.invalid_index == 0);
    CHECK(rep.invalid_reason == "not_topmost");
}

TEST_CASE("no extractable moves grades ParseFailure") {
    auto rep = grader::grade(hanoi_t("h6", 5, "Let me think about this one."));
    CHECK(rep.classification == Classification::ParseFailure);
    CHECK(rep.moves_found == 0);
}

TEST_CASE("justified impossibility claim on the unsolvable river instance") {
    auto rep = grader::grade(river_t(
        "r1", 6, 3,
        "With six pairs and a three-seat boat every crossing strands someone. "
        "Therefore the puzzle is unsolvable."));
    CHECK(rep.classification == Classification::ClaimedImpossible);
    REQUIRE(rep.impossibility_justified.has_value());
    CHECK(*rep.impossibility_justified);
}

TEST_CASE("impossibility claim on a solvable instance is unjustified") {
    auto rep = grader::grade(river_t(
        "r2", 3, 2, "I checked many orders. I conclude it cannot be solved."));
    CHECK(rep.classification == Classification::ClaimedImpossible);
    REQUIRE(rep.impossibility_justified.has_value());
    CHECK_FALSE(*rep.impossibility_justified);
}

TEST_CASE("hanoi impossibility claims are never justified") {
    auto rep = grader::grade(hanoi_t("h7", 4, "This is clearly impossible."));
    CHECK(rep.classification == Classification::ClaimedImpossible);
    REQUIRE(rep.impossibility_justified.has_value());
    CHECK_FALSE(*rep.impossibility_justified);
}

TEST_CASE("a correct move list dominates hedging language") {
    auto rep = grader::grade(hanoi_t(
        "h8", 3,
        "Some call it impossible. " + kHanoi3Solution + " solves it."));
    CHECK(rep.classification == Classification::Correct);
}

TEST_CASE("river witness grades Correct with known optimality") {
    auto witness = river::solve_bfs(river::Instance(2, 2)).witness;
    const std::string rendered = wire::to_json(witness).dump();
    auto rep = grader::grade(river_t("r3", 2, 2, "Plan: " + rendered));
    CHECK(rep.classification == Classification::Correct);
    REQUIRE(rep.optimal.has_value());
    CHECK(*rep.optimal);
}

TEST_CASE("river over-capacity crossing grades InvalidMove") {
    auto rep = grader::grade(
        river_t("r4", 2, 2, "[[\"a1\",\"a2\",\"A1\"]]"));
    CHECK(rep.classification == Classification::InvalidMove);
    CHECK(rep.invalid_reason == "over_capacity");
}

TEST_CASE("blocks prefix without phrase keeps the flag false") {
    auto rep = grader::grade(blocks_t(
        "b1", blocks::State{{{"A"}, {"B"}, {"C"}}},
        blocks::State{{{"A", "B", "C"}}}, "Start with [[\"B\",\"A\"]]"));
    CHECK(rep.classification == Classification::TruncatedValidPrefix);
    CHECK_FALSE(rep.truncation_phrase_detected);
}

TEST_CASE("blocks optimal solution grades Correct") {
    auto rep = grader::grade(blocks_t(
        "b2", blocks::State{{{"A", "B"}}}, blocks::State{{{"B", "A"}}},
        "[[\"B\",\"table\"],[\"A\",\"B\"]]"));
    CHECK(rep.classification == Classification::Correct);
    REQUIRE(rep.optimal.has_value());
    CHECK(*rep.optimal);
}

TEST_CASE("grade is deterministic") {
    auto t = hanoi_t("h9", 3, "maybe [[1,0,2],[2,0,1]] ... I'll stop here");
    auto a = grader::to_json(grader::grade(t)).dump();
    auto b = grader::to_json(grader::grade(t)).dump();
    CHECK(a == b);
}

TEST_CASE("grade_batch summary counts and misclassification fraction") {
    std::vector<Transcript> batch{
        hanoi_t("g1", 3, kHanoi3Solution),
        river_t("g2", 6, 3, "Therefore this is unsolvable."),
        hanoi_t("g3", 3, "[[2,0,2]]"),
    };
    auto [reports, summary] = grader::grade_batch(batch);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].classification == Classification::Correct);
    CHECK(reports[1].classification == Classification::ClaimedImpossible);
    CHECK(reports[2].classification == Classification::InvalidMove);
    CHECK(summary.total == 3);
    CHECK(summary.by_classification.at("correct") == 1);
    CHECK(summary.by_classification.at("claimed_impossible") == 1);
    CHECK(summary.by_classification.at("invalid_move") == 1);
    CHECK(summary.by_puzzle.at("hanoi") == 2);
    CHECK(summary.by_puzzle.at("river") == 1);
    CHECK(summary.binary_failures == 2);
    CHECK(summary.misclassified_binary_failures == 1);
    CHECK(summary.misclassification_fraction ==
          Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(summary.duplicate_ids.empty());
}

TEST_CASE("grade_batch flags duplicate ids and handles empty input") {
    auto [none, zero] = grader::grade_batch({});
    CHECK(none.empty());
    CHECK(zero.total == 0);
    CHECK(zero.misclassification_fraction == 0.0);

    std::vector<Transcript> dup{
        hanoi_t("same", 3, kHanoi3Solution),
        hanoi_t("same", 3, "[[2,0,2]]"),
        hanoi_t("same", 3, "no moves at all"),
    };
    auto [reports, summary] = grader::grade_batch(dup);
    CHECK(reports.size() == 3);
    CHECK(summary.duplicate_ids == std::vector<std::string>{"same"});
}

TEST_CASE("transcript json parsing validates schema and params") {
    auto good = grader::transcript_from_json(nlohmann::json::parse(
        R"({"id":"x","puzzle":"hanoi","params":{"n":3},"text":"[[1,0,2]]"})"));
    CHECK(good.id == "x");
    CHECK(good.kind() == grader::PuzzleKind::Hanoi);

    auto river_ok = grader::transcript_from_json(nlohmann::json::parse(
        R"({"id":"y","puzzle":"river","params":{"n_pairs":2,"capacity":2},"text":""})"));
    CHECK(river_ok.kind() == grader::PuzzleKind::River);

    auto blocks_ok = grader::transcript_from_json(nlohmann::json::parse(
        R"({"id":"z","puzzle":"blocks",
            "params":{"initial":[["A","B"]],"goal":[["B","A"]]},"text":""})"));
    CHECK(blocks_ok.kind() == grader::PuzzleKind::Blocks);

    CHECK_THROWS_AS(grader::transcript_from_json(nlohmann::json::parse(
                        R"({"id":"x","puzzle":"chess","params":{},"text":""})")),
                    wire::WireError);
    CHECK_THROWS_AS(grader::transcript_from_json(nlohmann::json::parse(
                        R"({"id":"x","puzzle":"hanoi","params":{"n":0},"text":""})")),
                    InvalidInstance);
    CHECK_THROWS_AS(grader::transcript_from_json(nlohmann::json::parse(
                        R"({"id":"x","puzzle":"river",
                            "params":{"n_pairs":2,"capacity":1},"text":""})")),
                    InvalidInstance);
    CHECK_THROWS_AS(
        grader::transcript_from_json(nlohmann::json::parse(
            R"({"id":"x","puzzle":"blocks",
                "params":{"initial":[["A"]],"goal":[["B"]]},"text":""})")),
        InvalidInstance);
    CHECK_THROWS_AS(grader::transcript_from_json(nlohmann::json::parse(
                        R"({"puzzle":"hanoi","params":{"n":1},"text":""})")),
                    wire::WireError);
}

TEST_CASE("report json carries detail per classification") {
    auto invalid = grader::grade(hanoi_t("j1", 3, "[[2,0,2]]"));
    auto j = grader::to_json(invalid);
    CHECK(j["schema_version"] == 1);
    CHECK(j["classification"] == "invalid_move");
    CHECK(j["detail"]["invalid_index"] == 0);
    CHECK(j["detail"]["reason"] == "not_topmost");
    CHECK(j["optimal"] == "unknown");

    auto claimed = grader::grade(river_t("j2", 6, 3, "It is unsolvable."));
    auto cj = grader::to_json(claimed);
    CHECK(cj["detail"]["justified"] == true);
}
