#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "puzzle_eval/blocks.hpp"
#include "support/blocks_oracle.hpp"

using namespace puzzle_eval;
using blocks::Move;
using blocks::State;

namespace {

State st(std::vector<std::vector<std::string>> stacks) {
    return State{std::move(stacks)};
}

}  // namespace

TEST_CASE("apply_move basics") {
    auto to_table = blocks::apply_move(st({{"A", "B"}}), Move{"B", std::nullopt});
    REQUIRE(to_table.ok());
    CHECK(blocks::same_configuration(to_table.value(), st({{"A"}, {"B"}})));

    auto buried = blocks::apply_move(st({{"A", "B"}}), Move{"A", std::nullopt});
    REQUIRE_FALSE(buried.ok());
    CHECK(buried.error() == blocks::MoveError::NotTopmost);

    auto stack_up = blocks::apply_move(st({{"A"}, {"B"}}), Move{"B", "A"});
    REQUIRE(stack_up.ok());
    CHECK(blocks::same_configuration(stack_up.value(), st({{"A", "B"}})));

    CHECK(blocks::apply_move(st({{"A"}}), Move{"Z", std::nullopt}).error() ==
          blocks::MoveError::UnknownBlock);
    CHECK(blocks::apply_move(st({{"A"}, {"B"}}), Move{"B", "Z"}).error() ==
          blocks::MoveError::UnknownBlock);
    CHECK(blocks::apply_move(st({{"A", "B"}, {"C"}}), Move{"C", "A"}).error() ==
          blocks::MoveError::DestinationNotTop);
    CHECK(blocks::apply_move(st({{"A"}, {"B"}}), Move{"B", "B"}).error() ==
          blocks::MoveError::DestinationNotTop);

    // A lone block moved to the table is a legal no-op.
    auto noop = blocks::apply_move(st({{"A"}, {"B", "C"}}), Move{"A", std::nullopt});
    REQUIRE(noop.ok());
    CHECK(blocks::same_configuration(noop.value(), st({{"A"}, {"B", "C"}})));
}

TEST_CASE("state validation") {
    CHECK_THROWS_AS(blocks::validate_state(st({{"A"}, {"A"}})), InvalidInstance);
    CHECK_THROWS_AS(blocks::validate_state(st({{"A"}, {}})), InvalidInstance);
    CHECK_THROWS_AS(blocks::misplaced_count(st({{"A"}}), st({{"B"}})),
                    InvalidInstance);
}

TEST_CASE("misplaced_count uses full-prefix matching") {
    CHECK(blocks::misplaced_count(st({{"A", "B"}}), st({{"A", "B"}})) == 0);
    CHECK(blocks::misplaced_count(st({{"A", "B"}}), st({{"B", "A"}})) == 2);
    // A sits correctly; B's stack has the wrong base, so B and C are out.
    CHECK(blocks::misplaced_count(st({{"A"}, {"B", "C"}}), st({{"A", "B", "C"}})) ==
          2);
}

TEST_CASE("near_optimal_plan solves and respects the 2x bound") {
    auto same = blocks::near_optimal_plan(st({{"A", "B"}}), st({{"A", "B"}}));
    CHECK(same.moves.empty());
    CHECK_FALSE(same.optimal);

    auto one = blocks::near_optimal_plan(st({{"A"}, {"B"}}), st({{"A", "B"}}));
    CHECK(one.moves == std::vector<Move>{{"B", "A"}});

    auto swap = blocks::near_optimal_plan(st({{"A", "B"}}), st({{"B", "A"}}));
    CHECK(swap.moves.size() <= 4);
    CHECK(blocks::verify(st({{"A", "B"}}), st({{"B", "A"}}), swap.moves).status ==
          VerifyStatus::Correct);
    // Exhaustive-search optimum for this swap is 2 moves.
    CHECK(blocks::optimal_plan(st({{"A", "B"}}), st({{"B", "A"}})).moves.size() ==
          2);
}

TEST_CASE("optimal_plan matches the brute-force oracle on small instances") {
    auto same = blocks::optimal_plan(st({{"A", "B"}}), st({{"A", "B"}}));
    CHECK(same.moves.empty());
    CHECK(same.optimal);

    auto swap = blocks::optimal_plan(st({{"A", "B"}}), st({{"B", "A"}}));
    CHECK(swap.moves.size() == 2);
    CHECK(swap.optimal);
    CHECK(blocks::verify(st({{"A", "B"}}), st({{"B", "A"}}), swap.moves).status ==
          VerifyStatus::Correct);

    // All pairs over three blocks against the independent oracle.
    using testsupport::blocks_oracle::bfs_distance;
    using testsupport::blocks_oracle::enumerate_states;
    using testsupport::blocks_oracle::to_engine_state;
    auto all = enumerate_states({"A", "B", "C"});
    REQUIRE(all.size() == 13);
    for (const auto& from : all) {
        for (const auto& to : all) {
            auto initial = to_engine_state(from);
            auto goal = to_engine_state(to);
            auto plan = blocks::optimal_plan(initial, goal);
            auto near = blocks::near_optimal_plan(initial, goal);
            const int misplaced = blocks::misplaced_count(initial, goal);
            INFO(blocks::detail::state_key(initial)
                 << " -> " << blocks::detail::state_key(goal));
            CHECK(static_cast<int>(plan.moves.size()) == bfs_distance(from, to));
            CHECK(plan.moves.size() <= near.moves.size());
            CHECK(near.moves.size() <= 2 * static_cast<std::size_t>(misplaced));
            auto plan_check = blocks::verify(initial, goal, plan.moves);
            CHECK(plan_check.status == VerifyStatus::Correct);
            CHECK(plan_check.optimal == std::optional<bool>(true));
            CHECK(blocks::verify(initial, goal, near.moves).status ==
                  VerifyStatus::Correct);
        }
    }
}

TEST_CASE("optimal_plan enforces the block cap") {
    State big;
    State big_goal;
    for (char c = 'A'; c < 'A' + 9; ++c) {
        big.stacks.push_back({std::string(1, c)});
        big_goal.stacks.push_back({std::string(1, c)});
    }
    CHECK_THROWS_AS(blocks::optimal_plan(big, big_goal), TooLarge);

    // verify still works above the cap; optimality is simply unknown.
    auto res = blocks::verify(big, big_goal, std::vector<Move>{});
    CHECK(res.status == VerifyStatus::Correct);
    CHECK_FALSE(res.optimal.has_value());
}

TEST_CASE("verify reports known optimality") {
    auto optimal = blocks::verify(st({{"A"}, {"B"}}), st({{"A", "B"}}),
                                  std::vector<Move>{{"B", "A"}});
    CHECK(optimal.status == VerifyStatus::Correct);
    REQUIRE(optimal.optimal.has_value());
    CHECK(*optimal.optimal);

    const std::vector<Move> detour{{"A", "B"}, {"A", std::nullopt}, {"B", "A"}};
    auto sub = blocks::verify(st({{"A"}, {"B"}}), st({{"A", "B"}}), detour);
    CHECK(sub.status == VerifyStatus::Correct);
    REQUIRE(sub.optimal.has_value());
    CHECK_FALSE(*sub.optimal);

    const std::vector<Move> bad{{"A", std::nullopt}};
    auto invalid = blocks::verify(st({{"A", "B"}}), st({{"B", "A"}}), bad);
    CHECK(invalid.status == VerifyStatus::InvalidMove);
    CHECK(invalid.invalid_index == 0);
    CHECK(invalid.reason == blocks::MoveError::NotTopmost);

    const std::vector<Move> partial{{"B", std::nullopt}};
    auto prefix = blocks::verify(st({{"A", "B"}}), st({{"B", "A"}}), partial);
    CHECK(prefix.status == VerifyStatus::ValidPrefix);
}

TEST_CASE("legal_moves excludes no-ops and grows quadratically") {
    CHECK(blocks::legal_moves(st({{"A"}})).empty());

    auto two = blocks::legal_moves(st({{"A"}, {"B"}}));
    CHECK(two == std::vector<Move>{{"A", "B"}, {"B", "A"}});

    auto three = blocks::legal_moves(st({{"A", "B"}, {"C"}}));
    CHECK(three ==
          std::vector<Move>{{"B", std::nullopt}, {"B", "C"}, {"C", "B"}});

    // k singleton stacks: every top can move onto k-1 others.
    State wide;
    for (char c = 'A'; c < 'A' + 8; ++c) {
        wide.stacks.push_back({std::string(1, c)});
    }
    CHECK(blocks::legal_moves(wide).size() == 8 * 7);
}

TEST_CASE("near_optimal_plan does linear work") {
    // Worst case: one tall tower that must be fully reversed.
    auto build = [](int n, bool reversed) {
        State s;
        std::vector<std::string> stack;
        for (int i = 0; i < n; ++i) {
            stack.push_back("b" + std::to_string(reversed ? n - 1 - i : i));
        }
        s.stacks.push_back(std::move(stack));
        return s;
    };
    std::size_t prev_ops = 0;
    for (int n : {250, 500, 1000, 2000}) {
        blocks::PlanStats stats;
        auto plan = blocks::near_optimal_plan(build(n, false), build(n, true),
                                              &stats);
        CHECK(plan.moves.size() <= 2 * static_cast<std::size_t>(n));
        CHECK(stats.state_ops <= 4 * static_cast<std::size_t>(n) + 16);
        if (prev_ops > 0) {
            // Doubling the instance should roughly double the work.
            CHECK(stats.state_ops <= 3 * prev_ops);
        }
        prev_ops = stats.state_ops;
    }
}
