#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "puzzle_eval/budget.hpp"

using namespace puzzle_eval;
using budget::GrowthMode;
using budget::TokenCount;
using budget::TokenModel;

TEST_CASE("success_probability") {
    CHECK(budget::success_probability(1.0, 10000) == 1.0);

    const double p1 = budget::success_probability(0.9999, 10000);
    CHECK(p1 > 0.36);
    CHECK(p1 < 0.37);

    const double p2 = budget::success_probability(0.999, 10000);
    CHECK(p2 < 5e-5);
    CHECK(p2 > 0.0);

    CHECK_THROWS_AS(budget::success_probability(1.5, 10), std::domain_error);
    CHECK_THROWS_AS(budget::success_probability(-0.1, 10), std::domain_error);
}

TEST_CASE("success_probability is monotone and multiplicative") {
    CHECK(budget::success_probability(0.99, 100) >
          budget::success_probability(0.99, 101));
    CHECK(budget::success_probability(0.98, 100) <
          budget::success_probability(0.99, 100));
    const double combined = budget::success_probability(0.997, 700);
    const double split = budget::success_probability(0.997, 400) *
                         budget::success_probability(0.997, 300);
    CHECK(combined == Catch::Approx(split).epsilon(1e-12));
}

TEST_CASE("tokens_required exact values") {
    TokenModel model(10.0, 0.0, 100000);
    CHECK(budget::tokens_required(1, GrowthMode::Linear, model) == TokenCount{10});
    CHECK(budget::tokens_required(13, GrowthMode::Linear, model) ==
          TokenCount{81910});
    CHECK(budget::tokens_required(7, GrowthMode::Quadratic, model) ==
          TokenCount{81280});

    TokenModel with_overhead(10.0, 500.0, 100000);
    CHECK(budget::tokens_required(1, GrowthMode::Linear, with_overhead) ==
          TokenCount{510});

    CHECK_THROWS_AS(budget::tokens_required(0, GrowthMode::Linear, model),
                    InvalidInstance);
    CHECK_THROWS_AS(budget::tokens_required(64, GrowthMode::Linear, model),
                    InvalidInstance);

    // Wide-integer range: n = 40 quadratic is ~6e24 and must not wrap.
    const TokenCount huge = budget::tokens_required(40, GrowthMode::Quadratic, model);
    CHECK(budget::to_string(huge) == "6044629098067648315392000");
}

TEST_CASE("tokens_required growth properties") {
    TokenModel model(10.0, 0.0, 100000);
    for (int n = 1; n < 40; ++n) {
        CHECK(budget::tokens_required(n, GrowthMode::Linear, model) <
              budget::tokens_required(n + 1, GrowthMode::Linear, model));
        CHECK(budget::tokens_required(n, GrowthMode::Quadratic, model) <
              budget::tokens_required(n + 1, GrowthMode::Quadratic, model));
        CHECK(budget::tokens_required(n, GrowthMode::Quadratic, model) >=
              budget::tokens_required(n, GrowthMode::Linear, model));
    }
}

TEST_CASE("quadratic exact sum stays near its half-square estimate") {
    TokenModel model(10.0, 0.0, 100000);
    for (int n = 1; n <= 30; ++n) {
        const TokenCount exact =
            budget::tokens_required(n, GrowthMode::Quadratic, model);
        const TokenCount estimate =
            5 * ((TokenCount{1} << n) * (TokenCount{1} << n));
        CHECK(exact <= estimate);
        // estimate/exact = 1 + 1/M <= 1 + 2^(1-n)
        const long double ratio = static_cast<long double>(estimate) /
                                  static_cast<long double>(exact);
        CHECK(ratio <= 1.0L + std::pow(2.0L, 1 - n));
    }
}

TEST_CASE("max_solvable_n reproduces the budget table") {
    CHECK(budget::max_solvable_n(TokenModel(10, 0, 100000), GrowthMode::Linear) ==
          13);
    CHECK(budget::max_solvable_n(TokenModel(10, 0, 64000), GrowthMode::Linear) ==
          12);
    CHECK(budget::max_solvable_n(TokenModel(10, 0, 100000),
                                 GrowthMode::Quadratic) == 7);
    CHECK(budget::max_solvable_n(TokenModel(10, 0, 64000),
                                 GrowthMode::Quadratic) == 6);
    // Below the cost of a single move.
    CHECK(budget::max_solvable_n(TokenModel(10, 0, 5), GrowthMode::Linear) == 0);
    // Overhead eats into the budget.
    CHECK(budget::max_solvable_n(TokenModel(10, 60000, 100000),
                                 GrowthMode::Linear) == 11);
}

TEST_CASE("max_solvable_n is the exact boundary") {
    for (auto mode : {GrowthMode::Linear, GrowthMode::Quadratic}) {
        for (std::uint64_t l_max :
             {std::uint64_t{100}, std::uint64_t{64000}, std::uint64_t{100000},
              std::uint64_t{123456789}}) {
            TokenModel model(10, 0, l_max);
            const int n_max = budget::max_solvable_n(model, mode);
            if (n_max > 0) {
                CHECK(budget::tokens_required(n_max, mode, model) <=
                      TokenCount{l_max});
            }
            CHECK(budget::tokens_required(n_max + 1, mode, model) >
                  TokenCount{l_max});
        }
    }
}

TEST_CASE("fractional per-move costs round up") {
    TokenModel model(2.5, 0.0, 100);
    // 2.5 * 7 = 17.5 -> 18
    CHECK(budget::tokens_required(3, GrowthMode::Linear, model) == TokenCount{18});
}

TEST_CASE("collapse_gap") {
    TokenModel model(10, 0, 100000);
    CHECK(budget::collapse_gap(9, model, GrowthMode::Linear) == 4);
    CHECK(budget::collapse_gap(13, model, GrowthMode::Linear) == 0);
    CHECK(budget::collapse_gap(9, model, GrowthMode::Quadratic) == -2);
    CHECK_THROWS_AS(budget::collapse_gap(0, model, GrowthMode::Linear),
                    InvalidInstance);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(TokenModel(0.0, 0.0, 1000), InvalidInstance);
    CHECK_THROWS_AS(TokenModel(10.0, -1.0, 1000), InvalidInstance);
    CHECK_THROWS_AS(TokenModel(10.0, 0.0, 0), InvalidInstance);
}
