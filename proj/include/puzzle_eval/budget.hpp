#pragma once

// Output-token accounting for exhaustive move enumeration: per-token success
// probability, token cost of an n-disk solution under linear or quadratic
// growth, and the largest instance that fits a given output limit.
//
// Everything is evaluated by exact integer arithmetic (128-bit for the move
// counts) rather than the usual log2 closed forms; the closed forms are only
// approximations and blur the answer exactly at the decision boundary.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "puzzle_eval/common.hpp"

namespace puzzle_eval::budget {

using TokenCount = unsigned __int128;

inline constexpr int kMaxN = 63;

inline std::string to_string(TokenCount v) {
    if (v == 0) {
        return "0";
    }
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return std::string(out.rbegin(), out.rend());
}

// Final move list only: cost grows linearly in the move count. Quadratic:
// the complete list restated at every step, i.e. sum of 1..M moves.
enum class GrowthMode { Linear, Quadratic };

struct TokenModel {
    double tokens_per_move = 10.0;
    double overhead_c = 0.0;
    std::uint64_t l_max = 100000;

    TokenModel() = default;
    TokenModel(double per_move, double overhead, std::uint64_t limit)
        : tokens_per_move(per_move), overhead_c(overhead), l_max(limit) {
        if (!(tokens_per_move > 0.0)) {
            throw InvalidInstance("budget: tokens_per_move must be > 0");
        }
        if (overhead_c < 0.0) {
            throw InvalidInstance("budget: overhead must be >= 0");
        }
        if (l_max < 1) {
            throw InvalidInstance("budget: l_max must be >= 1");
        }
    }
};

// P(all of t tokens correct) = p^t.
inline double success_probability(double p, std::uint64_t t) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("budget: per-token accuracy must lie in [0, 1]");
    }
    return std::pow(p, static_cast<double>(t));
}

namespace detail {

inline TokenCount checked_mul(TokenCount a, TokenCount b) {
    if (a != 0 && b > std::numeric_limits<TokenCount>::max() / a) {
        throw std::overflow_error("budget: token count overflow");
    }
    return a * b;
}

inline TokenCount checked_add(TokenCount a, TokenCount b) {
    if (b > std::numeric_limits<TokenCount>::max() - a) {
        throw std::overflow_error("budget: token count overflow");
    }
    return a + b;
}

inline bool is_integral(double x) {
    return x >= 0.0 && x <= 1e18 && x == std::floor(x);
}

}  // namespace detail

inline TokenCount moves_for(int n) {
    if (n < 1 || n > kMaxN) {
        throw InvalidInstance("budget: need 1 <= n <= 63");
    }
    return (TokenCount{1} << n) - 1;
}

// Tokens needed for an n-disk solution. Linear: per_move * (2^n - 1) + C.
// Quadratic: per_move * M(M+1)/2 with M = 2^n - 1 (the exact sum, not its
// half-square approximation). Integral parameters are computed exactly;
// fractional ones round the total up to whole tokens.
inline TokenCount tokens_required(int n, GrowthMode mode,
                                  const TokenModel& model) {
    const TokenCount m = moves_for(n);
    const TokenCount units =
        mode == GrowthMode::Linear
            ? m
            : detail::checked_mul(m, m + 1) / 2;
    if (detail::is_integral(model.tokens_per_move) &&
        detail::is_integral(model.overhead_c)) {
        const auto per = static_cast<TokenCount>(model.tokens_per_move);
        const auto overhead = static_cast<TokenCount>(model.overhead_c);
        return detail::checked_add(detail::checked_mul(per, units), overhead);
    }
    const long double total =
        static_cast<long double>(model.tokens_per_move) *
            static_cast<long double>(units) +
        static_cast<long double>(model.overhead_c);
    if (total > 3e38L) {
        throw std::overflow_error("budget: token count overflow");
    }
    return static_cast<TokenCount>(std::ceil(total));
}

// Largest n whose solution fits within l_max, by exact search over the
// strictly increasing cost function. 0 when even one disk does not fit;
// capped at 63, which only an l_max near 2^64 with sub-10 per-move cost can
// reach.
inline int max_solvable_n(const TokenModel& model, GrowthMode mode) {
    int best = 0;
    for (int n = 1; n <= kMaxN; ++n) {
        TokenCount need;
        try {
            need = tokens_required(n, mode, model);
        } catch (const std::overflow_error&) {
            break;
        }
        if (need > TokenCount{model.l_max}) {
            break;
        }
        best = n;
    }
    return best;
}

// How far short of the budget-implied limit a reported give-up point sits.
// Positive: output stopped before the budget forced it to.
inline int collapse_gap(int reported_collapse_n, const TokenModel& model,
                        GrowthMode mode) {
    if (reported_collapse_n < 1) {
        throw InvalidInstance("budget: reported collapse size must be >= 1");
    }
    return max_solvable_n(model, mode) - reported_collapse_n;
}

}  // namespace puzzle_eval::budget
