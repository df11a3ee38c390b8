#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace puzzle_eval {

inline constexpr int kSchemaVersion = 1;

// Rejected instance parameters (n = 0 disks, boat capacity 1, mismatched
// block sets, ...).
struct InvalidInstance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exhaustive search exceeded its configured state budget. Signals "out of
// desk scale", never "unsolvable".
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance is beyond the cap of an exhaustive operation (e.g. optimal
// planning above the block-count cap).
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimal expected-like result carrier. Legality of a move is data, not an
// exception: illegal transcript moves are the common case for the grader.
template <typename T, typename E>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(E error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<T>(v_); }
    T&& value() && { return std::get<T>(std::move(v_)); }
    const E& error() const { return std::get<E>(v_); }

private:
    std::variant<T, E> v_;
};

enum class VerifyStatus { Correct, ValidPrefix, InvalidMove };

}  // namespace puzzle_eval
