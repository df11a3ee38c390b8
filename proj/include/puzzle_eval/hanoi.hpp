#pragma once

// Tower of Hanoi engine: canonical solutions (materialized or streamed one
// move at a time), move-by-move verification, and branching-factor reporting.
//
// Conventions: pegs are 0-indexed (0 = source, 2 = target); disk 1 is the
// smallest. A move is [disk, from_peg, to_peg]. Peg stacks are stored
// bottom-to-top, so back() is the top disk.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <ranges>
#include <vector>

#include "puzzle_eval/common.hpp"

namespace puzzle_eval::hanoi {

struct Move {
    int disk = 0;
    int from_peg = 0;
    int to_peg = 0;

    friend bool operator==(const Move&, const Move&) = default;
    friend auto operator<=>(const Move&, const Move&) = default;
};

struct State {
    std::array<std::vector<int>, 3> pegs;
    int n_disks = 0;

    friend bool operator==(const State&, const State&) = default;
};

// solve() materializes 2^n - 1 moves; the cap keeps that bounded. Streaming
// has no such cost and accepts any n the move cursor can count to.
inline constexpr int kSolveCap = 30;
inline constexpr int kStreamCap = 63;

inline std::uint64_t minimal_moves(int n) {
    return (std::uint64_t{1} << n) - 1;
}

inline State initial_state(int n) {
    if (n < 1) {
        throw InvalidInstance("hanoi: disk count must be >= 1");
    }
    State st;
    st.n_disks = n;
    st.pegs[0].reserve(static_cast<std::size_t>(n));
    for (int disk = n; disk >= 1; --disk) {
        st.pegs[0].push_back(disk);
    }
    return st;
}

inline bool is_goal(const State& st) {
    return static_cast<int>(st.pegs[2].size()) == st.n_disks;
}

enum class MoveError {
    EmptySourcePeg,
    NotTopmost,
    LargerOntoSmaller,
    MalformedMove,
};

inline const char* to_string(MoveError e) {
    switch (e) {
        case MoveError::EmptySourcePeg: return "empty_source_peg";
        case MoveError::NotTopmost: return "not_topmost";
        case MoveError::LargerOntoSmaller: return "larger_onto_smaller";
        case MoveError::MalformedMove: return "malformed_move";
    }
    return "unknown";
}

// Illegality is reported, never assumed away: transcripts routinely contain
// illegal moves and the grader needs the reason.
inline Result<State, MoveError> apply_move(const State& st, const Move& mv) {
    if (mv.from_peg < 0 || mv.from_peg > 2 || mv.to_peg < 0 || mv.to_peg > 2 ||
        mv.from_peg == mv.to_peg || mv.disk < 1 || mv.disk > st.n_disks) {
        return MoveError::MalformedMove;
    }
    const auto& from = st.pegs[static_cast<std::size_t>(mv.from_peg)];
    const auto& to = st.pegs[static_cast<std::size_t>(mv.to_peg)];
    if (from.empty()) {
        return MoveError::EmptySourcePeg;
    }
    if (from.back() != mv.disk) {
        return MoveError::NotTopmost;
    }
    if (!to.empty() && to.back() < mv.disk) {
        return MoveError::LargerOntoSmaller;
    }
    State next = st;
    next.pegs[static_cast<std::size_t>(mv.from_peg)].pop_back();
    next.pegs[static_cast<std::size_t>(mv.to_peg)].push_back(mv.disk);
    return next;
}

// The k-th move (1-based) of the canonical n-disk solution, in O(1): the
// moved disk is ctz(k)+1, and each disk cycles over the pegs in a fixed
// direction determined by the parity of n minus the disk id.
inline Move canonical_move(std::uint64_t k, int n) {
    const int disk = std::countr_zero(k) + 1;
    const std::uint64_t times_moved = (k >> disk) + 1;
    const std::uint64_t step = ((n - disk) % 2 == 0) ? 2 : 1;
    return Move{
        disk,
        static_cast<int>(((times_moved - 1) * step) % 3),
        static_cast<int>((times_moved * step) % 3),
    };
}

// Move producer for the canonical solution. Owns a private cursor; single
// consumer. Working memory is O(1) regardless of the 2^n - 1 sequence length.
class MoveStream {
public:
    explicit MoveStream(int n) : n_(n) {
        if (n < 1 || n > kStreamCap) {
            throw InvalidInstance("hanoi: stream supports 1 <= n <= 63");
        }
        total_ = minimal_moves(n);
    }

    std::optional<Move> next() {
        if (k_ > total_) {
            return std::nullopt;
        }
        return canonical_move(k_++, n_);
    }

    std::uint64_t total() const { return total_; }
    std::uint64_t produced() const { return k_ - 1; }

    struct sentinel {};

    class iterator {
    public:
        using value_type = Move;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(MoveStream& s) : stream_(&s), current_(s.next()) {}

        const Move& operator*() const { return *current_; }
        iterator& operator++() {
            current_ = stream_->next();
            return *this;
        }
        void operator++(int) { ++*this; }
        bool operator==(sentinel) const { return !current_.has_value(); }

    private:
        MoveStream* stream_ = nullptr;
        std::optional<Move> current_;
    };

    iterator begin() { return iterator(*this); }
    sentinel end() const { return {}; }

private:
    int n_;
    std::uint64_t k_ = 1;
    std::uint64_t total_;
};

namespace detail {
inline void emit_solution(int count, int from, int to, int via,
                          std::vector<Move>& out) {
    if (count == 0) {
        return;
    }
    emit_solution(count - 1, from, via, to, out);
    out.push_back(Move{count, from, to});
    emit_solution(count - 1, via, to, from, out);
}
}  // namespace detail

// Canonical optimal sequence of exactly 2^n - 1 moves, peg 0 to peg 2.
// Recursive construction; MoveStream derives the same sequence from the
// closed form, so the two act as cross-checks on each other.
inline std::vector<Move> solve(int n) {
    if (n < 1) {
        throw InvalidInstance("hanoi: disk count must be >= 1");
    }
    if (n > kSolveCap) {
        throw TooLarge("hanoi: solve materializes 2^n - 1 moves; capped at n = 30, use MoveStream");
    }
    std::vector<Move> out;
    out.reserve(static_cast<std::size_t>(minimal_moves(n)));
    detail::emit_solution(n, 0, 2, 1, out);
    return out;
}

struct VerifyResult {
    VerifyStatus status = VerifyStatus::ValidPrefix;
    std::size_t moves_applied = 0;
    State final_state;
    // InvalidMove only:
    std::size_t invalid_index = 0;
    MoveError reason = MoveError::MalformedMove;
    // Correct only: length equals 2^n - 1.
    bool optimal = false;
};

// Streams over the moves with O(n) working memory. Accepts non-optimal but
// goal-reaching sequences as Correct and reports optimality separately.
template <std::ranges::input_range Moves>
VerifyResult verify(int n, Moves&& moves) {
    VerifyResult res;
    State st = initial_state(n);
    std::size_t idx = 0;
    for (auto&& mv : moves) {
        auto applied = apply_move(st, mv);
        if (!applied.ok()) {
            res.status = VerifyStatus::InvalidMove;
            res.moves_applied = idx;
            res.invalid_index = idx;
            res.reason = applied.error();
            res.final_state = std::move(st);
            return res;
        }
        st = std::move(applied).value();
        ++idx;
    }
    res.moves_applied = idx;
    if (is_goal(st)) {
        res.status = VerifyStatus::Correct;
        res.optimal = (idx == minimal_moves(n));
    } else {
        res.status = VerifyStatus::ValidPrefix;
    }
    res.final_state = std::move(st);
    return res;
}

// All legal moves from a state, sorted by (disk, from, to). At most 3 for
// any Hanoi state; Table 1's branching-factor contrast with Blocks World.
inline std::vector<Move> legal_moves(const State& st) {
    std::vector<Move> out;
    for (int from = 0; from < 3; ++from) {
        const auto& src = st.pegs[static_cast<std::size_t>(from)];
        if (src.empty()) {
            continue;
        }
        const int disk = src.back();
        for (int to = 0; to < 3; ++to) {
            if (to == from) {
                continue;
            }
            const auto& dst = st.pegs[static_cast<std::size_t>(to)];
            if (dst.empty() || dst.back() > disk) {
                out.push_back(Move{disk, from, to});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace puzzle_eval::hanoi
