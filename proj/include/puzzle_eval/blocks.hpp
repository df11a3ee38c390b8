#pragma once

// Blocks World at both difficulty levels: linear-time near-optimal planning
// (unstack misplaced blocks, rebuild goal stacks bottom-up) and exhaustive
// optimal planning for small instances, plus verification and
// branching-factor reporting.
//
// States are lists of stacks, bottom-to-top; the table offers unlimited
// positions, so stack order carries no meaning and empty stacks are never
// stored. Goals fully specify all stacks. A block is "in position" when it
// and everything below it match a goal stack's prefix.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "puzzle_eval/common.hpp"

namespace puzzle_eval::blocks {

using Block = std::string;

struct Move {
    Block block;
    std::optional<Block> onto;  // nullopt = Table (a fresh stack)

    bool to_table() const { return !onto.has_value(); }

    friend bool operator==(const Move&, const Move&) = default;
    // Table destinations sort before block destinations.
    friend auto operator<=>(const Move&, const Move&) = default;
};

struct State {
    std::vector<std::vector<Block>> stacks;

    friend bool operator==(const State&, const State&) = default;
};

// Stack order is representation, not meaning: canonical form sorts stacks so
// physically identical configurations compare equal.
inline State canonical(State st) {
    std::sort(st.stacks.begin(), st.stacks.end());
    return st;
}

inline bool same_configuration(const State& a, const State& b) {
    return canonical(a) == canonical(b);
}

inline std::vector<Block> sorted_labels(const State& st) {
    std::vector<Block> labels;
    for (const auto& stack : st.stacks) {
        labels.insert(labels.end(), stack.begin(), stack.end());
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

// Duplicate labels or empty stacks are malformed; every block must appear
// exactly once.
inline void validate_state(const State& st) {
    auto labels = sorted_labels(st);
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        throw InvalidInstance("blocks: duplicate block label");
    }
    for (const auto& stack : st.stacks) {
        if (stack.empty()) {
            throw InvalidInstance("blocks: empty stack stored");
        }
        for (const auto& b : stack) {
            if (b.empty()) {
                throw InvalidInstance("blocks: empty block label");
            }
        }
    }
}

inline void require_same_labels(const State& a, const State& b) {
    validate_state(a);
    validate_state(b);
    if (sorted_labels(a) != sorted_labels(b)) {
        throw InvalidInstance("blocks: initial and goal block sets differ");
    }
}

enum class MoveError {
    UnknownBlock,
    NotTopmost,
    DestinationNotTop,
};

inline const char* to_string(MoveError e) {
    switch (e) {
        case MoveError::UnknownBlock: return "unknown_block";
        case MoveError::NotTopmost: return "not_topmost";
        case MoveError::DestinationNotTop: return "destination_not_top";
    }
    return "unknown";
}

namespace detail {

inline int find_stack_of(const State& st, const Block& b) {
    for (std::size_t i = 0; i < st.stacks.size(); ++i) {
        for (const auto& x : st.stacks[i]) {
            if (x == b) {
                return static_cast<int>(i);
            }
        }
    }
    return -1;
}

}  // namespace detail

// Moving a single block from the table back to the table is permitted (it is
// a legal no-op); legal_moves excludes it because it creates no distinct
// successor. Moving a block onto itself reports DestinationNotTop.
inline Result<State, MoveError> apply_move(const State& st, const Move& mv) {
    const int src = detail::find_stack_of(st, mv.block);
    if (src < 0) {
        return MoveError::UnknownBlock;
    }
    if (st.stacks[static_cast<std::size_t>(src)].back() != mv.block) {
        return MoveError::NotTopmost;
    }
    int dst = -1;
    if (!mv.to_table()) {
        if (*mv.onto == mv.block) {
            return MoveError::DestinationNotTop;
        }
        dst = detail::find_stack_of(st, *mv.onto);
        if (dst < 0) {
            return MoveError::UnknownBlock;
        }
        if (st.stacks[static_cast<std::size_t>(dst)].back() != *mv.onto) {
            return MoveError::DestinationNotTop;
        }
    }
    State next = st;
    next.stacks[static_cast<std::size_t>(src)].pop_back();
    if (mv.to_table()) {
        next.stacks.push_back({mv.block});
    } else {
        next.stacks[static_cast<std::size_t>(dst)].push_back(mv.block);
    }
    if (next.stacks[static_cast<std::size_t>(src)].empty()) {
        next.stacks.erase(next.stacks.begin() + src);
    }
    return next;
}

// Every top block may go onto every other stack's top, or to the table when
// that creates a new configuration. Sorted canonically; size is Th(k^2) in
// stack count.
inline std::vector<Move> legal_moves(const State& st) {
    std::vector<Move> out;
    for (std::size_t i = 0; i < st.stacks.size(); ++i) {
        const Block& top = st.stacks[i].back();
        if (st.stacks[i].size() > 1) {
            out.push_back(Move{top, std::nullopt});
        }
        for (std::size_t j = 0; j < st.stacks.size(); ++j) {
            if (j != i) {
                out.push_back(Move{top, st.stacks[j].back()});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

struct GoalIndex {
    // block -> (stack index in goal, depth from bottom)
    std::unordered_map<Block, std::pair<std::size_t, std::size_t>> position;

    explicit GoalIndex(const State& goal) {
        for (std::size_t s = 0; s < goal.stacks.size(); ++s) {
            for (std::size_t d = 0; d < goal.stacks[s].size(); ++d) {
                position.emplace(goal.stacks[s][d], std::make_pair(s, d));
            }
        }
    }
};

// Per stack, the count of bottom blocks already in position. Everything above
// the matched prefix is misplaced, because a block is in position only if its
// whole prefix is.
inline std::vector<std::size_t> placed_prefix(const State& st,
                                              const State& goal,
                                              const GoalIndex& index) {
    std::vector<std::size_t> placed(st.stacks.size(), 0);
    for (std::size_t i = 0; i < st.stacks.size(); ++i) {
        const auto& stack = st.stacks[i];
        const auto it = index.position.find(stack[0]);
        if (it == index.position.end() || it->second.second != 0) {
            continue;
        }
        const auto& goal_stack = goal.stacks[it->second.first];
        std::size_t k = 0;
        while (k < stack.size() && k < goal_stack.size() &&
               stack[k] == goal_stack[k]) {
            ++k;
        }
        placed[i] = k;
    }
    return placed;
}

}  // namespace detail

// Number of blocks not in their final position.
inline int misplaced_count(const State& initial, const State& goal) {
    require_same_labels(initial, goal);
    detail::GoalIndex index(goal);
    const auto placed = detail::placed_prefix(initial, goal, index);
    std::size_t in_position = 0;
    for (std::size_t k : placed) {
        in_position += k;
    }
    std::size_t total = 0;
    for (const auto& stack : initial.stacks) {
        total += stack.size();
    }
    return static_cast<int>(total - in_position);
}

struct PlanResult {
    std::vector<Move> moves;
    bool optimal = false;  // true only when produced by exhaustive search
};

struct PlanStats {
    std::size_t state_ops = 0;  // primitive block touches, for the linearity check
};

// Unstack-then-rebuild: move every misplaced block to the table top-down,
// then build each goal stack bottom-up. Linear in block count; plan length
// is at most 2x misplaced_count.
inline PlanResult near_optimal_plan(const State& initial, const State& goal,
                                    PlanStats* stats = nullptr) {
    require_same_labels(initial, goal);
    detail::GoalIndex index(goal);
    PlanStats local;
    if (stats) {
        *stats = PlanStats{};
    }
    PlanStats& ops = stats ? *stats : local;

    PlanResult plan;
    const auto placed = detail::placed_prefix(initial, goal, index);

    // Phase 1: clear everything above the in-position prefixes, top-down.
    // A stack's bottom block is alone by the time its turn comes, so its
    // table move would be a no-op and is skipped. Afterwards every block is
    // either inside an in-position prefix or alone on the table.
    std::unordered_set<Block> alone_on_table;
    for (std::size_t i = 0; i < initial.stacks.size(); ++i) {
        const auto& stack = initial.stacks[i];
        ops.state_ops += stack.size();
        for (std::size_t d = stack.size(); d > placed[i]; --d) {
            const Block& b = stack[d - 1];
            alone_on_table.insert(b);
            if (d > 1) {
                plan.moves.push_back(Move{b, std::nullopt});
            }
        }
    }

    // Phase 2: rebuild bottom-up. A singleton whose goal is a stack bottom
    // already sits in position; every other singleton gets one constructive
    // move onto the block below it in the goal.
    for (const auto& goal_stack : goal.stacks) {
        for (std::size_t d = 0; d < goal_stack.size(); ++d) {
            ops.state_ops += 1;
            const Block& b = goal_stack[d];
            if (!alone_on_table.count(b) || d == 0) {
                continue;
            }
            plan.moves.push_back(Move{b, goal_stack[d - 1]});
        }
    }
    plan.optimal = false;
    return plan;
}

namespace detail {

inline std::string state_key(const State& st) {
    State c = canonical(st);
    std::string key;
    for (const auto& stack : c.stacks) {
        for (const auto& b : stack) {
            key += b;
            key += ',';
        }
        key += '|';
    }
    return key;
}

}  // namespace detail

inline constexpr int kDefaultOptimalCap = 8;

// Minimal-length plan by exhaustive breadth-first search over canonical
// states, deterministic via the canonical move order. Every Blocks World
// instance is solvable; TooLarge is a desk-scale guard only.
inline PlanResult optimal_plan(const State& initial, const State& goal,
                               int max_blocks = kDefaultOptimalCap) {
    require_same_labels(initial, goal);
    if (static_cast<int>(sorted_labels(initial).size()) > max_blocks) {
        throw TooLarge("blocks: instance exceeds the exhaustive-search cap");
    }

    const std::string goal_key = detail::state_key(goal);
    struct Prev {
        std::string parent;
        Move via;
    };
    std::unordered_map<std::string, Prev> visited;
    std::deque<State> frontier;

    const std::string start_key = detail::state_key(initial);
    visited.emplace(start_key, Prev{});
    frontier.push_back(canonical(initial));

    PlanResult plan;
    plan.optimal = true;
    if (start_key == goal_key) {
        return plan;
    }

    while (!frontier.empty()) {
        const State st = std::move(frontier.front());
        frontier.pop_front();
        const std::string key = detail::state_key(st);
        for (const Move& mv : legal_moves(st)) {
            State next = std::move(apply_move(st, mv)).value();
            std::string next_key = detail::state_key(next);
            if (visited.contains(next_key)) {
                continue;
            }
            visited.emplace(next_key, Prev{key, mv});
            if (next_key == goal_key) {
                std::string cur = next_key;
                while (cur != start_key) {
                    const Prev& p = visited.at(cur);
                    plan.moves.push_back(p.via);
                    cur = p.parent;
                }
                std::reverse(plan.moves.begin(), plan.moves.end());
                return plan;
            }
            frontier.push_back(canonical(next));
        }
    }
    // Unreachable: the state space under these moves is connected.
    throw std::logic_error("blocks: goal not reached by exhaustive search");
}

struct VerifyResult {
    VerifyStatus status = VerifyStatus::ValidPrefix;
    std::size_t moves_applied = 0;
    State final_state;
    std::size_t invalid_index = 0;
    MoveError reason = MoveError::UnknownBlock;
    // Correct only; nullopt = unknown (instance above the exhaustive cap).
    std::optional<bool> optimal;
};

template <typename Moves>
VerifyResult verify(const State& initial, const State& goal, const Moves& moves,
                    int optimality_cap = kDefaultOptimalCap) {
    require_same_labels(initial, goal);
    VerifyResult res;
    State st = initial;
    std::size_t idx = 0;
    for (const Move& mv : moves) {
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
    res.final_state = st;
    if (!same_configuration(st, goal)) {
        res.status = VerifyStatus::ValidPrefix;
        return res;
    }
    res.status = VerifyStatus::Correct;
    if (static_cast<int>(sorted_labels(initial).size()) <= optimality_cap) {
        res.optimal = (idx == optimal_plan(initial, goal, optimality_cap).moves.size());
    }
    return res;
}

}  // namespace puzzle_eval::blocks
