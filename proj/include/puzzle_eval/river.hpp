#pragma once

// Actor/agent river crossing (the jealous-husbands family): N pairs, boat
// capacity b. Solvability is decided by exhaustive breadth-first reachability
// over safe states, returning either a minimal witness or an
// exhausted-state-space certificate.
//
// Individuals are "a1".."aN" (actors) and "A1".."AN" (agents). Actor i may
// not share a bank with a foreign agent unless agent i is also there. Banks
// are checked after each crossing completes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "puzzle_eval/common.hpp"

namespace puzzle_eval::river {

inline constexpr int kMaxPairs = 16;
inline constexpr std::size_t kDefaultStateLimit = std::size_t{1} << 26;

struct Instance {
    int n_pairs = 0;
    int capacity = 0;

    Instance(int pairs, int boat_capacity)
        : n_pairs(pairs), capacity(boat_capacity) {
        if (n_pairs < 1 || n_pairs > kMaxPairs) {
            throw InvalidInstance("river: need 1 <= pairs <= 16");
        }
        if (capacity < 2) {
            // A lone rower can never make progress; b = 1 is degenerate.
            throw InvalidInstance("river: need capacity >= 2");
        }
    }

    std::uint32_t full_mask() const {
        return (std::uint32_t{1} << n_pairs) - 1;
    }
};

enum class Role : std::uint8_t { Actor, Agent };

struct Individual {
    Role role = Role::Actor;
    int index = 0;  // 1-based

    friend bool operator==(const Individual&, const Individual&) = default;
    // Actors sort before agents, then by index.
    friend auto operator<=>(const Individual&, const Individual&) = default;
};

inline std::string label(const Individual& ind) {
    return (ind.role == Role::Actor ? "a" : "A") + std::to_string(ind.index);
}

// Travelers for one crossing; the direction is implied by the boat side.
// Masks give set semantics (bit i-1 = individual i).
struct Move {
    std::uint32_t actors = 0;
    std::uint32_t agents = 0;

    int size() const {
        return std::popcount(actors) + std::popcount(agents);
    }

    std::vector<Individual> travelers() const {
        std::vector<Individual> out;
        for (int i = 1; i <= 32; ++i) {
            if (actors & (std::uint32_t{1} << (i - 1))) {
                out.push_back({Role::Actor, i});
            }
        }
        for (int i = 1; i <= 32; ++i) {
            if (agents & (std::uint32_t{1} << (i - 1))) {
                out.push_back({Role::Agent, i});
            }
        }
        return out;
    }

    friend bool operator==(const Move&, const Move&) = default;
};

enum class BoatSide : std::uint8_t { Left, Right };

struct State {
    std::uint32_t left_actors = 0;
    std::uint32_t left_agents = 0;
    BoatSide boat = BoatSide::Left;

    friend bool operator==(const State&, const State&) = default;
};

inline State initial_state(const Instance& inst) {
    return State{inst.full_mask(), inst.full_mask(), BoatSide::Left};
}

inline bool is_goal(const State& st) {
    return st.left_actors == 0 && st.left_agents == 0 &&
           st.boat == BoatSide::Right;
}

namespace detail {

// A bank {actors A, agents G} is safe iff G is empty or A is a subset of G.
// This is the per-actor rule collapsed: with two or more agents present every
// actor faces a foreign agent, and with exactly one agent j only actor j may
// stay without their own agent.
inline bool bank_safe(std::uint32_t actors, std::uint32_t agents) {
    return agents == 0 || (actors & ~agents) == 0;
}

inline std::uint64_t pack(const State& st, int n) {
    return (static_cast<std::uint64_t>(st.left_actors) << (n + 1)) |
           (static_cast<std::uint64_t>(st.left_agents) << 1) |
           (st.boat == BoatSide::Right ? 1u : 0u);
}

inline State unpack(std::uint64_t key, int n) {
    const std::uint32_t mask = (std::uint32_t{1} << n) - 1;
    State st;
    st.boat = (key & 1) ? BoatSide::Right : BoatSide::Left;
    st.left_agents = static_cast<std::uint32_t>(key >> 1) & mask;
    st.left_actors = static_cast<std::uint32_t>(key >> (n + 1)) & mask;
    return st;
}

}  // namespace detail

inline bool is_safe(const State& st, const Instance& inst) {
    const std::uint32_t full = inst.full_mask();
    return detail::bank_safe(st.left_actors, st.left_agents) &&
           detail::bank_safe(full & ~st.left_actors, full & ~st.left_agents);
}

inline State apply_unchecked(const State& st, const Move& mv,
                             const Instance& inst) {
    State next = st;
    if (st.boat == BoatSide::Left) {
        next.left_actors &= ~mv.actors;
        next.left_agents &= ~mv.agents;
        next.boat = BoatSide::Right;
    } else {
        next.left_actors |= mv.actors;
        next.left_agents |= mv.agents;
        next.boat = BoatSide::Left;
    }
    (void)inst;
    return next;
}

namespace detail {

// Enumerates traveler subsets of the boat-side individuals in canonical
// order: size 1..b ascending, lexicographic over (actors a1..aN, then agents
// A1..AN) within each size. Witnesses are byte-for-byte reproducible because
// expansion order is fixed.
template <typename Fn>
void for_each_crossing(const State& st, const Instance& inst, Fn&& fn) {
    const std::uint32_t full = inst.full_mask();
    const std::uint32_t side_actors =
        st.boat == BoatSide::Left ? st.left_actors : (full & ~st.left_actors);
    const std::uint32_t side_agents =
        st.boat == BoatSide::Left ? st.left_agents : (full & ~st.left_agents);

    std::vector<Individual> pool;
    for (int i = 1; i <= inst.n_pairs; ++i) {
        if (side_actors & (std::uint32_t{1} << (i - 1))) {
            pool.push_back({Role::Actor, i});
        }
    }
    for (int i = 1; i <= inst.n_pairs; ++i) {
        if (side_agents & (std::uint32_t{1} << (i - 1))) {
            pool.push_back({Role::Agent, i});
        }
    }

    const int max_size =
        std::min<int>(inst.capacity, static_cast<int>(pool.size()));
    std::vector<int> pick;
    auto emit = [&] {
        Move mv;
        for (int idx : pick) {
            const Individual& ind = pool[static_cast<std::size_t>(idx)];
            const std::uint32_t bit = std::uint32_t{1} << (ind.index - 1);
            (ind.role == Role::Actor ? mv.actors : mv.agents) |= bit;
        }
        fn(mv);
    };
    // Iterative combination walk per size keeps this allocation-free in the
    // hot loop.
    for (int size = 1; size <= max_size; ++size) {
        pick.assign(static_cast<std::size_t>(size), 0);
        for (int i = 0; i < size; ++i) {
            pick[static_cast<std::size_t>(i)] = i;
        }
        while (true) {
            emit();
            int i = size - 1;
            while (i >= 0 &&
                   pick[static_cast<std::size_t>(i)] ==
                       static_cast<int>(pool.size()) - size + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                pick[static_cast<std::size_t>(j)] =
                    pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
}

}  // namespace detail

// All (move, successor) pairs whose successor is safe, in canonical order.
inline std::vector<std::pair<Move, State>> neighbors(const State& st,
                                                     const Instance& inst) {
    std::vector<std::pair<Move, State>> out;
    detail::for_each_crossing(st, inst, [&](const Move& mv) {
        State next = apply_unchecked(st, mv, inst);
        if (is_safe(next, inst)) {
            out.emplace_back(mv, next);
        }
    });
    return out;
}

inline std::vector<Move> legal_moves(const State& st, const Instance& inst) {
    std::vector<Move> out;
    for (auto& [mv, next] : neighbors(st, inst)) {
        out.push_back(mv);
    }
    return out;
}

// Proof-carrying solvability verdict.
struct Solvability {
    bool solvable = false;
    int min_crossings = 0;          // solvable only
    std::vector<Move> witness;      // solvable only; length == min_crossings
    std::size_t states_explored = 0;  // size of the exhausted reachable set
};

// Breadth-first reachability from all-left to all-right over safe states.
// Level order makes the witness minimal; Unsolvable is only reported once the
// reachable set is exhausted.
inline Solvability solve_bfs(const Instance& inst,
                             std::size_t state_limit = kDefaultStateLimit) {
    const int n = inst.n_pairs;
    struct Prev {
        std::uint64_t parent;
        Move via;
    };
    std::unordered_map<std::uint64_t, Prev> visited;
    std::deque<std::uint64_t> frontier;

    const State start = initial_state(inst);
    const std::uint64_t start_key = detail::pack(start, n);
    visited.emplace(start_key, Prev{start_key, Move{}});
    frontier.push_back(start_key);

    std::uint64_t goal_key = 0;
    bool found = is_goal(start);

    while (!frontier.empty() && !found) {
        const std::uint64_t key = frontier.front();
        frontier.pop_front();
        const State st = detail::unpack(key, n);
        detail::for_each_crossing(st, inst, [&](const Move& mv) {
            if (found) {
                return;
            }
            const State next = apply_unchecked(st, mv, inst);
            if (!is_safe(next, inst)) {
                return;
            }
            const std::uint64_t next_key = detail::pack(next, n);
            if (visited.contains(next_key)) {
                return;
            }
            if (visited.size() >= state_limit) {
                throw ResourceLimit("river: state limit exceeded; instance is out of desk scale");
            }
            visited.emplace(next_key, Prev{key, mv});
            if (is_goal(next)) {
                goal_key = next_key;
                found = true;
                return;
            }
            frontier.push_back(next_key);
        });
    }

    Solvability out;
    out.states_explored = visited.size();
    if (!found) {
        return out;
    }
    out.solvable = true;
    std::uint64_t key = goal_key;
    while (key != start_key) {
        const Prev& prev = visited.at(key);
        out.witness.push_back(prev.via);
        key = prev.parent;
    }
    std::reverse(out.witness.begin(), out.witness.end());
    out.min_crossings = static_cast<int>(out.witness.size());
    return out;
}

enum class MoveError {
    EmptyBoat,
    OverCapacity,
    UnknownTraveler,
    TravelerOnWrongSide,
    UnsafeResult,
};

inline const char* to_string(MoveError e) {
    switch (e) {
        case MoveError::EmptyBoat: return "empty_boat";
        case MoveError::OverCapacity: return "over_capacity";
        case MoveError::UnknownTraveler: return "unknown_traveler";
        case MoveError::TravelerOnWrongSide: return "traveler_on_wrong_side";
        case MoveError::UnsafeResult: return "unsafe_result";
    }
    return "unknown";
}

struct VerifyResult {
    VerifyStatus status = VerifyStatus::ValidPrefix;
    std::size_t moves_applied = 0;
    State final_state;
    std::size_t invalid_index = 0;
    MoveError reason = MoveError::EmptyBoat;
};

template <typename Moves>
VerifyResult verify(const Instance& inst, const Moves& moves) {
    VerifyResult res;
    State st = initial_state(inst);
    const std::uint32_t full = inst.full_mask();
    std::size_t idx = 0;
    for (const Move& mv : moves) {
        auto fail = [&](MoveError why) {
            res.status = VerifyStatus::InvalidMove;
            res.moves_applied = idx;
            res.invalid_index = idx;
            res.reason = why;
            res.final_state = st;
            return res;
        };
        if (mv.size() == 0) {
            return fail(MoveError::EmptyBoat);
        }
        if (mv.size() > inst.capacity) {
            return fail(MoveError::OverCapacity);
        }
        if ((mv.actors & ~full) != 0 || (mv.agents & ~full) != 0) {
            return fail(MoveError::UnknownTraveler);
        }
        const std::uint32_t side_actors =
            st.boat == BoatSide::Left ? st.left_actors : (full & ~st.left_actors);
        const std::uint32_t side_agents =
            st.boat == BoatSide::Left ? st.left_agents : (full & ~st.left_agents);
        if ((mv.actors & ~side_actors) != 0 || (mv.agents & ~side_agents) != 0) {
            return fail(MoveError::TravelerOnWrongSide);
        }
        const State next = apply_unchecked(st, mv, inst);
        if (!is_safe(next, inst)) {
            return fail(MoveError::UnsafeResult);
        }
        st = next;
        ++idx;
    }
    res.moves_applied = idx;
    res.status = is_goal(st) ? VerifyStatus::Correct : VerifyStatus::ValidPrefix;
    res.final_state = st;
    return res;
}

}  // namespace puzzle_eval::river
