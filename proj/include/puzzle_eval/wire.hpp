#pragma once

// Strict JSON wire formats shared by the CLI and the grader:
//   hanoi moves   [[disk, from_peg, to_peg], ...]           pegs 0-indexed
//   river moves   [["a1","A1"], ["A1"], ...]                 alternating l->r
//   blocks state  [["A","B"], ["C"]]                         bottom-to-top
//   blocks moves  [["B","table"], ["B","C"], ...]
//
// The grader's free-text extraction is deliberately lenient; this module is
// the strict counterpart used for files the toolkit itself reads and writes.

#include <json.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "puzzle_eval/blocks.hpp"
#include "puzzle_eval/common.hpp"
#include "puzzle_eval/hanoi.hpp"
#include "puzzle_eval/river.hpp"

namespace puzzle_eval::wire {

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

// --- Tower of Hanoi ---------------------------------------------------------

inline json to_json(const std::vector<hanoi::Move>& moves) {
    json out = json::array();
    for (const auto& m : moves) {
        out.push_back(json::array({m.disk, m.from_peg, m.to_peg}));
    }
    return out;
}

inline std::vector<hanoi::Move> hanoi_moves_from_json(const json& j) {
    if (!j.is_array()) {
        throw WireError("hanoi moves: expected an array of [disk, from, to]");
    }
    std::vector<hanoi::Move> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 3 ||
            !item[0].is_number_integer() || !item[1].is_number_integer() ||
            !item[2].is_number_integer()) {
            throw WireError("hanoi moves: each move must be three integers");
        }
        out.push_back(hanoi::Move{item[0].get<int>(), item[1].get<int>(),
                                  item[2].get<int>()});
    }
    return out;
}

// --- River crossing ---------------------------------------------------------

inline std::optional<river::Individual> parse_individual(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'a' && s[0] != 'A')) {
        return std::nullopt;
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return std::nullopt;
        }
    }
    if (s[1] == '0' || s.size() > 3) {  // indices 1..99, no leading zeros
        return std::nullopt;
    }
    const int idx = std::stoi(s.substr(1));
    return river::Individual{s[0] == 'a' ? river::Role::Actor : river::Role::Agent,
                             idx};
}

inline json to_json(const std::vector<river::Move>& moves) {
    json out = json::array();
    for (const auto& m : moves) {
        json crossing = json::array();
        for (const auto& ind : m.travelers()) {
            crossing.push_back(river::label(ind));
        }
        out.push_back(crossing);
    }
    return out;
}

inline std::vector<river::Move> river_moves_from_json(const json& j) {
    if (!j.is_array()) {
        throw WireError("river moves: expected an array of crossings");
    }
    std::vector<river::Move> out;
    out.reserve(j.size());
    for (const auto& crossing : j) {
        if (!crossing.is_array()) {
            throw WireError("river moves: each crossing must be an array of labels");
        }
        river::Move mv;
        for (const auto& item : crossing) {
            if (!item.is_string()) {
                throw WireError("river moves: traveler labels must be strings");
            }
            const auto ind = parse_individual(item.get<std::string>());
            if (!ind) {
                throw WireError("river moves: bad traveler label '" +
                                item.get<std::string>() + "'");
            }
            const std::uint32_t bit = std::uint32_t{1} << (ind->index - 1);
            (ind->role == river::Role::Actor ? mv.actors : mv.agents) |= bit;
        }
        out.push_back(mv);
    }
    return out;
}

// --- Blocks World -----------------------------------------------------------

inline bool is_table_keyword(const std::string& s) {
    if (s.size() != 5) {
        return false;
    }
    static constexpr const char* kTable = "table";
    for (std::size_t i = 0; i < 5; ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != kTable[i]) {
            return false;
        }
    }
    return true;
}

inline json to_json(const blocks::State& st) {
    json out = json::array();
    for (const auto& stack : st.stacks) {
        out.push_back(json(stack));
    }
    return out;
}

inline blocks::State blocks_state_from_json(const json& j) {
    if (!j.is_array()) {
        throw WireError("blocks state: expected an array of stacks");
    }
    blocks::State st;
    for (const auto& stack : j) {
        if (!stack.is_array() || stack.empty()) {
            throw WireError("blocks state: each stack must be a nonempty array");
        }
        std::vector<blocks::Block> blocks_in_stack;
        for (const auto& item : stack) {
            if (!item.is_string() || item.get<std::string>().empty()) {
                throw WireError("blocks state: block labels must be nonempty strings");
            }
            const auto label = item.get<std::string>();
            if (is_table_keyword(label)) {
                throw WireError("blocks state: 'table' is reserved and cannot name a block");
            }
            blocks_in_stack.push_back(label);
        }
        st.stacks.push_back(std::move(blocks_in_stack));
    }
    blocks::validate_state(st);
    return st;
}

inline json to_json(const std::vector<blocks::Move>& moves) {
    json out = json::array();
    for (const auto& m : moves) {
        out.push_back(json::array({m.block, m.to_table() ? "table" : *m.onto}));
    }
    return out;
}

inline std::vector<blocks::Move> blocks_moves_from_json(const json& j) {
    if (!j.is_array()) {
        throw WireError("blocks moves: expected an array of [block, destination]");
    }
    std::vector<blocks::Move> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
            !item[1].is_string()) {
            throw WireError("blocks moves: each move must be [block, destination]");
        }
        const auto block = item[0].get<std::string>();
        const auto dest = item[1].get<std::string>();
        if (block.empty() || dest.empty() || is_table_keyword(block)) {
            throw WireError("blocks moves: bad block label");
        }
        if (is_table_keyword(dest)) {
            out.push_back(blocks::Move{block, std::nullopt});
        } else {
            out.push_back(blocks::Move{block, dest});
        }
    }
    return out;
}

}  // namespace puzzle_eval::wire
