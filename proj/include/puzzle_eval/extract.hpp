#pragma once

// Free-text extraction: pull the answer move list out of a model transcript
// and spot truncation/impossibility language.
//
// Extraction is last-list-wins: transcripts often restate or repair lists,
// so the final literal with at least one move is taken as the answer. A list
// that ends in an ellipsis or runs off the end of the text still contributes
// its complete prefix, flagged as truncated. The strict wire formats are
// accepted plus common variants (single quotes, bare labels, trailing
// commas).

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "puzzle_eval/blocks.hpp"
#include "puzzle_eval/common.hpp"
#include "puzzle_eval/hanoi.hpp"
#include "puzzle_eval/river.hpp"
#include "puzzle_eval/wire.hpp"

namespace puzzle_eval::grader {

// Phrase sets are contested, so they ship in a config file reviewers can
// edit and re-grade with; these built-ins mirror config/patterns.json.
struct PatternConfig {
    std::vector<std::string> truncation_phrases;
    std::vector<std::string> impossibility_phrases;
    // An impossibility phrase only counts as a claim near the end of the
    // text (past this fraction) or inside the concluding sentence.
    double impossibility_tail_fraction = 0.3;
    // Normalize transcripts that number pegs 1..3 instead of 0..2.
    bool hanoi_pegs_one_indexed = false;

    static PatternConfig defaults() {
        PatternConfig cfg;
        cfg.truncation_phrases = {"stop here", "pattern continues", "too long"};
        cfg.impossibility_phrases = {"no solution", "unsolvable", "impossible",
                                     "cannot be solved"};
        return cfg;
    }

    static PatternConfig from_json(const nlohmann::json& j) {
        PatternConfig cfg = defaults();
        if (j.contains("truncation_phrases")) {
            cfg.truncation_phrases =
                j.at("truncation_phrases").get<std::vector<std::string>>();
        }
        if (j.contains("impossibility_phrases")) {
            cfg.impossibility_phrases =
                j.at("impossibility_phrases").get<std::vector<std::string>>();
        }
        if (j.contains("impossibility_tail_fraction")) {
            cfg.impossibility_tail_fraction =
                j.at("impossibility_tail_fraction").get<double>();
            if (cfg.impossibility_tail_fraction < 0.0 ||
                cfg.impossibility_tail_fraction > 1.0) {
                throw InvalidInstance("patterns: tail fraction must lie in [0, 1]");
            }
        }
        if (j.contains("hanoi_pegs_one_indexed")) {
            cfg.hanoi_pegs_one_indexed =
                j.at("hanoi_pegs_one_indexed").get<bool>();
        }
        return cfg;
    }
};

namespace detail {

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

inline bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

// Character-level cursor over the transcript text.
class Scanner {
public:
    explicit Scanner(std::string_view text, std::size_t pos = 0)
        : s_(text), pos_(pos) {}

    std::size_t pos() const { return pos_; }
    void seek(std::size_t p) { pos_ = p; }
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }

    void skip_ws() {
        while (!eof() && is_ws(s_[pos_])) {
            ++pos_;
        }
    }

    bool consume(char c) {
        if (!eof() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // "..." (or longer) and the one-character ellipsis mark a list the
    // writer chose not to finish.
    bool consume_ellipsis() {
        if (!eof() && (s_.substr(pos_, 3) == "\xe2\x80\xa6")) {  // U+2026
            pos_ += 3;
            return true;
        }
        if (s_.substr(pos_, 3) == "...") {
            while (!eof() && s_[pos_] == '.') {
                ++pos_;
            }
            return true;
        }
        return false;
    }

    std::optional<long long> consume_int() {
        std::size_t p = pos_;
        bool neg = false;
        if (p < s_.size() && (s_[p] == '-' || s_[p] == '+')) {
            neg = (s_[p] == '-');
            ++p;
        }
        if (p >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p]))) {
            return std::nullopt;
        }
        long long value = 0;
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
            value = value * 10 + (s_[p] - '0');
            if (value > 1000000) {
                value = 1000000;  // clamp; anything this large is malformed anyway
            }
            ++p;
        }
        pos_ = p;
        return neg ? -value : value;
    }

    // Quoted string ('"' or '\'') or a bare identifier-like token.
    std::optional<std::string> consume_token() {
        if (eof()) {
            return std::nullopt;
        }
        const char q = s_[pos_];
        if (q == '"' || q == '\'') {
            std::size_t p = pos_ + 1;
            std::string out;
            while (p < s_.size() && s_[p] != q) {
                out.push_back(s_[p]);
                ++p;
            }
            if (p >= s_.size()) {
                return std::nullopt;  // unbalanced quote
            }
            pos_ = p + 1;
            return out;
        }
        if (std::isalnum(static_cast<unsigned char>(q)) || q == '_') {
            std::size_t p = pos_;
            std::string out;
            while (p < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[p])) ||
                    s_[p] == '_')) {
                out.push_back(s_[p]);
                ++p;
            }
            pos_ = p;
            return out;
        }
        return std::nullopt;
    }

private:
    std::string_view s_;
    std::size_t pos_;
};

enum class StopReason { Completed, Eof, Ellipsis, Junk };

template <typename MoveT>
struct Candidate {
    std::vector<MoveT> moves;
    StopReason stop = StopReason::Junk;
    std::size_t end = 0;  // first position not consumed

    bool complete() const { return stop == StopReason::Completed; }
    bool unterminated() const {
        return stop == StopReason::Eof || stop == StopReason::Ellipsis;
    }
};

// Parses one move-list literal starting at '['. ItemParser attempts a single
// move and returns nullopt without committing on failure.
template <typename MoveT, typename ItemParser>
Candidate<MoveT> parse_list(std::string_view text, std::size_t start,
                            ItemParser&& parse_item) {
    Candidate<MoveT> cand;
    Scanner sc(text, start);
    sc.consume('[');
    while (true) {
        sc.skip_ws();
        if (sc.consume(']')) {
            cand.stop = StopReason::Completed;
            break;
        }
        if (sc.consume_ellipsis()) {
            cand.stop = StopReason::Ellipsis;
            break;
        }
        if (sc.eof()) {
            cand.stop = StopReason::Eof;
            break;
        }
        auto item = parse_item(sc);
        if (!item) {
            cand.stop = sc.eof() ? StopReason::Eof : StopReason::Junk;
            break;
        }
        cand.moves.push_back(std::move(*item));
        sc.skip_ws();
        if (sc.consume(',')) {
            continue;
        }
        if (sc.consume(']')) {
            cand.stop = StopReason::Completed;
            break;
        }
        if (sc.consume_ellipsis()) {
            cand.stop = StopReason::Ellipsis;
            break;
        }
        cand.stop = sc.eof() ? StopReason::Eof : StopReason::Junk;
        break;
    }
    cand.end = sc.pos();
    return cand;
}

// A list-of-moves literal opens with '[' followed (after whitespace) by
// another '[' or an immediate ']'; a lone bracketed aside in prose does not.
inline std::optional<std::size_t> find_list_start(std::string_view text,
                                                  std::size_t from) {
    for (std::size_t i = from; i < text.size(); ++i) {
        if (text[i] != '[') {
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && is_ws(text[j])) {
            ++j;
        }
        if (j < text.size() && (text[j] == '[' || text[j] == ']')) {
            return i;
        }
    }
    return std::nullopt;
}

template <typename MoveT, typename ItemParser>
std::pair<std::vector<MoveT>, bool> scan_for_moves(std::string_view text,
                                                   ItemParser&& parse_item) {
    std::vector<MoveT> best;
    bool final_unterminated = false;
    std::size_t pos = 0;
    while (auto start = find_list_start(text, pos)) {
        auto cand = parse_list<MoveT>(text, *start, parse_item);
        const bool had_moves = !cand.moves.empty();
        if (had_moves || cand.complete()) {
            final_unterminated = cand.unterminated();
        }
        if (had_moves) {
            best = std::move(cand.moves);
        }
        pos = std::max(cand.end, *start + 1);
    }
    return {std::move(best), final_unterminated};
}

}  // namespace detail

inline bool contains_truncation_phrase(std::string_view text,
                                       const PatternConfig& cfg) {
    const std::string lower = detail::lowercase(text);
    for (const auto& phrase : cfg.truncation_phrases) {
        if (lower.find(detail::lowercase(phrase)) != std::string::npos) {
            return true;
        }
    }
    return false;
}

template <typename MoveT>
struct Extraction {
    std::vector<MoveT> moves;
    bool truncation_detected = false;
};

inline Extraction<hanoi::Move> extract_hanoi_moves(std::string_view text,
                                                   const PatternConfig& cfg) {
    const int peg_shift = cfg.hanoi_pegs_one_indexed ? 1 : 0;
    auto item = [&](detail::Scanner& sc) -> std::optional<hanoi::Move> {
        if (!sc.consume('[')) {
            return std::nullopt;
        }
        int vals[3];
        for (int i = 0; i < 3; ++i) {
            sc.skip_ws();
            if (i > 0 && !sc.consume(',')) {
                return std::nullopt;
            }
            sc.skip_ws();
            auto v = sc.consume_int();
            if (!v) {
                return std::nullopt;
            }
            vals[i] = static_cast<int>(*v);
        }
        sc.skip_ws();
        if (!sc.consume(']')) {
            return std::nullopt;
        }
        return hanoi::Move{vals[0], vals[1] - peg_shift, vals[2] - peg_shift};
    };
    auto [moves, unterminated] = detail::scan_for_moves<hanoi::Move>(text, item);
    return {std::move(moves),
            unterminated || contains_truncation_phrase(text, cfg)};
}

inline Extraction<river::Move> extract_river_moves(std::string_view text,
                                                   const PatternConfig& cfg) {
    auto item = [](detail::Scanner& sc) -> std::optional<river::Move> {
        if (!sc.consume('[')) {
            return std::nullopt;
        }
        river::Move mv;
        bool first = true;
        while (true) {
            sc.skip_ws();
            if (sc.consume(']')) {
                break;
            }
            if (!first && !sc.consume(',')) {
                return std::nullopt;
            }
            sc.skip_ws();
            auto token = sc.consume_token();
            if (!token) {
                return std::nullopt;
            }
            auto ind = wire::parse_individual(*token);
            if (!ind || ind->index > 32) {
                return std::nullopt;
            }
            const std::uint32_t bit = std::uint32_t{1} << (ind->index - 1);
            (ind->role == river::Role::Actor ? mv.actors : mv.agents) |= bit;
            first = false;
        }
        return mv;
    };
    auto [moves, unterminated] = detail::scan_for_moves<river::Move>(text, item);
    return {std::move(moves),
            unterminated || contains_truncation_phrase(text, cfg)};
}

inline Extraction<blocks::Move> extract_blocks_moves(std::string_view text,
                                                     const PatternConfig& cfg) {
    auto item = [](detail::Scanner& sc) -> std::optional<blocks::Move> {
        if (!sc.consume('[')) {
            return std::nullopt;
        }
        sc.skip_ws();
        auto block = sc.consume_token();
        if (!block || block->empty()) {
            return std::nullopt;
        }
        sc.skip_ws();
        if (!sc.consume(',')) {
            return std::nullopt;
        }
        sc.skip_ws();
        auto dest = sc.consume_token();
        if (!dest || dest->empty()) {
            return std::nullopt;
        }
        sc.skip_ws();
        if (!sc.consume(']')) {
            return std::nullopt;
        }
        if (wire::is_table_keyword(*dest)) {
            return blocks::Move{std::move(*block), std::nullopt};
        }
        return blocks::Move{std::move(*block), std::move(*dest)};
    };
    auto [moves, unterminated] = detail::scan_for_moves<blocks::Move>(text, item);
    return {std::move(moves),
            unterminated || contains_truncation_phrase(text, cfg)};
}

// True when an impossibility phrase appears as a conclusion: in the final
// tail of the text, or in a sentence that nothing but whitespace follows.
// Early mentions ("some think it impossible, but...") do not count.
inline bool detect_impossibility_claim(std::string_view text,
                                       const PatternConfig& cfg) {
    if (text.empty()) {
        return false;
    }
    const std::string lower = detail::lowercase(text);
    std::size_t last_start = std::string::npos;
    std::size_t last_end = 0;
    for (const auto& phrase : cfg.impossibility_phrases) {
        const std::string p = detail::lowercase(phrase);
        if (p.empty()) {
            continue;
        }
        const std::size_t hit = lower.rfind(p);
        if (hit != std::string::npos &&
            (last_start == std::string::npos || hit > last_start)) {
            last_start = hit;
            last_end = hit + p.size();
        }
    }
    if (last_start == std::string::npos) {
        return false;
    }

    std::size_t trimmed = text.size();
    while (trimmed > 0 && detail::is_ws(text[trimmed - 1])) {
        --trimmed;
    }
    const double cutoff =
        (1.0 - cfg.impossibility_tail_fraction) * static_cast<double>(trimmed);
    if (static_cast<double>(last_start) >= cutoff) {
        return true;
    }

    // Concluding sentence: no sentence boundary between the phrase and the
    // (trimmed) end of the text, or only whitespace after that boundary.
    static constexpr std::string_view kBoundaries = ".!?:;\n";
    std::size_t b = last_end;
    while (b < trimmed && kBoundaries.find(text[b]) == std::string_view::npos) {
        ++b;
    }
    for (std::size_t i = b; i < trimmed; ++i) {
        if (!detail::is_ws(text[i]) &&
            kBoundaries.find(text[i]) == std::string_view::npos) {
            return false;
        }
    }
    return true;
}

}  // namespace puzzle_eval::grader
