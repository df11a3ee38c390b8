#pragma once

// Transcript grading: extract the answer move list from free text, verify it
// with the matching engine, and classify the outcome so that a legal-but-
// unfinished enumeration or a justified impossibility claim is never lumped
// in with genuine reasoning failures.
//
// Decision order (fixed): an impossibility claim with no goal-reaching
// solution wins; then no-moves-found is a parse failure; otherwise the
// verification outcome decides. Valid prefixes grade TruncatedValidPrefix
// whether or not a truncation phrase was seen; the phrase flag records the
// difference.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "puzzle_eval/blocks.hpp"
#include "puzzle_eval/common.hpp"
#include "puzzle_eval/extract.hpp"
#include "puzzle_eval/hanoi.hpp"
#include "puzzle_eval/river.hpp"
#include "puzzle_eval/wire.hpp"

namespace puzzle_eval::grader {

using ojson = nlohmann::ordered_json;

enum class PuzzleKind { Hanoi, River, Blocks };

inline const char* to_string(PuzzleKind k) {
    switch (k) {
        case PuzzleKind::Hanoi: return "hanoi";
        case PuzzleKind::River: return "river";
        case PuzzleKind::Blocks: return "blocks";
    }
    return "unknown";
}

struct HanoiParams {
    int n_disks = 0;
};

struct RiverParams {
    int n_pairs = 0;
    int capacity = 0;
};

struct BlocksParams {
    blocks::State initial;
    blocks::State goal;
};

struct Transcript {
    std::string id;
    std::variant<HanoiParams, RiverParams, BlocksParams> params;
    std::string text;

    PuzzleKind kind() const { return static_cast<PuzzleKind>(params.index()); }
};

enum class Classification {
    Correct,
    CorrectSuboptimal,
    InvalidMove,
    TruncatedValidPrefix,
    ClaimedImpossible,
    ParseFailure,
};

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Correct: return "correct";
        case Classification::CorrectSuboptimal: return "correct_suboptimal";
        case Classification::InvalidMove: return "invalid_move";
        case Classification::TruncatedValidPrefix: return "truncated_valid_prefix";
        case Classification::ClaimedImpossible: return "claimed_impossible";
        case Classification::ParseFailure: return "parse_failure";
    }
    return "unknown";
}

struct GradeReport {
    std::string id;
    PuzzleKind puzzle = PuzzleKind::Hanoi;
    Classification classification = Classification::ParseFailure;
    std::size_t moves_found = 0;
    bool truncation_phrase_detected = false;
    std::optional<bool> optimal;  // nullopt = unknown / not applicable
    // Classification-specific detail:
    std::optional<std::size_t> invalid_index;
    std::string invalid_reason;
    std::optional<std::size_t> prefix_length;
    std::optional<bool> impossibility_justified;
};

struct GraderOptions {
    PatternConfig patterns = PatternConfig::defaults();
    int blocks_optimality_cap = blocks::kDefaultOptimalCap;
    std::size_t river_state_limit = river::kDefaultStateLimit;
};

namespace detail {

// Verification outcome in engine-neutral form.
struct Verdict {
    VerifyStatus status = VerifyStatus::ValidPrefix;
    std::size_t invalid_index = 0;
    std::string invalid_reason;
    std::optional<bool> optimal;  // Correct only
};

inline void validate(const HanoiParams& p) {
    if (p.n_disks < 1 || p.n_disks > hanoi::kStreamCap) {
        throw InvalidInstance("grade: hanoi params need 1 <= n <= 63");
    }
}

inline void validate(const RiverParams& p) {
    river::Instance probe(p.n_pairs, p.capacity);  // throws on bad params
    (void)probe;
}

inline void validate(const BlocksParams& p) {
    blocks::require_same_labels(p.initial, p.goal);
}

}  // namespace detail

inline GradeReport grade(const Transcript& t, const GraderOptions& opt = {}) {
    GradeReport rep;
    rep.id = t.id;
    rep.puzzle = t.kind();

    const bool impossibility = detect_impossibility_claim(t.text, opt.patterns);

    detail::Verdict verdict;
    bool have_moves = false;
    bool justified = false;  // meaningful only for river

    switch (t.kind()) {
        case PuzzleKind::Hanoi: {
            const auto& p = std::get<HanoiParams>(t.params);
            detail::validate(p);
            auto ext = extract_hanoi_moves(t.text, opt.patterns);
            rep.moves_found = ext.moves.size();
            rep.truncation_phrase_detected = ext.truncation_detected;
            have_moves = !ext.moves.empty();
            if (have_moves) {
                auto vr = hanoi::verify(p.n_disks, ext.moves);
                verdict.status = vr.status;
                verdict.invalid_index = vr.invalid_index;
                verdict.invalid_reason = hanoi::to_string(vr.reason);
                if (vr.status == VerifyStatus::Correct) {
                    verdict.optimal = vr.optimal;  // closed form: 2^n - 1
                }
            }
            break;
        }
        case PuzzleKind::River: {
            const auto& p = std::get<RiverParams>(t.params);
            detail::validate(p);
            river::Instance inst(p.n_pairs, p.capacity);
            auto ext = extract_river_moves(t.text, opt.patterns);
            rep.moves_found = ext.moves.size();
            rep.truncation_phrase_detected = ext.truncation_detected;
            have_moves = !ext.moves.empty();
            if (have_moves) {
                auto vr = river::verify(inst, ext.moves);
                verdict.status = vr.status;
                verdict.invalid_index = vr.invalid_index;
                verdict.invalid_reason = river::to_string(vr.reason);
            }
            const bool need_oracle =
                (impossibility && verdict.status != VerifyStatus::Correct) ||
                (have_moves && verdict.status == VerifyStatus::Correct);
            if (need_oracle) {
                try {
                    auto solvability = river::solve_bfs(inst, opt.river_state_limit);
                    justified = !solvability.solvable;
                    if (verdict.status == VerifyStatus::Correct && solvability.solvable) {
                        verdict.optimal =
                            (ext.moves.size() ==
                             static_cast<std::size_t>(solvability.min_crossings));
                    }
                } catch (const ResourceLimit&) {
                    // Oracle out of desk scale: optimality stays unknown and a
                    // claim cannot be confirmed as justified.
                }
            }
            break;
        }
        case PuzzleKind::Blocks: {
            const auto& p = std::get<BlocksParams>(t.params);
            detail::validate(p);
            auto ext = extract_blocks_moves(t.text, opt.patterns);
            rep.moves_found = ext.moves.size();
            rep.truncation_phrase_detected = ext.truncation_detected;
            have_moves = !ext.moves.empty();
            if (have_moves) {
                auto vr = blocks::verify(p.initial, p.goal, ext.moves,
                                         opt.blocks_optimality_cap);
                verdict.status = vr.status;
                verdict.invalid_index = vr.invalid_index;
                verdict.invalid_reason = blocks::to_string(vr.reason);
                if (vr.status == VerifyStatus::Correct) {
                    verdict.optimal = vr.optimal;  // nullopt above the cap
                }
            }
            break;
        }
    }

    const bool solved = have_moves && verdict.status == VerifyStatus::Correct;

    // (1) Impossibility claim, and no complete solution to override it. A
    // goal-reaching move list always dominates hedging language.
    if (impossibility && !solved) {
        rep.classification = Classification::ClaimedImpossible;
        rep.impossibility_justified = justified;
        return rep;
    }
    // (2) Nothing extracted at all.
    if (!have_moves) {
        rep.classification = Classification::ParseFailure;
        return rep;
    }
    // (3) The verification outcome decides.
    switch (verdict.status) {
        case VerifyStatus::Correct:
            rep.optimal = verdict.optimal;
            rep.classification = (verdict.optimal.has_value() && !*verdict.optimal)
                                     ? Classification::CorrectSuboptimal
                                     : Classification::Correct;
            break;
        case VerifyStatus::InvalidMove:
            rep.classification = Classification::InvalidMove;
            rep.invalid_index = verdict.invalid_index;
            rep.invalid_reason = verdict.invalid_reason;
            break;
        case VerifyStatus::ValidPrefix:
            rep.classification = Classification::TruncatedValidPrefix;
            rep.prefix_length = rep.moves_found;
            break;
    }
    return rep;
}

struct BatchSummary {
    std::size_t total = 0;    // reports emitted
    std::size_t skipped = 0;  // malformed input lines (filled by callers)
    std::map<std::string, std::size_t> by_classification;
    std::map<std::string, std::size_t> by_puzzle;
    // Transcripts a binary pass/fail scheme would score as failures even
    // though they are valid-but-truncated or justified impossibility claims.
    std::size_t binary_failures = 0;
    std::size_t misclassified_binary_failures = 0;
    double misclassification_fraction = 0.0;
    std::vector<std::string> duplicate_ids;
};

inline std::pair<std::vector<GradeReport>, BatchSummary> grade_batch(
    const std::vector<Transcript>& transcripts, const GraderOptions& opt = {}) {
    std::vector<GradeReport> reports;
    reports.reserve(transcripts.size());
    BatchSummary summary;
    for (const char* c :
         {"correct", "correct_suboptimal", "invalid_move",
          "truncated_valid_prefix", "claimed_impossible", "parse_failure"}) {
        summary.by_classification[c] = 0;
    }
    for (const char* p : {"hanoi", "river", "blocks"}) {
        summary.by_puzzle[p] = 0;
    }

    std::map<std::string, std::size_t> id_seen;
    for (const auto& t : transcripts) {
        GradeReport rep = grade(t, opt);
        summary.total += 1;
        summary.by_classification[to_string(rep.classification)] += 1;
        summary.by_puzzle[to_string(rep.puzzle)] += 1;
        const bool binary_pass =
            rep.classification == Classification::Correct ||
            rep.classification == Classification::CorrectSuboptimal;
        if (!binary_pass) {
            summary.binary_failures += 1;
            const bool deserved_credit =
                rep.classification == Classification::TruncatedValidPrefix ||
                (rep.classification == Classification::ClaimedImpossible &&
                 rep.impossibility_justified.value_or(false));
            if (deserved_credit) {
                summary.misclassified_binary_failures += 1;
            }
        }
        if (++id_seen[rep.id] == 2) {
            summary.duplicate_ids.push_back(rep.id);
        }
        reports.push_back(std::move(rep));
    }
    if (summary.total > 0) {
        summary.misclassification_fraction =
            static_cast<double>(summary.misclassified_binary_failures) /
            static_cast<double>(summary.total);
    }
    return {std::move(reports), summary};
}

// --- JSONL schemas ----------------------------------------------------------
// Transcript: {"id": "...", "puzzle": "hanoi|river|blocks",
//              "params": {...}, "text": "..."}
//   hanoi params  {"n": 3}
//   river params  {"n_pairs": 6, "capacity": 3}
//   blocks params {"initial": [["A","B"]], "goal": [["B","A"]]}

inline Transcript transcript_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string() ||
        !j.contains("puzzle") || !j.at("puzzle").is_string() ||
        !j.contains("params") || !j.at("params").is_object() ||
        !j.contains("text") || !j.at("text").is_string()) {
        throw wire::WireError(
            "transcript: need string id, string puzzle, object params, string text");
    }
    Transcript t;
    t.id = j.at("id").get<std::string>();
    t.text = j.at("text").get<std::string>();
    const auto puzzle = j.at("puzzle").get<std::string>();
    const auto& params = j.at("params");
    if (puzzle == "hanoi") {
        if (!params.contains("n") || !params.at("n").is_number_integer()) {
            throw wire::WireError("transcript: hanoi params need integer n");
        }
        HanoiParams p{params.at("n").get<int>()};
        detail::validate(p);
        t.params = p;
    } else if (puzzle == "river") {
        if (!params.contains("n_pairs") ||
            !params.at("n_pairs").is_number_integer() ||
            !params.contains("capacity") ||
            !params.at("capacity").is_number_integer()) {
            throw wire::WireError(
                "transcript: river params need integer n_pairs and capacity");
        }
        RiverParams p{params.at("n_pairs").get<int>(),
                      params.at("capacity").get<int>()};
        detail::validate(p);
        t.params = p;
    } else if (puzzle == "blocks") {
        if (!params.contains("initial") || !params.contains("goal")) {
            throw wire::WireError("transcript: blocks params need initial and goal");
        }
        BlocksParams p{wire::blocks_state_from_json(params.at("initial")),
                       wire::blocks_state_from_json(params.at("goal"))};
        detail::validate(p);
        t.params = std::move(p);
    } else {
        throw wire::WireError("transcript: unknown puzzle '" + puzzle + "'");
    }
    return t;
}

inline ojson to_json(const GradeReport& rep) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["id"] = rep.id;
    j["puzzle"] = to_string(rep.puzzle);
    j["classification"] = to_string(rep.classification);
    j["moves_found"] = rep.moves_found;
    j["truncation_phrase_detected"] = rep.truncation_phrase_detected;
    if (rep.optimal.has_value()) {
        j["optimal"] = *rep.optimal;
    } else {
        j["optimal"] = "unknown";
    }
    ojson detail = ojson::object();
    if (rep.invalid_index.has_value()) {
        detail["invalid_index"] = *rep.invalid_index;
        detail["reason"] = rep.invalid_reason;
    }
    if (rep.prefix_length.has_value()) {
        detail["prefix_length"] = *rep.prefix_length;
    }
    if (rep.impossibility_justified.has_value()) {
        detail["justified"] = *rep.impossibility_justified;
    }
    j["detail"] = std::move(detail);
    return j;
}

inline ojson to_json(const BatchSummary& s) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = "summary";
    j["total"] = s.total;
    j["skipped"] = s.skipped;
    j["by_classification"] = s.by_classification;
    j["by_puzzle"] = s.by_puzzle;
    j["binary_failures"] = s.binary_failures;
    j["misclassified_binary_failures"] = s.misclassified_binary_failures;
    j["misclassification_fraction"] = s.misclassification_fraction;
    j["duplicate_ids"] = s.duplicate_ids;
    return j;
}

}  // namespace puzzle_eval::grader
