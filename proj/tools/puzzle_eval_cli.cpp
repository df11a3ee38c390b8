// puzzle-eval: solve, check, budget, grade, feasibility-sweep.
//
// Exit codes: 0 success (check: Correct), 1 usage or parse error, 2 proven
// unsolvable (river), 3 check outcome other than Correct. Everything is
// deterministic; output files are written to a temp file and renamed so a
// failure never leaves a partial file behind.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "puzzle_eval/blocks.hpp"
#include "puzzle_eval/budget.hpp"
#include "puzzle_eval/common.hpp"
#include "puzzle_eval/grader.hpp"
#include "puzzle_eval/hanoi.hpp"
#include "puzzle_eval/river.hpp"
#include "puzzle_eval/wire.hpp"

namespace {

using nlohmann::json;
using namespace puzzle_eval;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnsolvable = 2;
constexpr int kExitNotCorrect = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw UsageError("cannot open output file: " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw UsageError("failed writing output file: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path) {
        write_atomic(*out_path, content);
    } else {
        std::cout << content;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<std::size_t, std::size_t> line_col_of(const std::string& text,
                                                std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col_of(text, e.byte);
        throw UsageError(path + ": parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what());
    }
}

json parse_json_arg(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(what + ": " + e.what());
    }
}

std::size_t state_limit_from_env() {
    const char* raw = std::getenv("PUZZLE_EVAL_STATE_LIMIT");
    if (raw == nullptr || *raw == '\0') {
        return river::kDefaultStateLimit;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) {
        throw UsageError("invalid PUZZLE_EVAL_STATE_LIMIT value");
    }
    return static_cast<std::size_t>(v);
}

// --- solve -------------------------------------------------------------------

int cmd_solve_hanoi(int n, const std::optional<std::string>& out) {
    const auto moves = hanoi::solve(n);  // throws on n < 1 or n > cap
    emit(out, wire::to_json(moves).dump() + "\n");
    return kExitOk;
}

int cmd_solve_river(int pairs, int capacity,
                    const std::optional<std::string>& out) {
    river::Instance inst(pairs, capacity);
    const auto verdict = river::solve_bfs(inst, state_limit_from_env());
    if (!verdict.solvable) {
        emit(out, "UNSOLVABLE\nstates_explored=" +
                      std::to_string(verdict.states_explored) + "\n");
        return kExitUnsolvable;
    }
    emit(out, wire::to_json(verdict.witness).dump() + "\n");
    std::cerr << "solvable in " << verdict.min_crossings << " crossings ("
              << verdict.states_explored << " states explored)\n";
    return kExitOk;
}

int cmd_solve_blocks(const std::string& initial_json, const std::string& goal_json,
                     const std::string& planner,
                     const std::optional<std::string>& out) {
    const auto initial =
        wire::blocks_state_from_json(parse_json_arg(initial_json, "--initial"));
    const auto goal =
        wire::blocks_state_from_json(parse_json_arg(goal_json, "--goal"));
    blocks::PlanResult plan;
    if (planner == "optimal") {
        plan = blocks::optimal_plan(initial, goal);
    } else if (planner == "near") {
        plan = blocks::near_optimal_plan(initial, goal);
    } else {
        throw UsageError("--planner must be 'optimal' or 'near'");
    }
    emit(out, wire::to_json(plan.moves).dump() + "\n");
    std::cerr << plan.moves.size() << " moves ("
              << (plan.optimal ? "optimal" : "near-optimal") << ")\n";
    return kExitOk;
}

// --- check -------------------------------------------------------------------

std::string describe_optimality(const std::optional<bool>& optimal) {
    if (!optimal.has_value()) {
        return "Correct (optimality unknown)";
    }
    return *optimal ? "Correct (optimal)" : "Correct (suboptimal)";
}

int finish_check(VerifyStatus status, const std::string& line) {
    std::cout << line << "\n";
    return status == VerifyStatus::Correct ? kExitOk : kExitNotCorrect;
}

int cmd_check_hanoi(int n, const std::string& moves_path) {
    const auto moves = wire::hanoi_moves_from_json(parse_json_file(moves_path));
    const auto res = hanoi::verify(n, moves);
    switch (res.status) {
        case VerifyStatus::Correct:
            return finish_check(res.status, describe_optimality(res.optimal));
        case VerifyStatus::ValidPrefix:
            return finish_check(res.status,
                                "ValidPrefix after " +
                                    std::to_string(res.moves_applied) + " moves");
        case VerifyStatus::InvalidMove:
            return finish_check(
                res.status, "InvalidMove at index " +
                                std::to_string(res.invalid_index) + ": " +
                                hanoi::to_string(res.reason));
    }
    return kExitUsage;
}

int cmd_check_river(int pairs, int capacity, const std::string& moves_path) {
    river::Instance inst(pairs, capacity);
    const auto moves = wire::river_moves_from_json(parse_json_file(moves_path));
    const auto res = river::verify(inst, moves);
    switch (res.status) {
        case VerifyStatus::Correct: {
            std::optional<bool> optimal;
            try {
                const auto verdict = river::solve_bfs(inst, state_limit_from_env());
                if (verdict.solvable) {
                    optimal = (moves.size() ==
                               static_cast<std::size_t>(verdict.min_crossings));
                }
            } catch (const ResourceLimit&) {
                // leave optimality unknown
            }
            return finish_check(res.status, describe_optimality(optimal));
        }
        case VerifyStatus::ValidPrefix:
            return finish_check(res.status,
                                "ValidPrefix after " +
                                    std::to_string(res.moves_applied) + " moves");
        case VerifyStatus::InvalidMove:
            return finish_check(
                res.status, "InvalidMove at index " +
                                std::to_string(res.invalid_index) + ": " +
                                river::to_string(res.reason));
    }
    return kExitUsage;
}

int cmd_check_blocks(const std::string& initial_json, const std::string& goal_json,
                     const std::string& moves_path) {
    const auto initial =
        wire::blocks_state_from_json(parse_json_arg(initial_json, "--initial"));
    const auto goal =
        wire::blocks_state_from_json(parse_json_arg(goal_json, "--goal"));
    const auto moves = wire::blocks_moves_from_json(parse_json_file(moves_path));
    const auto res = blocks::verify(initial, goal, moves);
    switch (res.status) {
        case VerifyStatus::Correct:
            return finish_check(res.status, describe_optimality(res.optimal));
        case VerifyStatus::ValidPrefix:
            return finish_check(res.status,
                                "ValidPrefix after " +
                                    std::to_string(res.moves_applied) + " moves");
        case VerifyStatus::InvalidMove:
            return finish_check(
                res.status, "InvalidMove at index " +
                                std::to_string(res.invalid_index) + ": " +
                                blocks::to_string(res.reason));
    }
    return kExitUsage;
}

// --- budget ------------------------------------------------------------------

int cmd_budget(double per_move, double overhead, std::uint64_t l_max,
               const std::string& mode_name, std::optional<int> collapse_at) {
    const auto mode = mode_name == "quadratic" ? budget::GrowthMode::Quadratic
                                               : budget::GrowthMode::Linear;
    const budget::TokenModel model(per_move, overhead, l_max);
    const int n_max = budget::max_solvable_n(model, mode);

    std::cout << "n\ttokens_required\twithin_limit\n";
    const int rows = std::min(n_max + 2, budget::kMaxN);
    for (int n = 1; n <= rows; ++n) {
        const auto need = budget::tokens_required(n, mode, model);
        std::cout << n << "\t" << budget::to_string(need) << "\t"
                  << (need <= budget::TokenCount{l_max} ? "yes" : "no") << "\n";
    }
    std::cout << "N_max = " << n_max << "\n";
    if (collapse_at) {
        std::cout << "collapse_gap = "
                  << budget::collapse_gap(*collapse_at, model, mode) << "\n";
    }
    return kExitOk;
}

// --- grade -------------------------------------------------------------------

int cmd_grade(const std::string& input_path, const std::string& output_path,
              const std::optional<std::string>& patterns_path,
              bool pegs_one_indexed) {
    grader::GraderOptions options;
    if (patterns_path) {
        options.patterns = grader::PatternConfig::from_json(
            parse_json_file(*patterns_path));
    }
    if (pegs_one_indexed) {
        options.patterns.hanoi_pegs_one_indexed = true;
    }
    options.river_state_limit = state_limit_from_env();

    std::ifstream in(input_path);
    if (!in) {
        throw UsageError("cannot read file: " + input_path);
    }

    std::vector<grader::Transcript> transcripts;
    std::size_t skipped = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;  // blank line
        }
        try {
            transcripts.push_back(
                grader::transcript_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            std::cerr << input_path << ":" << line_no << ": skipped: " << e.what()
                      << "\n";
            ++skipped;
        }
    }

    auto [reports, summary] = grader::grade_batch(transcripts, options);
    summary.skipped = skipped;

    std::string out;
    for (const auto& rep : reports) {
        out += grader::to_json(rep).dump();
        out += "\n";
    }
    const std::string summary_line = grader::to_json(summary).dump();
    out += summary_line;
    out += "\n";
    write_atomic(output_path, out);
    std::cout << summary_line << "\n";
    return kExitOk;
}

// --- feasibility-sweep --------------------------------------------------------

int cmd_feasibility_sweep(int pairs_min, int pairs_max, int capacity_min,
                          int capacity_max,
                          const std::optional<std::string>& out_path) {
    if (pairs_min < 1 || pairs_min > pairs_max || capacity_min < 2 ||
        capacity_min > capacity_max) {
        throw UsageError("empty or invalid sweep range");
    }
    const std::size_t limit = state_limit_from_env();

    std::ostringstream table;
    table << "pairs\tcapacity\tverdict\tmin_crossings\tstates_explored\n";
    json rows = json::array();
    for (int b = capacity_min; b <= capacity_max; ++b) {
        for (int n = pairs_min; n <= pairs_max; ++n) {
            river::Instance inst(n, b);
            const auto verdict = river::solve_bfs(inst, limit);
            table << n << "\t" << b << "\t"
                  << (verdict.solvable ? "solvable" : "unsolvable") << "\t";
            if (verdict.solvable) {
                table << verdict.min_crossings;
            } else {
                table << "-";
            }
            table << "\t" << verdict.states_explored << "\n";
            json row;
            row["pairs"] = n;
            row["capacity"] = b;
            row["solvable"] = verdict.solvable;
            if (verdict.solvable) {
                row["min_crossings"] = verdict.min_crossings;
            }
            row["states_explored"] = verdict.states_explored;
            rows.push_back(row);
        }
    }
    std::cout << table.str();
    if (out_path) {
        write_atomic(*out_path, rows.dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"puzzle-eval: planning-puzzle solvers, verifiers, token-budget "
                 "tables, and transcript grading"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve an instance and emit the move list");
    solve->require_subcommand(1);
    int hanoi_n = 3;
    std::string out_path;
    auto* solve_hanoi = solve->add_subcommand("hanoi", "Tower of Hanoi");
    solve_hanoi->add_option("--n", hanoi_n, "disk count")->required();
    solve_hanoi->add_option("--out", out_path, "write the move list to a file");

    int pairs = 2;
    int capacity = 2;
    auto* solve_river = solve->add_subcommand("river", "Actor/agent river crossing");
    solve_river->add_option("--pairs", pairs, "number of actor/agent pairs")->required();
    solve_river->add_option("--capacity", capacity, "boat capacity")->required();
    solve_river->add_option("--out", out_path, "write the witness to a file");

    std::string initial_json;
    std::string goal_json;
    std::string planner = "optimal";
    auto* solve_blocks = solve->add_subcommand("blocks", "Blocks World");
    solve_blocks->add_option("--initial", initial_json, "initial state JSON")->required();
    solve_blocks->add_option("--goal", goal_json, "goal state JSON")->required();
    solve_blocks->add_option("--planner", planner, "optimal | near");
    solve_blocks->add_option("--out", out_path, "write the plan to a file");

    // check
    auto* check = app.add_subcommand("check", "Verify a move list against an instance");
    check->require_subcommand(1);
    std::string moves_path;
    auto* check_hanoi = check->add_subcommand("hanoi", "Tower of Hanoi");
    check_hanoi->add_option("--n", hanoi_n, "disk count")->required();
    check_hanoi->add_option("--moves", moves_path, "move list file")->required();
    auto* check_river = check->add_subcommand("river", "Actor/agent river crossing");
    check_river->add_option("--pairs", pairs, "number of pairs")->required();
    check_river->add_option("--capacity", capacity, "boat capacity")->required();
    check_river->add_option("--moves", moves_path, "move list file")->required();
    auto* check_blocks = check->add_subcommand("blocks", "Blocks World");
    check_blocks->add_option("--initial", initial_json, "initial state JSON")->required();
    check_blocks->add_option("--goal", goal_json, "goal state JSON")->required();
    check_blocks->add_option("--moves", moves_path, "move list file")->required();

    // budget
    auto* budget_cmd = app.add_subcommand("budget", "Token-cost table and N_max");
    double per_move = 10.0;
    double overhead = 0.0;
    std::uint64_t l_max = 100000;
    std::string mode = "linear";
    int collapse_at = 0;
    budget_cmd->add_option("--l-max", l_max, "output token limit")->required();
    budget_cmd->add_option("--mode", mode, "linear | quadratic")
        ->check(CLI::IsMember({"linear", "quadratic"}));
    budget_cmd->add_option("--tokens-per-move", per_move, "tokens per move (default 10)");
    budget_cmd->add_option("--overhead", overhead, "fixed setup/formatting tokens");
    auto* collapse_opt = budget_cmd->add_option(
        "--collapse-at", collapse_at, "also report the gap to a reported give-up size");

    // grade
    auto* grade_cmd = app.add_subcommand("grade", "Grade a JSONL transcript batch");
    std::string input_path;
    std::string report_path;
    std::string patterns_path;
    bool pegs_one_indexed = false;
    grade_cmd->add_option("--input", input_path, "transcripts, one JSON object per line")->required();
    grade_cmd->add_option("--output", report_path, "report JSONL destination")->required();
    auto* patterns_opt = grade_cmd->add_option(
        "--patterns", patterns_path, "pattern config JSON (phrases, peg indexing)");
    grade_cmd->add_flag("--pegs-one-indexed", pegs_one_indexed,
                        "transcripts number pegs 1..3 instead of 0..2");

    // feasibility-sweep
    auto* sweep = app.add_subcommand(
        "feasibility-sweep", "Tabulate river solvability over a pairs x capacity grid");
    int pairs_min = 2;
    int pairs_max = 10;
    int capacity_min = 2;
    int capacity_max = 4;
    sweep->add_option("--pairs-min", pairs_min, "smallest pair count (default 2)");
    sweep->add_option("--pairs-max", pairs_max, "largest pair count (default 10)");
    sweep->add_option("--capacity-min", capacity_min, "smallest capacity (default 2)");
    sweep->add_option("--capacity-max", capacity_max, "largest capacity (default 4)");
    sweep->add_option("--out", out_path, "also write rows as JSON to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::optional<std::string> out =
        out_path.empty() ? std::nullopt : std::optional<std::string>(out_path);

    try {
        if (solve_hanoi->parsed()) {
            return cmd_solve_hanoi(hanoi_n, out);
        }
        if (solve_river->parsed()) {
            return cmd_solve_river(pairs, capacity, out);
        }
        if (solve_blocks->parsed()) {
            return cmd_solve_blocks(initial_json, goal_json, planner, out);
        }
        if (check_hanoi->parsed()) {
            return cmd_check_hanoi(hanoi_n, moves_path);
        }
        if (check_river->parsed()) {
            return cmd_check_river(pairs, capacity, moves_path);
        }
        if (check_blocks->parsed()) {
            return cmd_check_blocks(initial_json, goal_json, moves_path);
        }
        if (budget_cmd->parsed()) {
            return cmd_budget(per_move, overhead, l_max, mode,
                              collapse_opt->count() > 0
                                  ? std::optional<int>(collapse_at)
                                  : std::nullopt);
        }
        if (grade_cmd->parsed()) {
            return cmd_grade(input_path, report_path,
                             patterns_opt->count() > 0
                                 ? std::optional<std::string>(patterns_path)
                                 : std::nullopt,
                             pegs_one_indexed);
        }
        if (sweep->parsed()) {
            return cmd_feasibility_sweep(pairs_min, pairs_max, capacity_min,
                                         capacity_max, out);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const wire::WireError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInstance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
