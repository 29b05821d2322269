#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locm/match.hpp"

namespace locm {

// A built-in agent name (played in-process) or an external command line.
struct AgentSpec {
  std::string name;
  std::string command;
  bool builtin = false;
};

AgentSpec parse_agent_spec(const std::string& text);

enum class Orientation { AFirst, BFirst };
std::string_view to_string(Orientation o);

struct ScheduleConfig {
  std::vector<AgentSpec> agents;
  int seeds = 1;
  int repeats = 10;
  std::uint64_t master_seed = 0;
  RulesetConfig config;
  Policy policy = Policy::Lenient;
  std::shared_ptr<const CardSet> cards;
  std::string cards_label = "default";
  GeneratorParams generator;
  int warmup_grace_ms = 0;
  bool os_hard_limit = false;
  // Derived from the parameters when empty.
  std::string schedule_id;
};

// Stable id from agents, counts, master seed and version.
std::string default_schedule_id(const ScheduleConfig& config);

struct MatchSpec {
  std::string schedule_id;
  std::string match_id;
  int index = 0;
  int agent_a = 0;
  int agent_b = 1;
  int pair_id = 0;
  int seed_index = 0;
  int repeat = 0;
  Orientation orientation = Orientation::AFirst;
  // Decks, draft options and pools depend on this seed only.
  std::uint64_t game_seed = 0;
  // RNG seeds of agents A and B.
  std::uint64_t agent_seed_a = 0;
  std::uint64_t agent_seed_b = 0;
};

// Game seed of a seed index: derive_seed(master, "game", seedIndex).
std::uint64_t game_seed_for(std::uint64_t master_seed, int seed_index);

// Every unordered agent pair x seed x repeat x orientation, in that nesting.
std::vector<MatchSpec> build_schedule(const ScheduleConfig& config);

enum class Side { A, B, Draw };
std::string_view to_string(Side s);

struct MatchResult {
  MatchSpec spec;
  std::string agent_a;
  std::string agent_b;
  Side winner = Side::Draw;
  EndReason reason = EndReason::None;
  int turns = 0;
  double duration_ms = 0.0;
  std::uint64_t final_hash = 0;
  std::vector<double> timings_ms;
  std::string transcript;
  // Ignored actions and parse errors by agent A and B.
  int ignored_a = 0;
  int ignored_b = 0;
  int parse_errors_a = 0;
  int parse_errors_b = 0;
  // Set when the match could not be played for reasons outside the agents'
  // control; such matches may be retried and are left out of aggregation.
  bool infrastructure_error = false;
  std::string error;
};

struct RunOptions {
  int workers = 1;
  // Writes <dir>/<scheduleId>/<matchId>/transcript.txt and timings.txt when set.
  std::optional<std::filesystem::path> transcript_dir;
  // Keeps each transcript in MatchResult::transcript.
  bool keep_transcripts = false;
};

MatchResult run_match(const ScheduleConfig& config, const MatchSpec& spec, const RunOptions& options);

// Worker-pool execution; results are in schedule order regardless of workers.
std::vector<MatchResult> run_schedule(const ScheduleConfig& config, const std::vector<MatchSpec>& specs,
                                      const RunOptions& options);
// Serial reference of run_schedule.
std::vector<MatchResult> run_schedule_serial(const ScheduleConfig& config, const std::vector<MatchSpec>& specs,
                                             const RunOptions& options);

enum class Ordering { Interleaved, Concatenated };

// Result order used for streamed or truncated views. Concatenated keeps
// schedule order; Interleaved round-robins across agent pairs.
std::vector<const MatchResult*> order_results(const std::vector<MatchResult>& results, Ordering ordering);

struct AgentStats {
  std::string name;
  int games = 0;
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int decided() const { return wins + losses; }
  // Percent of decided games; 0 when none were decided.
  double win_rate() const { return decided() ? 100.0 * wins / decided() : 0.0; }
};

struct WinRateTable {
  std::string schedule_id;
  std::vector<AgentStats> agents;
  // wins[i][j]: games agent i won against agent j; draws is symmetric.
  std::vector<std::vector<int>> wins;
  std::vector<std::vector<int>> draws;
  int games = 0;
};

// Throws std::invalid_argument when results come from different schedules.
// `limit` keeps only the first results of the chosen ordering.
WinRateTable aggregate(const std::vector<MatchResult>& results, Ordering ordering = Ordering::Interleaved,
                       std::optional<std::size_t> limit = std::nullopt);

std::string format_win_rate(double rate);
std::string format_table(const WinRateTable& table);
std::string summary_tsv(const WinRateTable& table);

// One JSON object per line, stable key order.
std::string raw_records_jsonl(const std::vector<MatchResult>& results);

struct ExportPaths {
  std::filesystem::path raw;
  std::filesystem::path summary;
};

// Writes raw.jsonl (raw.jsonl.gz when compressed) and summary.tsv into `dir`.
ExportPaths export_results(const std::vector<MatchResult>& results, const WinRateTable& table,
                           const std::filesystem::path& dir, bool compress);

// Reads a raw file back, transparently decompressing; returns its text.
std::string read_raw_records(const std::filesystem::path& path);

}  // namespace locm
