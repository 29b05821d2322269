// Operator front end: single matches, tournaments, card generation, replay
// verification and throughput benchmarks.
//
// Exit codes: 0 success, 1 replay divergence, 2 usage error, 3 infrastructure error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "locm/card_source.hpp"
#include "locm/match.hpp"
#include "locm/rng.hpp"
#include "locm/selfplay.hpp"
#include "locm/tournament.hpp"

namespace {

using namespace locm;

constexpr int kOk = 0;
constexpr int kDivergence = 1;
constexpr int kUsage = 2;
constexpr int kInfrastructure = 3;

struct RuleFlags {
  std::string version = "1.2";
  std::string policy = "lenient";
  std::string cards;
  std::string params;
  int battle_ms = 200;
  int draft_ms = 200;
  int construction_ms = 4000;
  int mem_soft_mb = 256;
  int mem_hard_mb = 1024;
  int warmup_ms = 0;
  bool os_limit = false;
  int hard_cap = 100;
  int initial_draw = 0;
};

void add_rule_flags(CLI::App* cmd, RuleFlags& f) {
  cmd->add_option("--version", f.version, "Ruleset version: 1.0, 1.2 or 1.5")->capture_default_str();
  cmd->add_option("--policy", f.policy, "Illegal action policy: lenient or strict")->capture_default_str();
  cmd->add_option("--cards", f.cards, "Draft card set file (1.0/1.2); the built-in set by default");
  cmd->add_option("--params", f.params, "Pool generator parameter file (1.5)");
  cmd->add_option("--battle-ms", f.battle_ms, "Battle turn budget")->capture_default_str();
  cmd->add_option("--draft-ms", f.draft_ms, "Draft pick budget")->capture_default_str();
  cmd->add_option("--construction-ms", f.construction_ms, "Construction turn budget")->capture_default_str();
  cmd->add_option("--mem-soft-mb", f.mem_soft_mb, "Memory warning threshold")->capture_default_str();
  cmd->add_option("--mem-hard-mb", f.mem_hard_mb, "Memory disqualification threshold")->capture_default_str();
  cmd->add_option("--warmup-ms", f.warmup_ms, "Extra budget on each agent's first battle turn")->capture_default_str();
  cmd->add_flag("--os-limit", f.os_limit, "Also apply the hard memory limit as an address-space rlimit");
  cmd->add_option("--hard-cap", f.hard_cap, "Round at which the game is adjudicated")->capture_default_str();
  cmd->add_option("--initial-draw", f.initial_draw, "Cards drawn by each player before the first turn")
      ->capture_default_str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fills the rule-related part of a schedule. Throws CLI::ValidationError on bad values.
void apply_rules(const RuleFlags& f, ScheduleConfig& c) {
  Version v;
  if (!parse_version(f.version, v)) throw CLI::ValidationError("--version", "unknown version " + f.version);
  if (f.policy != "lenient" && f.policy != "strict") throw CLI::ValidationError("--policy", "expected lenient or strict");
  c.config = RulesetConfig::for_version(v);
  c.policy = f.policy == "strict" ? Policy::Strict : Policy::Lenient;
  c.config.battle_turn_ms = f.battle_ms;
  c.config.draft_pick_ms = f.draft_ms;
  c.config.construction_ms = f.construction_ms;
  c.config.mem_soft_bytes = static_cast<std::int64_t>(f.mem_soft_mb) << 20;
  c.config.mem_hard_bytes = static_cast<std::int64_t>(f.mem_hard_mb) << 20;
  c.config.max_turns_hard_cap = f.hard_cap;
  c.config.initial_draw = f.initial_draw;
  c.warmup_grace_ms = f.warmup_ms;
  c.os_hard_limit = f.os_limit;
  if (!f.cards.empty()) {
    c.cards = std::make_shared<const CardSet>(load_card_set(f.cards, v));
    c.cards_label = f.cards;
  }
  if (!f.params.empty()) {
    c.generator = GeneratorParams::parse(slurp(f.params));
    if (auto problems = c.generator.validate(); !problems.empty())
      throw CLI::ValidationError("--params", problems.front());
  }
}

int cmd_run_match(const RuleFlags& rules, const std::string& p1, const std::string& p2,
                  const std::optional<std::uint64_t>& seed_flag, const std::string& out_dir) {
  ScheduleConfig c;
  apply_rules(rules, c);
  c.agents = {parse_agent_spec(p1), parse_agent_spec(p2)};
  const std::uint64_t seed = seed_flag.value_or(0);
  if (!seed_flag) std::cout << "seed 0 (default)\n";
  MatchSpec spec;
  spec.schedule_id = "single";
  spec.match_id = "seed-" + std::to_string(seed);
  spec.game_seed = seed;
  spec.agent_seed_a = derive_seed(seed, tag_of("agent"), 0);
  spec.agent_seed_b = derive_seed(seed, tag_of("agent"), 1);
  c.schedule_id = spec.schedule_id;

  RunOptions options;
  options.transcript_dir = out_dir;
  const MatchResult r = run_match(c, spec, options);
  if (r.infrastructure_error) {
    std::cerr << "error: " << r.error << "\n";
    return kInfrastructure;
  }
  if (!r.error.empty()) {
    std::cerr << "error: " << r.error << "\n";
    return kInfrastructure;
  }
  const std::string winner = r.winner == Side::Draw ? "draw" : r.winner == Side::A ? p1 : p2;
  std::cout << "result winner " << winner << " reason " << to_string(r.reason) << " turns " << r.turns << "\n";
  std::cout << "transcript " << (std::filesystem::path(out_dir) / spec.schedule_id / spec.match_id / "transcript.txt").string()
            << "\n";
  return kOk;
}

struct TournamentFlags {
  std::vector<std::string> agents;
  int seeds = 0;
  int repeats = 10;
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::string out = "results";
  std::string transcripts = "transcripts";
  bool no_transcripts = false;
  bool compress = false;
  std::string ordering = "interleaved";
  std::optional<std::size_t> limit;
  std::string schedule_id;
};

int cmd_tournament(const RuleFlags& rules, const TournamentFlags& f) {
  ScheduleConfig c;
  apply_rules(rules, c);
  if (f.agents.size() < 2) throw CLI::ValidationError("--agent", "at least two agents are required");
  if (f.seeds < 1) throw CLI::ValidationError("--seeds", "must be positive");
  if (f.repeats < 1) throw CLI::ValidationError("--repeats", "must be positive");
  if (f.ordering != "interleaved" && f.ordering != "concatenated")
    throw CLI::ValidationError("--ordering", "expected interleaved or concatenated");
  for (const auto& a : f.agents) c.agents.push_back(parse_agent_spec(a));
  c.seeds = f.seeds;
  c.repeats = f.repeats;
  c.master_seed = f.master_seed;
  c.schedule_id = f.schedule_id;
  const auto specs = build_schedule(c);

  RunOptions options;
  options.workers = f.workers;
  if (!f.no_transcripts) options.transcript_dir = f.transcripts;
  const auto results = run_schedule(c, specs, options);

  int infrastructure = 0;
  for (const auto& r : results) {
    if (r.infrastructure_error) {
      ++infrastructure;
      std::cerr << "match " << r.spec.match_id << ": " << r.error << "\n";
    } else if (!r.error.empty()) {
      std::cerr << "match " << r.spec.match_id << ": " << r.error << "\n";
    }
  }
  const Ordering ordering = f.ordering == "interleaved" ? Ordering::Interleaved : Ordering::Concatenated;
  const WinRateTable table = aggregate(results, ordering, f.limit);
  const ExportPaths paths = export_results(results, table, std::filesystem::path(f.out) / specs.front().schedule_id, f.compress);
  std::cout << "schedule " << specs.front().schedule_id << ": " << results.size() << " matches\n";
  std::cout << format_table(table);
  std::cout << "raw " << paths.raw.string() << "\nsummary " << paths.summary.string() << "\n";
  return infrastructure ? kInfrastructure : kOk;
}

int cmd_gen_cards(std::uint64_t seed, const std::string& output, const std::string& params_path, int count,
                  const std::string& version_text) {
  Version v;
  if (!parse_version(version_text, v)) throw CLI::ValidationError("--version", "unknown version " + version_text);
  GeneratorParams params;
  if (!params_path.empty()) params = GeneratorParams::parse(slurp(params_path));
  if (auto problems = params.validate(); !problems.empty()) throw CLI::ValidationError("--params", problems.front());
  if (count < 1) throw CLI::ValidationError("--count", "must be positive");
  const CardSet set = generate_cards(params, seed, count, v);
  if (output.empty() || output == "-") {
    std::cout << format_card_set(set);
  } else {
    save_card_set(set, output);
    std::cout << "wrote " << set.size() << " cards to " << output << "\n";
  }
  return kOk;
}

int cmd_replay(const std::string& path, bool dump_protocol, const std::string& cards_path) {
  const std::string text = slurp(path);
  std::shared_ptr<const CardSet> cards;
  if (!cards_path.empty()) cards = std::make_shared<const CardSet>(load_card_set(cards_path));
  const ReplayReport report = replay_transcript(text, cards);

  std::istringstream lines(report.record.transcript);
  std::string l;
  while (std::getline(lines, l)) {
    if (l.rfind("turn ", 0) == 0) {
      std::cout << l << "\n";
    } else if (l.rfind("> ", 0) == 0) {
      if (dump_protocol) std::cout << "  " << l.substr(2) << "\n";
    } else if (l.rfind("< ", 0) == 0) {
      std::cout << "  -> " << l.substr(2) << "\n";
    } else if (l.rfind("result ", 0) == 0) {
      std::cout << l << "\n";
    }
  }
  if (!report.verified) {
    std::cout << "divergence at line " << report.line << "\n  transcript: " << report.expected
              << "\n  simulation: " << report.actual << "\n";
    return kDivergence;
  }
  std::cout << "verified\n";
  return kOk;
}

int cmd_bench(const std::vector<std::string>& versions, double seconds, int workers, std::uint64_t seed) {
  for (const auto& text : versions) {
    Version v;
    if (!parse_version(text, v)) throw CLI::ValidationError("--version", "unknown version " + text);
    const auto started = std::chrono::steady_clock::now();
    SelfPlayStats total;
    const long batch = 256;
    double elapsed = 0.0;
    do {
      const SelfPlayStats s = workers > 1 ? simulate_random_games_parallel(v, seed, total.games, batch, workers)
                                          : simulate_random_games_serial(v, seed, total.games, batch);
      total.games += s.games;
      total.actions += s.actions;
      total.turns += s.turns;
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    } while (elapsed < seconds);
    std::printf("version %s workers %d games %ld seconds %.2f games/sec %.1f actions/sec %.1f\n",
                std::string(to_string(v)).c_str(), workers, total.games, elapsed, total.games / elapsed,
                total.actions / elapsed);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Legends of Code and Magic engine, referee and tournament runner"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);

  RuleFlags match_rules;
  std::string p1, p2, match_out = "transcripts";
  std::optional<std::uint64_t> match_seed;
  auto* run = app.add_subcommand("run-match", "Play one match and write its transcript");
  add_rule_flags(run, match_rules);
  run->add_option("--p1", p1, "First seat: built-in agent name or external command")->required();
  run->add_option("--p2", p2, "Second seat: built-in agent name or external command")->required();
  run->add_option("--seed", match_seed, "Game seed (default 0)");
  run->add_option("--out", match_out, "Transcript root")->capture_default_str();

  RuleFlags tour_rules;
  TournamentFlags tour;
  auto* tn = app.add_subcommand("tournament", "Run a mirrored round-robin schedule");
  add_rule_flags(tn, tour_rules);
  tn->add_option("--agent,--agents", tour.agents, "Agents (at least two)")->required();
  tn->add_option("--seeds", tour.seeds, "Number of game seeds")->required();
  tn->add_option("--repeats", tour.repeats, "Repeats per seed")->capture_default_str();
  tn->add_option("--master-seed", tour.master_seed, "Master seed")->capture_default_str();
  tn->add_option("--workers", tour.workers, "Parallel matches")->capture_default_str();
  tn->add_option("--out", tour.out, "Results root")->capture_default_str();
  tn->add_option("--transcripts", tour.transcripts, "Transcript root")->capture_default_str();
  tn->add_flag("--no-transcripts", tour.no_transcripts, "Skip writing transcripts");
  tn->add_flag("--compress", tour.compress, "Gzip the raw results");
  tn->add_option("--ordering", tour.ordering, "Result ordering: interleaved or concatenated")->capture_default_str();
  tn->add_option("--limit", tour.limit, "Aggregate only the first N results of the ordering");
  tn->add_option("--schedule-id", tour.schedule_id, "Schedule id (derived from the parameters by default)");

  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_params, gen_version = "1.5";
  int gen_count = 120;
  auto* gen = app.add_subcommand("gen-cards", "Generate a card pool file");
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output file ('-' for stdout)");
  gen->add_option("--params", gen_params, "Generator parameter file (key = value lines)");
  gen->add_option("--count", gen_count, "Number of cards")->capture_default_str();
  gen->add_option("--version", gen_version, "Card format version")->capture_default_str();

  std::string replay_path, replay_cards;
  bool dump_protocol = false;
  auto* rp = app.add_subcommand("replay", "Re-simulate a transcript and verify it");
  rp->add_option("transcript", replay_path, "Transcript file")->required();
  rp->add_flag("--dump-protocol", dump_protocol, "Print every agent input");
  rp->add_option("--cards", replay_cards, "Card set file overriding the transcript's reference");

  std::vector<std::string> bench_versions = {"1.2"};
  double bench_seconds = 3.0;
  int bench_workers = 1;
  std::uint64_t bench_seed = 0;
  auto* bn = app.add_subcommand("bench", "Measure in-process random-vs-random throughput");
  bn->add_option("--version", bench_versions, "Versions to measure")->capture_default_str();
  bn->add_option("--seconds", bench_seconds, "Minimum measurement time per version")->capture_default_str();
  bn->add_option("--workers", bench_workers, "Parallel games")->capture_default_str();
  bn->add_option("--seed", bench_seed, "Master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run_match(match_rules, p1, p2, match_seed, match_out);
    if (*tn) return cmd_tournament(tour_rules, tour);
    if (*gen) return cmd_gen_cards(gen_seed, gen_out, gen_params, gen_count, gen_version);
    if (*rp) return cmd_replay(replay_path, dump_protocol, replay_cards);
    if (*bn) return cmd_bench(bench_versions, bench_seconds, bench_workers, bench_seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  }
  return kUsage;
}
