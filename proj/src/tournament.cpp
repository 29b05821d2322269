#include "locm/tournament.hpp"

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "locm/rng.hpp"

namespace locm {

AgentSpec parse_agent_spec(const std::string& text) {
  AgentSpec a;
  a.name = text;
  a.command = text;
  a.builtin = is_builtin_agent(text);
  return a;
}

std::string_view to_string(Orientation o) { return o == Orientation::AFirst ? "A-first" : "B-first"; }

std::string_view to_string(Side s) {
  switch (s) {
    case Side::A: return "A";
    case Side::B: return "B";
    case Side::Draw: return "draw";
  }
  return "?";
}

std::string default_schedule_id(const ScheduleConfig& c) {
  std::string key;
  for (const auto& a : c.agents) key += a.command + '\x1f';
  key += std::to_string(c.seeds) + '/' + std::to_string(c.repeats) + '/' + std::to_string(c.master_seed) + '/' +
         std::string(to_string(c.config.version)) + '/' + (c.policy == Policy::Strict ? "strict" : "lenient");
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%012llx", static_cast<unsigned long long>(tag_of(key) >> 16));
  return buf;
}

std::uint64_t game_seed_for(std::uint64_t master_seed, int seed_index) {
  return derive_seed(master_seed, tag_of("game"), static_cast<std::uint64_t>(seed_index));
}

std::vector<MatchSpec> build_schedule(const ScheduleConfig& c) {
  if (c.agents.size() < 2) throw std::invalid_argument("a schedule needs at least two agents");
  if (c.seeds < 1 || c.repeats < 1) throw std::invalid_argument("seed and repeat counts must be positive");
  const std::string id = c.schedule_id.empty() ? default_schedule_id(c) : c.schedule_id;
  std::vector<MatchSpec> specs;
  int pair = 0;
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    for (std::size_t j = i + 1; j < c.agents.size(); ++j, ++pair) {
      for (int s = 0; s < c.seeds; ++s) {
        for (int r = 0; r < c.repeats; ++r) {
          for (Orientation o : {Orientation::AFirst, Orientation::BFirst}) {
            MatchSpec m;
            m.schedule_id = id;
            m.index = static_cast<int>(specs.size());
            m.agent_a = static_cast<int>(i);
            m.agent_b = static_cast<int>(j);
            m.pair_id = pair;
            m.seed_index = s;
            m.repeat = r;
            m.orientation = o;
            m.game_seed = game_seed_for(c.master_seed, s);
            const auto agent_tag = tag_of("agent");
            m.agent_seed_a = derive_seed(c.master_seed, agent_tag, s, r, 0);
            m.agent_seed_b = derive_seed(c.master_seed, agent_tag, s, r, 1);
            m.match_id = "p" + std::to_string(pair) + "-s" + std::to_string(s) + "-r" + std::to_string(r) +
                         (o == Orientation::AFirst ? "-A" : "-B");
            specs.push_back(std::move(m));
          }
        }
      }
    }
  }
  return specs;
}

namespace {

std::string file_safe(const std::string& s) {
  std::string out;
  for (char ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_' || ch == '.';
    out += ok ? ch : '_';
    if (out.size() >= 48) break;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

MatchResult run_match(const ScheduleConfig& c, const MatchSpec& spec, const RunOptions& options) {
  MatchResult r;
  r.spec = spec;
  const AgentSpec& a = c.agents.at(spec.agent_a);
  const AgentSpec& b = c.agents.at(spec.agent_b);
  r.agent_a = a.name;
  r.agent_b = b.name;
  const auto started = std::chrono::steady_clock::now();
  try {
    const bool a_first = spec.orientation == Orientation::AFirst;
    GameSetup setup;
    setup.config = c.config;
    setup.policy = c.policy;
    setup.seed = spec.game_seed;
    setup.cards = c.cards;
    setup.cards_label = c.cards_label;
    setup.generator = c.generator;
    setup.warmup_grace_ms = c.warmup_grace_ms;
    setup.seat_labels = a_first ? std::array<std::string, 2>{a.name, b.name} : std::array<std::string, 2>{b.name, a.name};

    Budget budget;
    budget.per_turn_ms = c.config.battle_turn_ms;
    budget.first_turn_ms = std::max(c.config.battle_turn_ms,
                                    c.config.has_draft() ? c.config.draft_pick_ms : c.config.construction_ms);
    budget.mem_soft_bytes = static_cast<std::size_t>(c.config.mem_soft_bytes);
    budget.mem_hard_bytes = static_cast<std::size_t>(c.config.mem_hard_bytes);
    budget.warmup_grace_ms = c.warmup_grace_ms;
    budget.os_hard_limit = c.os_hard_limit;
    if (auto problem = budget.validate(); !problem.empty()) throw std::invalid_argument(problem);

    const std::array<const AgentSpec*, 2> seat_agents = a_first ? std::array{&a, &b} : std::array{&b, &a};
    const std::array<std::uint64_t, 2> seat_seeds = a_first ? std::array{spec.agent_seed_a, spec.agent_seed_b}
                                                            : std::array{spec.agent_seed_b, spec.agent_seed_a};
    const std::array<Side, 2> seat_side = a_first ? std::array{Side::A, Side::B} : std::array{Side::B, Side::A};
    std::array<std::unique_ptr<Controller>, 2> controllers;
    for (int p = 0; p < 2; ++p) {
      const AgentSpec& ag = *seat_agents[p];
      if (ag.builtin) {
        controllers[p] = std::make_unique<InProcessController>(make_builtin_agent(ag.name, seat_seeds[p]));
        continue;
      }
      const auto log = log_root() / file_safe(spec.schedule_id + "-" + spec.match_id) /
                       ((seat_side[p] == Side::A ? "a_" : "b_") + file_safe(ag.name) + ".stderr.txt");
      try {
        controllers[p] = std::make_unique<ProcessController>(ag.command, log, budget);
      } catch (const SpawnError& e) {
        r.winner = seat_side[1 - p];
        r.reason = EndReason::Crash;
        r.error = "agent " + ag.name + ": " + e.what();
        r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return r;
      }
    }

    const bool record = options.transcript_dir.has_value() || options.keep_transcripts;
    GameRecord g = play_game(setup, {controllers[0].get(), controllers[1].get()}, record);
    r.winner = g.winner == Winner::Draw ? Side::Draw : seat_side[g.winner == Winner::Player0 ? 0 : 1];
    r.reason = g.reason;
    r.turns = g.turns;
    r.final_hash = g.final_hash;
    r.timings_ms = std::move(g.timings_ms);
    const int seat_a = a_first ? 0 : 1;
    r.ignored_a = g.ignored_actions[seat_a];
    r.ignored_b = g.ignored_actions[1 - seat_a];
    r.parse_errors_a = g.parse_errors[seat_a];
    r.parse_errors_b = g.parse_errors[1 - seat_a];
    if (options.transcript_dir) {
      const auto dir = *options.transcript_dir / spec.schedule_id / spec.match_id;
      write_file(dir / "transcript.txt", g.transcript);
      std::string timings;
      char buf[32];
      for (double t : r.timings_ms) {
        std::snprintf(buf, sizeof buf, "%.3f\n", t);
        timings += buf;
      }
      write_file(dir / "timings.txt", timings);
    }
    if (options.keep_transcripts) r.transcript = std::move(g.transcript);
  } catch (const std::exception& e) {
    r.infrastructure_error = true;
    r.error = e.what();
  }
  r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return r;
}

std::vector<MatchResult> run_schedule(const ScheduleConfig& c, const std::vector<MatchSpec>& specs,
                                      const RunOptions& options) {
  std::vector<MatchResult> results(specs.size());
  const long n = static_cast<long>(specs.size());
  const int workers = std::max(1, options.workers);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long i = 0; i < n; ++i) results[static_cast<std::size_t>(i)] = run_match(c, specs[static_cast<std::size_t>(i)], options);
  return results;
}

std::vector<MatchResult> run_schedule_serial(const ScheduleConfig& c, const std::vector<MatchSpec>& specs,
                                             const RunOptions& options) {
  std::vector<MatchResult> results;
  results.reserve(specs.size());
  for (const auto& s : specs) results.push_back(run_match(c, s, options));
  return results;
}

std::vector<const MatchResult*> order_results(const std::vector<MatchResult>& results, Ordering ordering) {
  std::vector<const MatchResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const MatchResult* x, const MatchResult* y) { return x->spec.index < y->spec.index; });
  if (ordering == Ordering::Concatenated) return sorted;

  std::map<int, std::vector<const MatchResult*>> by_pair;
  for (const auto* r : sorted) by_pair[r->spec.pair_id].push_back(r);
  std::vector<const MatchResult*> out;
  out.reserve(sorted.size());
  for (std::size_t k = 0; out.size() < sorted.size(); ++k) {
    for (const auto& [pair, list] : by_pair) {
      if (k < list.size()) out.push_back(list[k]);
    }
  }
  return out;
}

WinRateTable aggregate(const std::vector<MatchResult>& results, Ordering ordering, std::optional<std::size_t> limit) {
  WinRateTable t;
  if (!results.empty()) t.schedule_id = results.front().spec.schedule_id;
  std::map<int, std::string> names;
  for (const auto& r : results) {
    if (r.spec.schedule_id != t.schedule_id)
      throw std::invalid_argument("results from different schedules: " + t.schedule_id + " and " + r.spec.schedule_id);
    names[r.spec.agent_a] = r.agent_a;
    names[r.spec.agent_b] = r.agent_b;
  }
  const int n = names.empty() ? 0 : names.rbegin()->first + 1;
  t.agents.resize(n);
  for (const auto& [i, name] : names) t.agents[i].name = name;
  t.wins.assign(n, std::vector<int>(n, 0));
  t.draws.assign(n, std::vector<int>(n, 0));

  auto ordered = order_results(results, ordering);
  if (limit && *limit < ordered.size()) ordered.resize(*limit);
  for (const auto* r : ordered) {
    if (r->infrastructure_error) continue;
    const int a = r->spec.agent_a;
    const int b = r->spec.agent_b;
    ++t.games;
    ++t.agents[a].games;
    ++t.agents[b].games;
    switch (r->winner) {
      case Side::A:
        ++t.agents[a].wins;
        ++t.agents[b].losses;
        ++t.wins[a][b];
        break;
      case Side::B:
        ++t.agents[b].wins;
        ++t.agents[a].losses;
        ++t.wins[b][a];
        break;
      case Side::Draw:
        ++t.agents[a].draws;
        ++t.agents[b].draws;
        ++t.draws[a][b];
        ++t.draws[b][a];
        break;
    }
  }
  return t;
}

std::string format_win_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", rate);
  return buf;
}

std::string format_table(const WinRateTable& t) {
  std::size_t width = 5;
  for (const auto& a : t.agents) width = std::max(width, a.name.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %7s %7s %7s %7s %8s\n", static_cast<int>(width), "agent", "games", "wins",
                "losses", "draws", "winrate");
  out << buf;
  std::vector<std::size_t> order(t.agents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&t](std::size_t x, std::size_t y) { return t.agents[x].win_rate() > t.agents[y].win_rate(); });
  for (std::size_t i : order) {
    const auto& a = t.agents[i];
    std::snprintf(buf, sizeof buf, "%-*s %7d %7d %7d %7d %7s%%\n", static_cast<int>(width), a.name.c_str(), a.games,
                  a.wins, a.losses, a.draws, format_win_rate(a.win_rate()).c_str());
    out << buf;
  }
  return out.str();
}

std::string summary_tsv(const WinRateTable& t) {
  std::ostringstream out;
  out << "schedule\t" << t.schedule_id << "\n";
  out << "agent\tgames\twins\tlosses\tdraws\twin_rate\n";
  for (const auto& a : t.agents) {
    out << a.name << '\t' << a.games << '\t' << a.wins << '\t' << a.losses << '\t' << a.draws << '\t'
        << format_win_rate(a.win_rate()) << '\n';
  }
  out << "\nagent\topponent\twins\tlosses\tdraws\n";
  for (std::size_t i = 0; i < t.agents.size(); ++i) {
    for (std::size_t j = 0; j < t.agents.size(); ++j) {
      if (i == j) continue;
      out << t.agents[i].name << '\t' << t.agents[j].name << '\t' << t.wins[i][j] << '\t' << t.wins[j][i] << '\t'
          << t.draws[i][j] << '\n';
    }
  }
  return out.str();
}

std::string raw_records_jsonl(const std::vector<MatchResult>& results) {
  std::string out;
  for (const auto* r : order_results(results, Ordering::Concatenated)) {
    nlohmann::ordered_json j;
    j["match"] = r->spec.match_id;
    j["schedule"] = r->spec.schedule_id;
    j["agent_a"] = r->agent_a;
    j["agent_b"] = r->agent_b;
    j["seed"] = r->spec.game_seed;
    j["seed_index"] = r->spec.seed_index;
    j["repeat"] = r->spec.repeat;
    j["orientation"] = to_string(r->spec.orientation);
    j["winner"] = to_string(r->winner);
    j["reason"] = to_string(r->reason);
    j["turns"] = r->turns;
    j["duration_ms"] = std::round(r->duration_ms * 1000.0) / 1000.0;
    if (r->infrastructure_error) j["error"] = r->error;
    out += j.dump();
    out += '\n';
  }
  return out;
}

ExportPaths export_results(const std::vector<MatchResult>& results, const WinRateTable& table,
                           const std::filesystem::path& dir, bool compress) {
  std::filesystem::create_directories(dir);
  ExportPaths paths;
  const std::string raw = raw_records_jsonl(results);
  if (compress) {
    paths.raw = dir / "raw.jsonl.gz";
    gzFile f = gzopen(paths.raw.c_str(), "wb9");
    if (!f) throw std::runtime_error("cannot write " + paths.raw.string());
    const int wrote = raw.empty() ? 0 : gzwrite(f, raw.data(), static_cast<unsigned>(raw.size()));
    const int closed = gzclose(f);
    if ((!raw.empty() && wrote <= 0) || closed != Z_OK) throw std::runtime_error("cannot write " + paths.raw.string());
  } else {
    paths.raw = dir / "raw.jsonl";
    write_file(paths.raw, raw);
  }
  paths.summary = dir / "summary.tsv";
  write_file(paths.summary, summary_tsv(table));
  return paths;
}

std::string read_raw_records(const std::filesystem::path& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::string out;
  char buf[65536];
  int got;
  while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
  gzclose(f);
  if (got < 0) throw std::runtime_error("cannot decompress " + path.string());
  return out;
}

}  // namespace locm
