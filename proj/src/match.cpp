#include "locm/match.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "locm/deck_phase.hpp"
#include "locm/rng.hpp"

namespace locm {

const CardSet& GameSetup::draft_set() const { return cards ? *cards : default_card_set(); }

CardSet construction_pool(const GameSetup& setup) {
  CardSet pool = generate_pool(setup.generator, derive_seed(setup.seed, tag_of("pool")));
  pool.name = "pool";
  return pool;
}

std::uint64_t padding_seed(std::uint64_t game_seed, int seat) {
  return derive_seed(game_seed, tag_of("padding"), static_cast<std::uint64_t>(seat));
}

std::uint64_t shuffle_seed(std::uint64_t game_seed, int seat) {
  return derive_seed(game_seed, tag_of("deck"), static_cast<std::uint64_t>(seat));
}

TurnReply InProcessController::request(const AgentView& view, const std::string&, int) {
  TurnReply r;
  r.actions = agent_->act(view);
  return r;
}

ProcessController::ProcessController(const std::string& command, const std::filesystem::path& stderr_log,
                                     const Budget& budget)
    : handle_(AgentHandle::spawn(command, stderr_log, budget)) {}

TurnReply ProcessController::request(const AgentView&, const std::string& input, int budget_ms) {
  MoveResult m = handle_.request_move(input, budget_ms);
  TurnReply r;
  r.status = m.status;
  r.text = std::move(m.line);
  r.elapsed_ms = m.elapsed_ms;
  return r;
}

TurnReply ScriptedController::request(const AgentView&, const std::string&, int) {
  if (script_->replies.empty()) {
    TurnReply r;
    r.status = MoveStatus::Crash;
    return r;
  }
  TurnReply r = std::move(script_->replies.front());
  script_->replies.pop_front();
  return r;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct IntRule {
  const char* name;
  int RulesetConfig::*field;
};

constexpr IntRule kIntRules[] = {
    {"lanes", &RulesetConfig::lanes},
    {"lane-size", &RulesetConfig::lane_size},
    {"max-mana", &RulesetConfig::max_mana},
    {"hand-limit", &RulesetConfig::hand_limit},
    {"draft-turns", &RulesetConfig::draft_turns},
    {"draft-options", &RulesetConfig::draft_options},
    {"pool-size", &RulesetConfig::pool_size},
    {"deck-size", &RulesetConfig::deck_size},
    {"max-copies", &RulesetConfig::max_copies},
    {"starting-health", &RulesetConfig::starting_health},
    {"rune-count", &RulesetConfig::rune_count},
    {"rune-step", &RulesetConfig::rune_step},
    {"deck-empty-turn", &RulesetConfig::deck_empty_turn},
    {"hard-cap", &RulesetConfig::max_turns_hard_cap},
    {"initial-draw", &RulesetConfig::initial_draw},
    {"health-per-bonus-draw", &RulesetConfig::health_per_bonus_draw},
    {"empty-deck-damage", &RulesetConfig::empty_deck_damage},
};

EndReason forfeit_reason(MoveStatus s) {
  switch (s) {
    case MoveStatus::Timeout: return EndReason::Timeout;
    case MoveStatus::Disqualified: return EndReason::Disqualified;
    default: return EndReason::Crash;
  }
}

std::optional<MoveStatus> parse_move_status(std::string_view s) {
  for (MoveStatus m : {MoveStatus::Ok, MoveStatus::Timeout, MoveStatus::Crash, MoveStatus::Disqualified,
                       MoveStatus::NotRunning}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string winner_text(Winner w) {
  switch (w) {
    case Winner::Player0: return "0";
    case Winner::Player1: return "1";
    case Winner::Draw: return "draw";
    case Winner::None: break;
  }
  return "none";
}

class Game {
 public:
  Game(const GameSetup& setup, const std::array<Controller*, 2>& seats, bool record)
      : setup_(setup), cfg_(setup.config), seats_(seats), record_(record) {}

  GameRecord run() {
    header();
    std::array<std::vector<Card>, 2> decks;
    const bool built = cfg_.has_draft() ? draft(decks) : construct(decks);
    if (built) battle(decks);
    for (int p = 0; p < 2; ++p) {
      seats_[p]->close();
      out_.soft_warnings[p] = seats_[p]->soft_warnings();
    }
    out_.winner = state_.winner;
    out_.reason = state_.end_reason;
    out_.turns = state_.phase == Phase::Finished && in_battle_ ? state_.turn : 0;
    out_.final_hash = state_hash(state_);
    line("result winner " + winner_text(out_.winner) + " reason " + std::string(to_string(out_.reason)) + " turns " +
         std::to_string(out_.turns));
    line("final-hash " + hex64(out_.final_hash));
    out_.transcript = std::move(text_);
    out_.final_state = std::move(state_);
    return std::move(out_);
  }

 private:
  void line(const std::string& s) {
    if (!record_) return;
    text_ += s;
    text_ += '\n';
  }

  void header() {
    line("locm-transcript 1");
    line("version " + std::string(to_string(cfg_.version)));
    line("seed " + std::to_string(setup_.seed));
    line(std::string("policy ") + (setup_.policy == Policy::Strict ? "strict" : "lenient"));
    if (cfg_.has_draft()) line("cards " + setup_.cards_label + " " + hex64(fingerprint(setup_.draft_set())));
    for (int p = 0; p < 2; ++p) line("seat " + std::to_string(p) + " " + setup_.seat_labels[p]);
    for (const auto& r : kIntRules) line(std::string("rule ") + r.name + " " + std::to_string(cfg_.*r.field));
    line(std::string("rule second-player-bonus-mana ") + (cfg_.second_player_bonus_mana ? "1" : "0"));
    line("rule health-cap " + (cfg_.health_cap ? std::to_string(*cfg_.health_cap) : std::string("none")));
    if (!cfg_.has_draft()) {
      std::istringstream params(setup_.generator.format());
      std::string l;
      while (std::getline(params, l)) {
        if (!l.empty() && l[0] != '#') line("generator " + l);
      }
    }
  }

  void flush_events() {
    if (!record_) return;
    for (const auto& e : log_) line("= " + to_string(e));
    log_.clear();
  }

  void forfeit(int p, EndReason reason) {
    finish(state_, winner_for(1 - p), reason, record_ ? &log_ : nullptr);
    flush_events();
  }

  // Sends the view to seat p. nullopt when the seat forfeited.
  std::optional<ParseResult<std::vector<Action>>> ask(int p, Phase phase, int budget_ms) {
    const AgentView view = make_view(state_, p);
    std::string input;
    if (record_ || seats_[p]->wants_text()) input = render_view(view);
    if (record_) {
      std::size_t start = 0;
      while (start < input.size()) {
        const std::size_t nl = input.find('\n', start);
        line("> " + input.substr(start, nl - start));
        start = nl == std::string::npos ? input.size() : nl + 1;
      }
    }
    TurnReply reply = seats_[p]->request(view, input, budget_ms);
    out_.timings_ms.push_back(reply.elapsed_ms);
    if (reply.status != MoveStatus::Ok) {
      line("< !" + std::string(to_string(reply.status)));
      forfeit(p, forfeit_reason(reply.status));
      return std::nullopt;
    }
    if (reply.actions) {
      if (record_) line("< " + render_actions(*reply.actions, cfg_.version));
      return ParseResult<std::vector<Action>>(std::move(*reply.actions));
    }
    line("< " + reply.text);
    return parse_agent_output(reply.text, phase, cfg_.version, setup_.policy);
  }

  void deck_phase_state(Phase phase) {
    state_.config = cfg_;
    state_.phase = phase;
    for (auto& pl : state_.players) {
      pl.health = cfg_.starting_health;
      pl.runes = cfg_.uses_runes() ? cfg_.rune_count : 0;
    }
  }

  bool draft(std::array<std::vector<Card>, 2>& decks) {
    deck_phase_state(Phase::Draft);
    DraftState d = start_draft(setup_.draft_set(), setup_.seed, cfg_);
    while (!d.complete()) {
      state_.offered = d.options;
      const int turn = d.turn;
      for (int p = 0; p < 2; ++p) {
        state_.players[p].deck = d.picks[p];
        line("turn " + std::to_string(turn) + " player " + std::to_string(p) + " draft");
        auto res = ask(p, Phase::Draft, cfg_.draft_pick_ms);
        if (!res) return false;
        int index = -1;
        if (auto* err = std::get_if<ParseError>(&*res)) {
          ++out_.parse_errors[p];
          line("= parse-error " + err->describe());
          if (setup_.policy == Policy::Strict) {
            forfeit(p, EndReason::InvalidStrict);
            return false;
          }
        } else {
          for (const auto& a : std::get<std::vector<Action>>(*res)) {
            if (const auto* pick = std::get_if<PickAction>(&a)) {
              index = pick->index;
              break;
            }
          }
        }
        const PickOutcome o = apply_pick(d, p, index, setup_.policy);
        if (!o.accepted) {
          line("= rejected pick " + std::to_string(index));
          forfeit(p, EndReason::InvalidStrict);
          return false;
        }
        if (o.fell_back) ++out_.fallbacks[p];
        line("= pick " + std::to_string(o.card.number) + (o.fell_back ? " fallback" : ""));
      }
    }
    decks = d.picks;
    return true;
  }

  bool construct(std::array<std::vector<Card>, 2>& decks) {
    deck_phase_state(Phase::Construction);
    ConstructionState cs{construction_pool(setup_), {}};
    state_.offered = cs.pool.cards;
    line("pool " + hex64(fingerprint(cs.pool)));
    for (int p = 0; p < 2; ++p) {
      line("turn 0 player " + std::to_string(p) + " construction");
      auto res = ask(p, Phase::Construction, cfg_.construction_ms);
      if (!res) return false;
      std::vector<int> picks;
      if (auto* err = std::get_if<ParseError>(&*res)) {
        ++out_.parse_errors[p];
        line("= parse-error " + err->describe());
        if (setup_.policy == Policy::Strict) {
          forfeit(p, EndReason::InvalidStrict);
          return false;
        }
      } else {
        for (const auto& a : std::get<std::vector<Action>>(*res)) {
          if (const auto* c = std::get_if<ChooseAction>(&a)) picks = c->card_numbers;
        }
      }
      const ChoiceOutcome o = apply_choice(cs, p, picks, cfg_, setup_.policy, padding_seed(setup_.seed, p));
      if (!o.accepted) {
        line("= rejected " + o.reason);
        forfeit(p, EndReason::InvalidStrict);
        return false;
      }
      if (!o.dropped.empty()) {
        out_.fallbacks[p] += static_cast<int>(o.dropped.size());
        std::string s = "= dropped";
        for (int n : o.dropped) s += " " + std::to_string(n);
        line(s);
      }
      if (o.padded) line("= padded " + std::to_string(o.padded));
      std::string s = "= deck";
      for (const auto& c : o.deck) s += " " + std::to_string(c.number);
      line(s);
      decks[p] = o.deck;
    }
    return true;
  }

  void battle(std::array<std::vector<Card>, 2>& decks) {
    for (int p = 0; p < 2; ++p) decks[p] = finalize_deck(std::move(decks[p]), shuffle_seed(setup_.seed, p));
    state_ = GameState::start_battle(cfg_, std::move(decks[0]), std::move(decks[1]));
    in_battle_ = true;
    TransitionLog* log = record_ ? &log_ : nullptr;
    std::array<bool, 2> first = {true, true};
    std::vector<Action> actions;
    while (true) {
      const int p = state_.active;
      line("turn " + std::to_string(state_.turn) + " player " + std::to_string(p) + " battle");
      begin_turn(state_, log);
      settle(state_, log);
      flush_events();
      if (state_.finished()) return;

      const int budget = cfg_.battle_turn_ms + (first[p] ? setup_.warmup_grace_ms : 0);
      first[p] = false;
      auto res = ask(p, Phase::Battle, budget);
      if (!res) return;
      actions.clear();
      if (auto* err = std::get_if<ParseError>(&*res)) {
        ++out_.parse_errors[p];
        line("= parse-error " + err->describe());
        if (setup_.policy == Policy::Strict) {
          forfeit(p, EndReason::InvalidStrict);
          return;
        }
      } else {
        actions = std::move(std::get<std::vector<Action>>(*res));
      }
      for (const auto& a : actions) {
        if (std::holds_alternative<PassAction>(a)) break;
        const ApplyResult r = apply_action(state_, a, setup_.policy, log);
        if (r.status == ApplyStatus::Applied) ++out_.actions_applied;
        else ++out_.ignored_actions[p];
        if (state_.finished()) break;
      }
      flush_events();
      if (state_.finished()) return;
      end_turn(state_, log);
      settle(state_, log);
      flush_events();
      if (state_.finished()) return;
    }
  }

  const GameSetup& setup_;
  const RulesetConfig& cfg_;
  std::array<Controller*, 2> seats_;
  bool record_;
  bool in_battle_ = false;
  GameState state_;
  TransitionLog log_;
  std::string text_;
  GameRecord out_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    lines.push_back(std::move(l));
  }
  return lines;
}

std::uint64_t parse_u64(const std::string& s, int base, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error(std::string("bad ") + what + ": " + s);
  return v;
}

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::runtime_error(std::string("bad ") + what + ": " + s);
  return v;
}

}  // namespace

GameRecord play_game(const GameSetup& setup, const std::array<Controller*, 2>& seats, bool record_transcript) {
  return Game(setup, seats, record_transcript).run();
}

ParsedTranscript parse_transcript(const std::string& text, std::shared_ptr<const CardSet> cards) {
  ParsedTranscript out;
  out.script = std::make_shared<ReplyScript>();
  GameSetup& setup = out.setup;
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "locm-transcript 1") throw std::runtime_error("not a transcript");

  std::optional<Version> version;
  std::string cards_label;
  std::optional<std::uint64_t> cards_fp;
  std::string generator_text;
  std::vector<std::pair<std::string, std::string>> rules;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    const auto sp = l.find(' ');
    const std::string key = l.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : l.substr(sp + 1);
    if (key == "<") {
      TurnReply r;
      if (!rest.empty() && rest[0] == '!') {
        const auto st = parse_move_status(rest.substr(1));
        if (!st) throw std::runtime_error("bad reply status: " + rest);
        r.status = *st;
      } else {
        r.text = rest;
      }
      out.script->replies.push_back(std::move(r));
    } else if (key == "version") {
      Version v;
      if (!parse_version(rest, v)) throw std::runtime_error("bad version: " + rest);
      version = v;
    } else if (key == "seed") {
      setup.seed = parse_u64(rest, 10, "seed");
    } else if (key == "policy") {
      if (rest != "strict" && rest != "lenient") throw std::runtime_error("bad policy: " + rest);
      setup.policy = rest == "strict" ? Policy::Strict : Policy::Lenient;
    } else if (key == "cards") {
      const auto last = rest.rfind(' ');
      if (last == std::string::npos) throw std::runtime_error("bad cards line");
      cards_label = rest.substr(0, last);
      cards_fp = parse_u64(rest.substr(last + 1), 16, "fingerprint");
    } else if (key == "seat") {
      const auto s2 = rest.find(' ');
      const int seat = parse_int(rest.substr(0, s2), "seat");
      if (seat < 0 || seat > 1) throw std::runtime_error("bad seat");
      setup.seat_labels[seat] = s2 == std::string::npos ? "" : rest.substr(s2 + 1);
    } else if (key == "rule") {
      const auto s2 = rest.find(' ');
      if (s2 == std::string::npos) throw std::runtime_error("bad rule line");
      rules.emplace_back(rest.substr(0, s2), rest.substr(s2 + 1));
    } else if (key == "generator") {
      generator_text += rest + "\n";
    }
  }
  if (!version) throw std::runtime_error("transcript has no version");
  setup.config = RulesetConfig::for_version(*version);
  for (const auto& [name, value] : rules) {
    bool known = false;
    for (const auto& r : kIntRules) {
      if (name == r.name) {
        setup.config.*r.field = parse_int(value, r.name);
        known = true;
      }
    }
    if (name == "second-player-bonus-mana") {
      setup.config.second_player_bonus_mana = value == "1";
      known = true;
    } else if (name == "health-cap") {
      setup.config.health_cap = value == "none" ? std::nullopt : std::optional<int>(parse_int(value, "health cap"));
      known = true;
    }
    if (!known) throw std::runtime_error("unknown rule: " + name);
  }
  if (!generator_text.empty()) setup.generator = GeneratorParams::parse(generator_text);
  if (setup.config.has_draft()) {
    if (!cards_fp) throw std::runtime_error("transcript has no card set line");
    setup.cards_label = cards_label;
    if (!cards) {
      if (cards_label == "default") {
        cards = std::shared_ptr<const CardSet>(std::shared_ptr<const CardSet>{}, &default_card_set());
      } else {
        cards = std::make_shared<const CardSet>(load_card_set(cards_label, setup.config.version));
      }
    }
    if (fingerprint(*cards) != *cards_fp) throw std::runtime_error("card set fingerprint mismatch for " + cards_label);
    setup.cards = std::move(cards);
  }
  return out;
}

ReplayReport replay_transcript(const std::string& text, std::shared_ptr<const CardSet> cards) {
  ParsedTranscript parsed = parse_transcript(text, std::move(cards));
  ScriptedController a(parsed.script);
  ScriptedController b(parsed.script);
  ReplayReport report;
  report.record = play_game(parsed.setup, {&a, &b}, true);
  const auto want = split_lines(text);
  const auto got = split_lines(report.record.transcript);
  const std::size_t n = std::max(want.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string* w = i < want.size() ? &want[i] : nullptr;
    const std::string* g = i < got.size() ? &got[i] : nullptr;
    if (!w || !g || *w != *g) {
      report.line = i + 1;
      report.expected = w ? *w : "<end of transcript>";
      report.actual = g ? *g : "<end of simulation>";
      return report;
    }
  }
  report.verified = true;
  return report;
}

}  // namespace locm
