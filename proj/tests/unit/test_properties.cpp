#include <gtest/gtest.h>

#include <algorithm>

#include "locm/agents.hpp"
#include "locm/card_source.hpp"
#include "locm/deck_phase.hpp"
#include "locm/match.hpp"
#include "locm/protocol.hpp"
#include "locm/rng.hpp"
#include "locm/selfplay.hpp"
#include "oracle/combat_matrix.hpp"
#include "support/random_games.hpp"

using namespace locm;

using namespace locm::test;

TEST(Properties, InvariantsHoldAfterEveryTransition) {
  Rng rng(11);
  long states = 0;
  for (int g = 0; g < 600; ++g) {
    GameState s = random_start(rng, version_of(g));
    const bool ok = random_game(rng, s, nullptr, [&](const GameState& st) {
      ++states;
      const auto problems = audit_state(st);
      ASSERT_TRUE(problems.empty()) << "game " << g << ": " << problems.front();
      for (const auto& p : st.players) {
        ASSERT_LE(static_cast<int>(p.hand.size()), st.config.hand_limit);
        ASSERT_LE(p.max_mana, st.config.max_mana);
        for (int lane = 0; lane < st.config.lanes; ++lane) ASSERT_LE(p.lane_count(lane), st.config.lane_size);
      }
    });
    EXPECT_TRUE(ok);
    EXPECT_TRUE(s.finished());
  }
  EXPECT_GT(states, 10000);
}

TEST(Properties, TransitionLogReplaysToPostState) {
  Rng rng(12);
  for (int g = 0; g < 300; ++g) {
    GameState s = random_start(rng, version_of(g));
    const GameState pre = s;
    TransitionLog log;
    random_game(rng, s, &log, [](const GameState&) {});
    GameState replayed = pre;
    for (const auto& e : log) apply_event(replayed, e);
    ASSERT_EQ(replayed, s) << "game " << g;
    EXPECT_EQ(state_hash(replayed), state_hash(s));
  }
}

TEST(Properties, FaceDamageEqualsHealthDelta) {
  Rng rng(13);
  for (int g = 0; g < 200; ++g) {
    GameState s = random_start(rng, version_of(g));
    TransitionLog log;
    const std::array<int, 2> start{s.players[0].health, s.players[1].health};
    random_game(rng, s, &log, [](const GameState&) {});
    std::array<int, 2> sum{};
    for (const auto& e : log) {
      if (e.kind == EventKind::HealthChange) sum[e.player] += e.a;
    }
    EXPECT_EQ(start[0] + sum[0], s.players[0].health);
    EXPECT_EQ(start[1] + sum[1], s.players[1].health);
  }
}

TEST(Properties, RuneCountOnlyDecreases) {
  Rng rng(14);
  for (int g = 0; g < 200; ++g) {
    GameState s = random_start(rng, Version::V12);
    std::array<int, 2> runes{5, 5};
    random_game(rng, s, nullptr, [&](const GameState& st) {
      for (int p = 0; p < 2; ++p) {
        ASSERT_LE(st.players[p].runes, runes[p]);
        runes[p] = st.players[p].runes;
        if (!st.finished() && st.players[p].health > 0) {
          ASSERT_GT(st.players[p].health, 5 * st.players[p].runes);
        }
      }
    });
  }
}

TEST(Properties, CombatMatchesOracle) {
  const auto report = oracle::run_combat_matrix();
  EXPECT_EQ(report.cases, 64L * 64 * 4 * 3 * 4 * 3);
  EXPECT_EQ(report.mismatches, 0) << report.first_mismatch;
}

TEST(Properties, BuiltinsNeverTriggerIgnoredActions) {
  const auto& names = builtin_agent_names();
  long games = 0;
  long ignored = 0;
  long parse_errors = 0;
  long fallbacks = 0;
  int pair = 0;
  // Cheap agents play most games; greedy gets a smaller share.
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      const bool heavy = names[i] == "greedy" || names[j] == "greedy";
      const int count = heavy ? 150 : 600;
      for (int k = 0; k < count; ++k, ++games) {
        GameSetup setup;
        const Version v = version_of(k + pair);
        setup.config = RulesetConfig::for_version(v);
        setup.seed = derive_seed(99, pair, k);
        InProcessController a(make_builtin_agent(names[i], setup.seed + 1));
        InProcessController b(make_builtin_agent(names[j], setup.seed + 2));
        const GameRecord r = play_game(setup, {&a, &b}, false);
        ASSERT_TRUE(r.reason == EndReason::HealthZero || r.reason == EndReason::HardCap)
            << names[i] << " vs " << names[j] << ": " << to_string(r.reason);
        ignored += r.ignored_actions[0] + r.ignored_actions[1];
        parse_errors += r.parse_errors[0] + r.parse_errors[1];
        fallbacks += r.fallbacks[0] + r.fallbacks[1];
      }
      ++pair;
    }
  }
  EXPECT_GE(games, 10000);
  EXPECT_EQ(ignored, 0);
  EXPECT_EQ(parse_errors, 0);
  EXPECT_EQ(fallbacks, 0);
}

TEST(Properties, ViewRoundTripsThroughText) {
  Rng rng(15);
  long checked = 0;
  for (int g = 0; checked < 10000; ++g) {
    GameState s = random_start(rng, version_of(g));
    random_game(rng, s, nullptr, [&](const GameState& st) {
      if (st.finished()) return;
      const AgentView view = make_view(st, st.active);
      if (!self_describing(view)) return;
      const auto back = parse_turn_input(render_view(view), st.config.version == Version::V10);
      ASSERT_TRUE(std::holds_alternative<AgentView>(back)) << std::get<ParseError>(back).describe();
      ASSERT_EQ(std::get<AgentView>(back), view);
      ++checked;
    });
  }
}

TEST(Properties, ActionListsRoundTrip) {
  Rng rng(16);
  for (int i = 0; i < 20000; ++i) {
    const Version v = version_of(i);
    const Phase phase = i % 5 == 0 ? (v == Version::V15 ? Phase::Construction : Phase::Draft) : Phase::Battle;
    std::vector<Action> list;
    if (phase == Phase::Construction) {
      list.push_back(random_action(rng, phase, v));
    } else {
      for (int n = phase == Phase::Draft ? 1 : rng.range(1, 8); n > 0; --n) list.push_back(random_action(rng, phase, v));
    }
    const std::string text = render_actions(list, v);
    const auto back = parse_agent_output(text, phase, v, Policy::Strict);
    ASSERT_TRUE(std::holds_alternative<std::vector<Action>>(back)) << text;
    ASSERT_EQ(std::get<std::vector<Action>>(back), list) << text;
    ASSERT_EQ(render_actions(std::get<std::vector<Action>>(back), v), text);
  }
}

TEST(Properties, ParserIsTotal) {
  Rng rng(17);
  static constexpr std::string_view kAlphabet = "SUMONATCKPIHE 0123456789-;\n\r\t";
  long errors = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    std::string bytes(rng.below(24), '\0');
    const bool structured = i % 2 == 0;
    for (auto& c : bytes) {
      c = structured ? kAlphabet[rng.below(kAlphabet.size())] : static_cast<char>(rng.below(256));
    }
    const Phase phase = static_cast<Phase>(rng.below(3));
    const auto r = parse_agent_output(bytes, phase, version_of(i), rng.chance(0.5) ? Policy::Strict : Policy::Lenient);
    if (auto* e = std::get_if<ParseError>(&r)) {
      ++errors;
      ASSERT_LE(e->offset, bytes.size());
    }
    if (i % 10 == 0) (void)parse_turn_input(bytes);
  }
  EXPECT_GT(errors, 0);
}

TEST(Properties, InputParserSurvivesMutatedBlocks) {
  Rng rng(18);
  GameState s = random_start(rng, Version::V15);
  begin_turn(s);
  const std::string good = render_turn_input(s, 0);
  for (int i = 0; i < 100000; ++i) {
    std::string bad = good;
    for (int k = rng.range(1, 4); k > 0; --k) bad[rng.below(bad.size())] = static_cast<char>(rng.below(256));
    (void)parse_turn_input(bad, rng.chance(0.5));
  }
}

TEST(Properties, RenderLeaksNoHiddenInformation) {
  Rng rng(19);
  int checked = 0;
  for (int g = 0; g < 200; ++g) {
    GameState s = random_start(rng, version_of(g));
    random_game(rng, s, nullptr, [&](const GameState& st) {
      if (st.finished() || rng.below(4) != 0) return;
      const int me = st.active;
      GameState other = st;
      auto& opp = other.players[1 - me];
      for (auto& h : opp.hand) h.card = default_card_set().cards[rng.below(160)];
      rng.shuffle(opp.hand);
      rng.shuffle(opp.deck);
      rng.shuffle(other.players[me].deck);
      for (auto& c : opp.deck) c = default_card_set().cards[rng.below(160)];
      ASSERT_EQ(render_turn_input(other, me), render_turn_input(st, me));
      ++checked;
    });
  }
  EXPECT_GT(checked, 1000);
}

TEST(Properties, DraftStreamsArePureFunctionsOfSeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DraftState a = start_draft(default_card_set(), seed, RulesetConfig::for_version(Version::V12));
    DraftState b = start_draft(default_card_set(), seed, RulesetConfig::for_version(Version::V12));
    Rng ra(seed), rb(seed + 1);
    while (!a.complete()) {
      ASSERT_EQ(a.options, b.options);
      apply_pick(a, 0, static_cast<int>(ra.below(3)), Policy::Strict);
      apply_pick(a, 1, static_cast<int>(ra.below(3)), Policy::Strict);
      apply_pick(b, 0, static_cast<int>(rb.below(3)), Policy::Strict);
      apply_pick(b, 1, static_cast<int>(rb.below(3)), Policy::Strict);
    }
  }
}

TEST(Properties, SelfPlaySerialEqualsParallel) {
  for (Version v : {Version::V10, Version::V12, Version::V15}) {
    const auto serial = simulate_random_games_serial(v, 5, 0, 400);
    const auto parallel = simulate_random_games_parallel(v, 5, 0, 400, 4);
    EXPECT_EQ(serial, parallel);
    EXPECT_EQ(serial.games, 400);
    EXPECT_EQ(serial.outcomes[0] + serial.outcomes[1] + serial.outcomes[2], 400);
  }
}
