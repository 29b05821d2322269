#include "locm/selfplay.hpp"

#include "locm/agents.hpp"
#include "locm/match.hpp"
#include "locm/rng.hpp"

namespace locm {

namespace {

GameRecord play_one(Version version, std::uint64_t master_seed, long i) {
  const std::uint64_t seed = derive_seed(master_seed, tag_of("selfplay"), static_cast<std::uint64_t>(i));
  GameSetup setup;
  setup.config = RulesetConfig::for_version(version);
  setup.seed = seed;
  setup.seat_labels = {"random", "random"};
  InProcessController a(make_builtin_agent("random", derive_seed(seed, tag_of("agent"), 0)));
  InProcessController b(make_builtin_agent("random", derive_seed(seed, tag_of("agent"), 1)));
  return play_game(setup, {&a, &b}, false);
}

int outcome_slot(Winner w) {
  switch (w) {
    case Winner::Player0: return 0;
    case Winner::Player1: return 1;
    default: return 2;
  }
}

}  // namespace

SelfPlayStats simulate_random_games_serial(Version version, std::uint64_t master_seed, long first, long count) {
  SelfPlayStats s;
  for (long i = first; i < first + count; ++i) {
    const GameRecord g = play_one(version, master_seed, i);
    ++s.games;
    s.actions += g.actions_applied;
    s.turns += g.turns;
    ++s.outcomes[outcome_slot(g.winner)];
    s.checksum += g.final_hash;
  }
  return s;
}

SelfPlayStats simulate_random_games_parallel(Version version, std::uint64_t master_seed, long first, long count,
                                             int threads) {
  long games = 0, actions = 0, turns = 0, w0 = 0, w1 = 0, draws = 0;
  std::uint64_t checksum = 0;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) \
    reduction(+ : games, actions, turns, w0, w1, draws, checksum)
  for (long i = first; i < first + count; ++i) {
    const GameRecord g = play_one(version, master_seed, i);
    ++games;
    actions += g.actions_applied;
    turns += g.turns;
    const int slot = outcome_slot(g.winner);
    w0 += slot == 0;
    w1 += slot == 1;
    draws += slot == 2;
    checksum += g.final_hash;
  }
  SelfPlayStats s;
  s.games = games;
  s.actions = actions;
  s.turns = turns;
  s.outcomes = {w0, w1, draws};
  s.checksum = checksum;
  return s;
}

}  // namespace locm
