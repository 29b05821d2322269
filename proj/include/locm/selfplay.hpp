#pragma once

#include <array>
#include <cstdint>

#include "locm/card.hpp"

namespace locm {

// Totals of a batch of in-process random-vs-random games. Independent of the
// order games are played in, so serial and parallel runs compare equal.
struct SelfPlayStats {
  long games = 0;
  long actions = 0;
  long turns = 0;
  // Wins of seat 0, seat 1, and draws.
  std::array<long, 3> outcomes{};
  // Wrapping sum of final state hashes.
  std::uint64_t checksum = 0;

  friend bool operator==(const SelfPlayStats&, const SelfPlayStats&) = default;
};

// Game i uses seed derive_seed(master, "selfplay", i) for i in [first, first + count).
SelfPlayStats simulate_random_games_serial(Version version, std::uint64_t master_seed, long first, long count);
SelfPlayStats simulate_random_games_parallel(Version version, std::uint64_t master_seed, long first, long count,
                                             int threads);

}  // namespace locm
