#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locm/card_source.hpp"
#include "locm/ruleset.hpp"

namespace locm {

// Options for one draft turn. Sampled uniformly without replacement within
// the turn, independently across turns; a pure function of its arguments.
std::vector<Card> draft_options(const CardSet& set, std::uint64_t seed, int turn, int count = 3);

struct DraftState {
  const CardSet* set = nullptr;
  std::uint64_t seed = 0;
  int turns = 30;
  int options_per_turn = 3;
  int turn = 0;
  std::vector<Card> options;
  std::array<std::vector<Card>, 2> picks;

  bool complete() const { return turn >= turns; }
};

DraftState start_draft(const CardSet& set, std::uint64_t seed, const RulesetConfig& config);

struct PickOutcome {
  bool accepted = true;
  bool fell_back = false;
  Card card;
};

// Adds the chosen option to the player's deck; the turn advances once both
// players have picked. Out-of-range indices pick option 0 under Lenient and
// are rejected (nothing changes) under Strict.
PickOutcome apply_pick(DraftState& draft, int player, int index, Policy policy);

struct ConstructionState {
  CardSet pool;
  std::array<std::vector<int>, 2> picks;
};

struct ChoiceOutcome {
  bool accepted = true;
  std::string reason;
  std::vector<int> dropped;
  int padded = 0;
  std::vector<Card> deck;
};

// Validates a construction choice, pads it to a full deck with seeded random
// legal picks and stores the picks. Under Strict, any invalid entry rejects
// the whole choice; under Lenient offending entries are dropped.
ChoiceOutcome apply_choice(ConstructionState& construction, int player, const std::vector<int>& picks,
                           const RulesetConfig& config, Policy policy, std::uint64_t padding_seed);

// Deterministic shuffle; element 0 is drawn first.
std::vector<Card> finalize_deck(std::vector<Card> deck, std::uint64_t seed);

}  // namespace locm
