#include "locm/deck_phase.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "locm/rng.hpp"

namespace locm {

std::vector<Card> draft_options(const CardSet& set, std::uint64_t seed, int turn, int count) {
  if (static_cast<int>(set.size()) < count) throw std::invalid_argument("card set too small for a draft");
  Rng rng(derive_seed(seed, tag_of("draft"), static_cast<std::uint64_t>(turn)));
  std::vector<std::size_t> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    const std::size_t i = static_cast<std::size_t>(rng.below(set.size()));
    if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
  }
  std::vector<Card> out;
  out.reserve(count);
  for (std::size_t i : chosen) out.push_back(set.cards[i]);
  return out;
}

DraftState start_draft(const CardSet& set, std::uint64_t seed, const RulesetConfig& config) {
  DraftState d;
  d.set = &set;
  d.seed = seed;
  d.turns = config.draft_turns;
  d.options_per_turn = config.draft_options;
  d.options = draft_options(set, seed, 0, d.options_per_turn);
  return d;
}

PickOutcome apply_pick(DraftState& d, int player, int index, Policy policy) {
  PickOutcome out;
  if (d.complete() || static_cast<int>(d.picks[player].size()) > d.turn) {
    out.accepted = false;
    return out;
  }
  if (index < 0 || index >= static_cast<int>(d.options.size())) {
    if (policy == Policy::Strict) {
      out.accepted = false;
      return out;
    }
    index = 0;
    out.fell_back = true;
  }
  out.card = d.options[index];
  d.picks[player].push_back(out.card);
  if (static_cast<int>(d.picks[0].size()) > d.turn && static_cast<int>(d.picks[1].size()) > d.turn) {
    ++d.turn;
    if (!d.complete()) d.options = draft_options(*d.set, d.seed, d.turn, d.options_per_turn);
    else d.options.clear();
  }
  return out;
}

ChoiceOutcome apply_choice(ConstructionState& cs, int player, const std::vector<int>& picks, const RulesetConfig& config,
                           Policy policy, std::uint64_t padding_seed) {
  ChoiceOutcome out;
  std::map<int, int> copies;
  std::vector<int> kept;
  for (int number : picks) {
    std::string problem;
    if (!cs.pool.find(number)) {
      problem = "card " + std::to_string(number) + " is not in the pool";
    } else if (copies[number] >= config.max_copies) {
      problem = "more than " + std::to_string(config.max_copies) + " copies of card " + std::to_string(number);
    } else if (static_cast<int>(kept.size()) >= config.deck_size) {
      problem = "more than " + std::to_string(config.deck_size) + " picks";
    }
    if (!problem.empty()) {
      if (policy == Policy::Strict) {
        out.accepted = false;
        out.reason = problem;
        return out;
      }
      out.dropped.push_back(number);
      continue;
    }
    ++copies[number];
    kept.push_back(number);
  }

  if (static_cast<int>(cs.pool.size()) * config.max_copies < config.deck_size)
    throw std::invalid_argument("construction pool too small to fill a deck");
  Rng rng(padding_seed);
  while (static_cast<int>(kept.size()) < config.deck_size) {
    const int number = cs.pool.cards[static_cast<std::size_t>(rng.below(cs.pool.size()))].number;
    if (copies[number] >= config.max_copies) continue;
    ++copies[number];
    kept.push_back(number);
    ++out.padded;
  }
  for (int number : kept) out.deck.push_back(*cs.pool.find(number));
  cs.picks[player] = std::move(kept);
  return out;
}

std::vector<Card> finalize_deck(std::vector<Card> deck, std::uint64_t seed) {
  Rng rng(derive_seed(seed, tag_of("shuffle")));
  rng.shuffle(deck);
  return deck;
}

}  // namespace locm
