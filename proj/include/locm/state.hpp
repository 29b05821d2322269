#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "locm/action.hpp"
#include "locm/card.hpp"
#include "locm/ruleset.hpp"

namespace locm {

enum class Phase : std::uint8_t { Draft, Construction, Battle, Finished };

enum class Winner : std::int8_t { None = -2, Draw = -1, Player0 = 0, Player1 = 1 };

enum class EndReason : std::uint8_t { None, HealthZero, HardCap, InvalidStrict, Timeout, Crash, Disqualified };

std::string_view to_string(Phase p);
std::string_view to_string(EndReason r);
bool parse_end_reason(std::string_view text, EndReason& out);

inline Winner winner_for(int player) { return player == 0 ? Winner::Player0 : Winner::Player1; }

struct HandCard {
  int instance_id = 0;
  Card card;
  friend bool operator==(const HandCard&, const HandCard&) = default;
};

struct BoardCreature {
  int instance_id = 0;
  Card card;
  int attack = 0;
  int defense = 0;
  KeywordSet keywords;
  int lane = 0;
  bool can_attack = false;
  bool attacked_this_turn = false;
  bool summoned_this_turn = false;

  friend bool operator==(const BoardCreature&, const BoardCreature&) = default;
};

struct PlayerState {
  int health = 30;
  int mana = 0;
  int max_mana = 0;
  // Undrawn cards; the next card to draw is deck.back().
  std::vector<Card> deck;
  std::vector<HandCard> hand;
  // Creatures in placement order; lane is stored per creature.
  std::vector<BoardCreature> board;
  // Remaining runes; thresholds are rune_step * k for k = runes..1.
  int runes = 0;
  int next_turn_draw = 1;
  int health_lost_this_enemy_turn = 0;
  bool bonus_mana = false;
  // Actions applied during this player's most recent turn.
  std::vector<Action> last_actions;

  int lane_count(int lane) const;
  const BoardCreature* find_creature(int instance_id) const;
  BoardCreature* find_creature(int instance_id);
  const HandCard* find_hand(int instance_id) const;

  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct GameState {
  RulesetConfig config;
  Phase phase = Phase::Draft;
  std::array<PlayerState, 2> players;
  int turn = 0;
  int active = 0;
  Winner winner = Winner::None;
  EndReason end_reason = EndReason::None;
  int next_instance_id = 1;
  // Cards on offer during deck building (draft triple or construction pool).
  std::vector<Card> offered;

  PlayerState& me() { return players[active]; }
  const PlayerState& me() const { return players[active]; }
  PlayerState& opponent() { return players[1 - active]; }
  const PlayerState& opponent() const { return players[1 - active]; }
  bool finished() const { return phase == Phase::Finished; }

  // Fresh battle-ready state for two ordered decks (first element drawn first).
  static GameState start_battle(const RulesetConfig& config, std::vector<Card> deck0, std::vector<Card> deck1);

  friend bool operator==(const GameState&, const GameState&) = default;
};

// Invariant checker run after transitions in debug builds and tests.
std::vector<std::string> audit_state(const GameState& state);

// Stable 64-bit digest of the full state, used by transcripts and replay.
std::uint64_t state_hash(const GameState& state);

}  // namespace locm
