#pragma once

#include <cstdint>
#include <optional>

#include "locm/card.hpp"

namespace locm {

enum class Policy : std::uint8_t { Lenient, Strict };

// Version-dependent rule constants plus operator-tunable limits.
struct RulesetConfig {
  Version version = Version::V12;

  int lanes = 2;
  int lane_size = 3;
  int max_mana = 12;
  int hand_limit = 8;
  int draft_turns = 30;
  int draft_options = 3;
  int pool_size = 120;
  int deck_size = 30;
  int max_copies = 2;
  int starting_health = 30;
  int rune_count = 5;
  int rune_step = 5;
  // Round at which both decks are emptied.
  int deck_empty_turn = 50;
  // Game is adjudicated by health once the round counter reaches this.
  int max_turns_hard_cap = 100;
  // Extra cards drawn before the first battle turn (each player).
  int initial_draw = 0;
  // Health lost per bonus draw under 1.5 rules.
  int health_per_bonus_draw = 5;
  // Health lost per missing card when drawing from an empty deck under 1.5 rules.
  int empty_deck_damage = 5;
  bool second_player_bonus_mana = true;
  std::optional<int> health_cap;

  int battle_turn_ms = 200;
  int draft_pick_ms = 200;
  int construction_ms = 4000;
  std::int64_t mem_soft_bytes = 256ll << 20;
  std::int64_t mem_hard_bytes = 1024ll << 20;

  bool uses_runes() const { return version != Version::V15; }
  bool has_draft() const { return version != Version::V15; }
  bool has_area() const { return version == Version::V15; }

  static RulesetConfig for_version(Version v);

  friend bool operator==(const RulesetConfig&, const RulesetConfig&) = default;
};

inline RulesetConfig RulesetConfig::for_version(Version v) {
  RulesetConfig c;
  c.version = v;
  if (v == Version::V10) {
    c.lanes = 1;
    c.lane_size = 6;
  } else {
    c.lanes = 2;
    c.lane_size = 3;
  }
  return c;
}

}  // namespace locm
