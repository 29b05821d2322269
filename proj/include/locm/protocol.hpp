#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locm/action.hpp"
#include "locm/state.hpp"

namespace locm {

// Location column of a visible card.
inline constexpr int kInHand = 0;
inline constexpr int kMyBoard = 1;
inline constexpr int kEnemyBoard = -1;

struct PlayerSummary {
  int health = 0;
  int mana = 0;
  int deck_count = 0;
  // Rune count (1.0/1.2) or next-turn draw count (1.5).
  int extra = 0;
  friend bool operator==(const PlayerSummary&, const PlayerSummary&) = default;
};

struct VisibleCard {
  int card_number = 0;
  int instance_id = -1;
  int location = kInHand;
  CardType type = CardType::Creature;
  int cost = 0;
  int attack = 0;
  int defense = 0;
  KeywordSet keywords;
  int my_health_change = 0;
  int opp_health_change = 0;
  int card_draw = 0;
  Area area = Area::Target;
  int lane = -1;

  Card to_card() const;
  friend bool operator==(const VisibleCard&, const VisibleCard&) = default;
};

// Everything the active player may observe at the start of a turn.
struct AgentView {
  Version version = Version::V12;
  Phase phase = Phase::Battle;
  PlayerSummary me;
  PlayerSummary opponent;
  int opponent_hand_count = 0;
  std::vector<Action> opponent_actions;
  std::vector<VisibleCard> cards;

  friend bool operator==(const AgentView&, const AgentView&) = default;
};

AgentView make_view(const GameState& state, int viewpoint);
std::string render_view(const AgentView& view);
std::string render_turn_input(const GameState& state, int viewpoint);

struct ParseError {
  std::size_t offset = 0;
  std::vector<std::string> expected;
  std::string message;

  std::string describe() const;
  friend bool operator==(const ParseError&, const ParseError&) = default;
};

template <typename T>
using ParseResult = std::variant<T, ParseError>;

// Inverse of render_view. The phase is inferred: mana 0 marks a deck-building
// turn (construction under 1.5, draft otherwise). 1.5 is recognised from the
// card line width; `laneless` selects 1.0 over 1.2 for 12-field card lines.
ParseResult<AgentView> parse_turn_input(std::string_view text, bool laneless = false);

// Reads one complete turn input block from a stream; nullopt on EOF or when
// the block is truncated.
std::optional<std::string> read_turn_block(std::istream& in);

// Canonical single-line action text, commands joined by ';'.
std::string render_action(const Action& action, Version version);
std::string render_actions(const std::vector<Action>& actions, Version version);

// Total over arbitrary bytes. Battle: SUMMON/ATTACK/USE/PASS; draft: PICK;
// construction: CHOOSE tokens (always yields exactly one ChooseAction).
// Under Lenient a failure after at least one complete command truncates to
// the valid prefix; otherwise the error is returned.
ParseResult<std::vector<Action>> parse_agent_output(std::string_view text, Phase phase, Version version,
                                                    Policy policy = Policy::Strict);

}  // namespace locm
