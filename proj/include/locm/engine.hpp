#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locm/state.hpp"

namespace locm {

// Every state mutation performed by the engine is one of these events, and
// apply_event() is the only code that mutates a battle state. A log recorded
// from a pre-state therefore replays to the post-state exactly.
enum class EventKind : std::uint8_t {
  TurnStart,       // a = round
  ManaSet,         // a = mana, b = max mana
  Draw,            // id = new instance id
  Burn,            // hand full, top card discarded
  RuneBreak,       // a = 1 if it grants a bonus draw
  HealthChange,    // a = delta
  DrawCounters,    // a = next turn draw, b = health lost this enemy turn
  BonusDraw,       // a = extra cards next turn
  BonusManaLost,
  Summon,          // id = creature id, a = lane, b = source hand id
  HandRemoved,     // id = hand card
  ManaSpent,       // a = amount
  Damage,          // id = creature, a = amount
  WardBroken,      // id = creature
  StatsChanged,    // id = creature, a = attack delta, b = defense delta
  KeywordsSet,     // id = creature, a = keyword bits
  Exhausted,       // id = creature
  Death,           // id = creature
  DecksCleared,
  ActionRecorded,  // a = action tag, b/c = operands
  Ignored,         // a = IgnoreReason
  GameOver,        // a = Winner, b = EndReason
};

enum class IgnoreReason : std::uint8_t {
  WrongPhase,
  UnknownCard,
  NotEnoughMana,
  BadLane,
  LaneFull,
  CannotAttack,
  BadTarget,
  GuardInTheWay,
  UnknownCommand,
};

std::string_view to_string(IgnoreReason r);

struct Event {
  EventKind kind;
  std::int8_t player = 0;
  int id = 0;
  int a = 0;
  int b = 0;
  int c = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

using TransitionLog = std::vector<Event>;

std::string to_string(const Event& e);

void apply_event(GameState& state, const Event& e);

enum class Outcome : std::uint8_t { Ongoing, Won, Draw };

struct EndCheck {
  Outcome outcome = Outcome::Ongoing;
  int player = -1;
  EndReason reason = EndReason::None;
  friend bool operator==(const EndCheck&, const EndCheck&) = default;
};

enum class ApplyStatus : std::uint8_t { Applied, Ignored, Rejected };

struct ApplyResult {
  ApplyStatus status = ApplyStatus::Applied;
  IgnoreReason reason = IgnoreReason::WrongPhase;
};

// Turn lifecycle. begin_turn expects state.active to be the player about to move.
void begin_turn(GameState& state, TransitionLog* log = nullptr);
void end_turn(GameState& state, TransitionLog* log = nullptr);

// All singly-applicable legal actions for the active player; Pass is always last.
std::vector<Action> legal_actions(const GameState& state);
void legal_actions(const GameState& state, std::vector<Action>& out);

// nullopt when legal, otherwise why not.
std::optional<IgnoreReason> check_legal(const GameState& state, const Action& action);

// Applies one battle action. Illegal actions are logged and skipped under
// Lenient; under Strict the actor forfeits and the result is Rejected.
ApplyResult apply_action(GameState& state, const Action& action, Policy policy, TransitionLog* log = nullptr);

// Building blocks of apply_action; each assumes its action is legal.
void resolve_attack(GameState& state, int attacker_id, int target, TransitionLog* log = nullptr);
void apply_item(GameState& state, int item_id, int target, TransitionLog* log = nullptr);
void summon_creature(GameState& state, int card_id, int lane, TransitionLog* log = nullptr);

EndCheck check_end(const GameState& state);

// Marks the state finished with the given outcome.
void finish(GameState& state, Winner winner, EndReason reason, TransitionLog* log = nullptr);

// Runs check_end and finishes the game when it is decided. Returns true if finished.
bool settle(GameState& state, TransitionLog* log = nullptr);

}  // namespace locm
