#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "locm/action.hpp"
#include "locm/protocol.hpp"
#include "locm/state.hpp"

namespace locm {

// An in-process agent. Agents see only the protocol view, never engine state.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string_view name() const = 0;
  virtual bool deterministic() const = 0;
  // One full turn of actions for the given view.
  virtual std::vector<Action> act(const AgentView& view) = 0;
};

// "baseline1", "baseline2", "random2lanes", "greedy", "random".
const std::vector<std::string>& builtin_agent_names();
bool is_builtin_agent(std::string_view name);
std::unique_ptr<Agent> make_builtin_agent(std::string_view name, std::uint64_t seed = 0);

// Ids at or above this value are placeholders for creatures an agent's own
// simulation created (area copies); the real ids are unknown until next turn.
inline constexpr int kUnknownIdBase = 1'000'000;

// Battle state rebuilt from a view, active player 0 = the viewer. Hidden
// information (decks, opponent hand) is left as placeholders.
GameState state_from_view(const AgentView& view);

// Linear evaluation used by the greedy agent.
struct GreedyWeights {
  double health = 1.0;
  double creature_stat = 2.0;
  double creature_presence = 1.0;
  double guard = 1.0;
  double ward = 1.0;
  double lethal = 1.0;
  double drain = 0.5;
  double breakthrough = 0.5;
  double hand_card = 0.5;
  double next_draw = 0.5;
  double win = 1e6;
};

double evaluate(const GameState& state, int player, const GreedyWeights& weights = {});

// Deck-building value of a card: stat surplus over its cost. Higher is better.
double card_value(const Card& card);

}  // namespace locm
