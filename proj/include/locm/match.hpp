#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locm/agents.hpp"
#include "locm/card_source.hpp"
#include "locm/engine.hpp"
#include "locm/protocol.hpp"
#include "locm/runtime.hpp"

namespace locm {

// Everything that determines a game apart from the agents' choices.
struct GameSetup {
  RulesetConfig config;
  Policy policy = Policy::Lenient;
  std::uint64_t seed = 0;
  // Draft card set for 1.0/1.2; the default set when null.
  std::shared_ptr<const CardSet> cards;
  // How the card set was obtained ("default" or a file path), for transcripts.
  std::string cards_label = "default";
  // Pool generator for 1.5.
  GeneratorParams generator;
  std::array<std::string, 2> seat_labels = {"p0", "p1"};
  // Added to the budget of each seat's first battle turn.
  int warmup_grace_ms = 0;

  const CardSet& draft_set() const;
};

// The 120-card construction pool of a 1.5 game. Depends on the seed only.
CardSet construction_pool(const GameSetup& setup);

// Seeds of the per-seat streams that complete and shuffle decks.
std::uint64_t padding_seed(std::uint64_t game_seed, int seat);
std::uint64_t shuffle_seed(std::uint64_t game_seed, int seat);

struct TurnReply {
  MoveStatus status = MoveStatus::Ok;
  std::string text;
  // In-process agents hand over actions directly; otherwise `text` is parsed.
  std::optional<std::vector<Action>> actions;
  double elapsed_ms = 0.0;
};

// One seat of a game.
class Controller {
 public:
  virtual ~Controller() = default;
  // False when the controller never reads the rendered input text.
  virtual bool wants_text() const { return true; }
  virtual TurnReply request(const AgentView& view, const std::string& input, int budget_ms) = 0;
  // Releases external resources; called when the game is over.
  virtual void close() {}
  virtual int soft_warnings() const { return 0; }
};

class InProcessController final : public Controller {
 public:
  explicit InProcessController(std::unique_ptr<Agent> agent) : agent_(std::move(agent)) {}
  bool wants_text() const override { return false; }
  TurnReply request(const AgentView& view, const std::string& input, int budget_ms) override;

 private:
  std::unique_ptr<Agent> agent_;
};

class ProcessController final : public Controller {
 public:
  // Throws SpawnError.
  ProcessController(const std::string& command, const std::filesystem::path& stderr_log, const Budget& budget);
  TurnReply request(const AgentView& view, const std::string& input, int budget_ms) override;
  void close() override { handle_.kill(); }
  int soft_warnings() const override { return handle_.soft_warnings(); }
  AgentHandle& handle() { return handle_; }

 private:
  AgentHandle handle_;
};

// Replays recorded replies in request order; shared by both seats.
struct ReplyScript {
  std::deque<TurnReply> replies;
};

class ScriptedController final : public Controller {
 public:
  explicit ScriptedController(std::shared_ptr<ReplyScript> script) : script_(std::move(script)) {}
  TurnReply request(const AgentView& view, const std::string& input, int budget_ms) override;

 private:
  std::shared_ptr<ReplyScript> script_;
};

struct GameRecord {
  Winner winner = Winner::None;
  EndReason reason = EndReason::None;
  // Round counter when the game ended (0 if it ended before the battle).
  int turns = 0;
  std::uint64_t final_hash = 0;
  // Full protocol exchange and engine events; empty unless recording.
  std::string transcript;
  // Reply time of every request, in request order.
  std::vector<double> timings_ms;
  int actions_applied = 0;
  std::array<int, 2> ignored_actions{};
  std::array<int, 2> parse_errors{};
  std::array<int, 2> fallbacks{};
  std::array<int, 2> soft_warnings{};
  GameState final_state;
};

// Plays deck building and battle to the end. Forfeits (timeout, crash,
// disqualification, strict-mode violations) credit the opponent.
GameRecord play_game(const GameSetup& setup, const std::array<Controller*, 2>& seats, bool record_transcript);

struct ParsedTranscript {
  GameSetup setup;
  std::shared_ptr<ReplyScript> script;
};

// Rebuilds the setup and the replies of a transcript. The draft card set is
// loaded from its label ("default" or a path) unless `cards` is given; its
// fingerprint must match. Throws std::runtime_error on malformed input.
ParsedTranscript parse_transcript(const std::string& text, std::shared_ptr<const CardSet> cards = nullptr);

struct ReplayReport {
  bool verified = false;
  // 1-based line of the first difference, 0 when verified.
  std::size_t line = 0;
  std::string expected;
  std::string actual;
  GameRecord record;
};

// Re-simulates a transcript through the engine and compares it line by line.
ReplayReport replay_transcript(const std::string& text, std::shared_ptr<const CardSet> cards = nullptr);

}  // namespace locm
