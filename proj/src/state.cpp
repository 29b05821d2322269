#include "locm/state.hpp"

#include <algorithm>
#include <set>

#include "locm/engine.hpp"

namespace locm {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Draft: return "draft";
    case Phase::Construction: return "construction";
    case Phase::Battle: return "battle";
    case Phase::Finished: return "finished";
  }
  return "?";
}

namespace {
constexpr std::pair<EndReason, std::string_view> kReasonNames[] = {
    {EndReason::None, "none"},
    {EndReason::HealthZero, "health-zero"},
    {EndReason::HardCap, "hard-cap"},
    {EndReason::InvalidStrict, "invalid-strict"},
    {EndReason::Timeout, "timeout"},
    {EndReason::Crash, "crash"},
    {EndReason::Disqualified, "disqualified"},
};
}  // namespace

std::string_view to_string(EndReason r) {
  for (auto [reason, name] : kReasonNames) {
    if (reason == r) return name;
  }
  return "?";
}

bool parse_end_reason(std::string_view text, EndReason& out) {
  for (auto [reason, name] : kReasonNames) {
    if (name == text) {
      out = reason;
      return true;
    }
  }
  return false;
}

int PlayerState::lane_count(int lane) const {
  return static_cast<int>(std::count_if(board.begin(), board.end(), [lane](const BoardCreature& c) { return c.lane == lane; }));
}

const BoardCreature* PlayerState::find_creature(int instance_id) const {
  for (const auto& c : board) {
    if (c.instance_id == instance_id) return &c;
  }
  return nullptr;
}

BoardCreature* PlayerState::find_creature(int instance_id) {
  for (auto& c : board) {
    if (c.instance_id == instance_id) return &c;
  }
  return nullptr;
}

const HandCard* PlayerState::find_hand(int instance_id) const {
  for (const auto& h : hand) {
    if (h.instance_id == instance_id) return &h;
  }
  return nullptr;
}

GameState GameState::start_battle(const RulesetConfig& config, std::vector<Card> deck0, std::vector<Card> deck1) {
  GameState s;
  s.config = config;
  s.phase = Phase::Battle;
  s.turn = 1;
  s.active = 0;
  std::array<std::vector<Card>*, 2> decks = {&deck0, &deck1};
  for (int p = 0; p < 2; ++p) {
    auto& pl = s.players[p];
    pl.health = config.starting_health;
    pl.runes = config.uses_runes() ? config.rune_count : 0;
    pl.bonus_mana = p == 1 && config.second_player_bonus_mana;
    pl.deck.assign(decks[p]->rbegin(), decks[p]->rend());
  }
  for (int p = 0; p < 2; ++p) {
    for (int i = 0; i < config.initial_draw && !s.players[p].deck.empty(); ++i) {
      if (static_cast<int>(s.players[p].hand.size()) >= config.hand_limit) break;
      apply_event(s, Event{EventKind::Draw, static_cast<std::int8_t>(p), s.next_instance_id});
    }
  }
  return s;
}

std::vector<std::string> audit_state(const GameState& s) {
  std::vector<std::string> v;
  const auto& cfg = s.config;
  if ((s.phase == Phase::Finished) != (s.winner != Winner::None)) v.push_back("finished iff winner set");
  std::set<int> ids;
  for (int p = 0; p < 2; ++p) {
    const auto& pl = s.players[p];
    const std::string who = "player " + std::to_string(p) + ": ";
    if (static_cast<int>(pl.hand.size()) > cfg.hand_limit) v.push_back(who + "hand over limit");
    if (pl.max_mana > cfg.max_mana || pl.max_mana < 0) v.push_back(who + "max mana out of range");
    if (pl.mana < 0 || pl.mana > pl.max_mana + (pl.bonus_mana ? 1 : 0)) v.push_back(who + "mana out of range");
    if (pl.runes < 0 || pl.runes > cfg.rune_count) v.push_back(who + "rune count out of range");
    if (!cfg.uses_runes() && pl.runes != 0) v.push_back(who + "runes present without rune rules");
    if (pl.runes > 0 && pl.health <= cfg.rune_step * pl.runes && s.phase != Phase::Finished)
      v.push_back(who + "unbroken rune at or above health");
    if (pl.next_turn_draw < 1) v.push_back(who + "next turn draw below 1");
    if (pl.health_lost_this_enemy_turn < 0) v.push_back(who + "negative health lost");
    for (int lane = 0; lane < cfg.lanes; ++lane) {
      if (pl.lane_count(lane) > cfg.lane_size) v.push_back(who + "lane " + std::to_string(lane) + " over capacity");
    }
    for (const auto& c : pl.board) {
      if (c.defense <= 0) v.push_back(who + "creature " + std::to_string(c.instance_id) + " with defense <= 0");
      if (c.lane < 0 || c.lane >= cfg.lanes) v.push_back(who + "creature lane out of range");
      if (c.summoned_this_turn && !c.keywords.has(Keyword::Charge) && c.can_attack)
        v.push_back(who + "summoning-sick creature marked ready");
      if (!ids.insert(c.instance_id).second) v.push_back("duplicate instance id " + std::to_string(c.instance_id));
    }
    for (const auto& h : pl.hand) {
      if (!ids.insert(h.instance_id).second) v.push_back("duplicate instance id " + std::to_string(h.instance_id));
    }
  }
  return v;
}

namespace {

class Fnv64 {
 public:
  void add(std::int64_t x) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ull;
    }
  }
  void add(const Card& c) {
    add(c.number);
    add(static_cast<int>(c.type));
    add(c.cost);
    add(c.attack);
    add(c.defense);
    add(c.keywords.bits());
    add(c.my_health_change);
    add(c.opp_health_change);
    add(c.card_draw);
    add(static_cast<int>(c.area));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace

std::uint64_t state_hash(const GameState& s) {
  Fnv64 h;
  h.add(static_cast<int>(s.config.version));
  h.add(static_cast<int>(s.phase));
  h.add(s.turn);
  h.add(s.active);
  h.add(static_cast<int>(s.winner));
  h.add(static_cast<int>(s.end_reason));
  h.add(s.next_instance_id);
  h.add(static_cast<std::int64_t>(s.offered.size()));
  for (const auto& c : s.offered) h.add(c);
  for (const auto& pl : s.players) {
    h.add(pl.health);
    h.add(pl.mana);
    h.add(pl.max_mana);
    h.add(pl.runes);
    h.add(pl.next_turn_draw);
    h.add(pl.health_lost_this_enemy_turn);
    h.add(pl.bonus_mana);
    h.add(static_cast<std::int64_t>(pl.deck.size()));
    for (const auto& c : pl.deck) h.add(c);
    h.add(static_cast<std::int64_t>(pl.hand.size()));
    for (const auto& hc : pl.hand) {
      h.add(hc.instance_id);
      h.add(hc.card);
    }
    h.add(static_cast<std::int64_t>(pl.board.size()));
    for (const auto& c : pl.board) {
      h.add(c.instance_id);
      h.add(c.card);
      h.add(c.attack);
      h.add(c.defense);
      h.add(c.keywords.bits());
      h.add(c.lane);
      h.add(c.can_attack);
      h.add(c.attacked_this_turn);
      h.add(c.summoned_this_turn);
    }
    h.add(static_cast<std::int64_t>(pl.last_actions.size()));
    for (const auto& a : pl.last_actions) {
      h.add(static_cast<std::int64_t>(a.index()));
      std::visit(
          [&h](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SummonAction>) {
              h.add(x.instance_id);
              h.add(x.lane);
            } else if constexpr (std::is_same_v<T, AttackAction> || std::is_same_v<T, UseAction>) {
              h.add(x.instance_id);
              h.add(x.target);
            }
          },
          a);
    }
  }
  return h.value();
}

}  // namespace locm
