#include "locm/agents.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "locm/engine.hpp"
#include "locm/rng.hpp"

namespace locm {

GameState state_from_view(const AgentView& view) {
  GameState s;
  s.config = RulesetConfig::for_version(view.version);
  s.phase = Phase::Battle;
  s.turn = 1;
  s.active = 0;
  s.next_instance_id = kUnknownIdBase;
  const PlayerSummary* summaries[2] = {&view.me, &view.opponent};
  for (int p = 0; p < 2; ++p) {
    auto& pl = s.players[p];
    const auto& sum = *summaries[p];
    pl.health = sum.health;
    pl.mana = sum.mana;
    pl.max_mana = std::min(sum.mana, s.config.max_mana);
    pl.bonus_mana = sum.mana > pl.max_mana;
    pl.deck.assign(static_cast<std::size_t>(std::max(0, sum.deck_count)), Card{});
    if (s.config.uses_runes()) {
      pl.runes = sum.extra;
    } else {
      pl.next_turn_draw = std::max(1, sum.extra);
    }
  }
  // Unseen opponent hand cards get placeholder ids.
  for (int i = 0; i < view.opponent_hand_count; ++i) s.players[1].hand.push_back(HandCard{s.next_instance_id++, Card{}});
  for (const auto& c : view.cards) {
    if (c.location == kInHand) {
      s.players[0].hand.push_back(HandCard{c.instance_id, c.to_card()});
      continue;
    }
    BoardCreature b;
    b.instance_id = c.instance_id;
    b.card = c.to_card();
    b.attack = c.attack;
    b.defense = c.defense;
    b.keywords = c.keywords;
    b.lane = std::max(0, c.lane);
    if (c.location == kMyBoard) {
      b.can_attack = true;
      s.players[0].board.push_back(b);
    } else {
      s.players[1].board.push_back(b);
    }
  }
  return s;
}

double evaluate(const GameState& s, int player, const GreedyWeights& w) {
  if (s.finished()) {
    if (s.winner == Winner::Draw) return 0.0;
    return s.winner == winner_for(player) ? w.win : -w.win;
  }
  auto creature_value = [&w](const BoardCreature& c) {
    double v = w.creature_stat * (c.attack + c.defense) + w.creature_presence;
    if (c.keywords.has(Keyword::Guard)) v += w.guard;
    if (c.keywords.has(Keyword::Ward)) v += w.ward;
    if (c.keywords.has(Keyword::Lethal)) v += w.lethal;
    if (c.keywords.has(Keyword::Drain)) v += w.drain;
    if (c.keywords.has(Keyword::Breakthrough)) v += w.breakthrough;
    return v;
  };
  const auto& me = s.players[player];
  const auto& opp = s.players[1 - player];
  double score = w.health * (me.health - opp.health);
  for (const auto& c : me.board) score += creature_value(c);
  for (const auto& c : opp.board) score -= creature_value(c);
  score += w.hand_card * static_cast<double>(me.hand.size());
  score += w.next_draw * me.next_turn_draw;
  return score;
}

double card_value(const Card& c) {
  double power = 0.0;
  switch (c.type) {
    case CardType::Creature:
    case CardType::GreenItem:
      power = c.attack + c.defense + 1.5 * c.keywords.count();
      break;
    case CardType::RedItem:
      power = -c.attack - c.defense + 0.5 * c.keywords.count();
      break;
    case CardType::BlueItem:
      power = -c.attack - c.defense;
      break;
  }
  if (c.is_creature() && c.defense == 0) power = 0.0;
  power += 2.0 * c.card_draw + 0.5 * c.my_health_change - c.opp_health_change;
  if (c.area != Area::Target) power *= 1.5;
  return power - 2.0 * c.cost;
}

namespace {

bool references_unknown(const Action& a) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AttackAction> || std::is_same_v<T, UseAction>) {
          return x.instance_id >= kUnknownIdBase || x.target >= kUnknownIdBase;
        } else if constexpr (std::is_same_v<T, SummonAction>) {
          return x.instance_id >= kUnknownIdBase;
        } else {
          return false;
        }
      },
      a);
}

// Applies actions to a local copy of the state so every emitted action is
// legal at the point it is executed.
class TurnPlanner {
 public:
  explicit TurnPlanner(const AgentView& view) : state_(state_from_view(view)) {}

  bool try_apply(const Action& a) {
    if (state_.finished() || references_unknown(a) || check_legal(state_, a)) return false;
    apply_action(state_, a, Policy::Lenient);
    plan_.push_back(a);
    return true;
  }

  std::vector<Action> legal() const {
    std::vector<Action> out = legal_actions(state_);
    std::erase_if(out, references_unknown);
    return out;
  }

  GameState& state() { return state_; }
  const PlayerState& me() const { return state_.players[0]; }
  const PlayerState& opp() const { return state_.players[1]; }
  bool over() const { return state_.finished(); }

  std::vector<Action> finish() {
    plan_.emplace_back(PassAction{});
    return std::move(plan_);
  }

 private:
  GameState state_;
  std::vector<Action> plan_;
};

// Ids of cards in hand matching a predicate, in hand order.
template <typename Pred>
std::vector<int> hand_ids(const PlayerState& pl, Pred pred) {
  std::vector<int> ids;
  for (const auto& h : pl.hand) {
    if (pred(h.card)) ids.push_back(h.instance_id);
  }
  return ids;
}

std::vector<int> ready_attackers(const PlayerState& pl) {
  std::vector<int> ids;
  for (const auto& c : pl.board) {
    if (c.can_attack && !c.attacked_this_turn && c.instance_id < kUnknownIdBase) ids.push_back(c.instance_id);
  }
  return ids;
}

std::vector<int> guards_in_lane(const PlayerState& pl, int lane) {
  std::vector<int> ids;
  for (const auto& c : pl.board) {
    if (c.lane == lane && c.keywords.has(Keyword::Guard)) ids.push_back(c.instance_id);
  }
  return ids;
}

// Face if reachable, otherwise the first guard in the attacker's lane.
void attack_face_or_guard(TurnPlanner& plan, int attacker) {
  if (plan.over()) return;
  if (plan.try_apply(AttackAction{attacker, kFace})) return;
  const auto* c = plan.me().find_creature(attacker);
  if (!c) return;
  for (int g : guards_in_lane(plan.opp(), c->lane)) {
    if (plan.try_apply(AttackAction{attacker, g})) return;
  }
}

// Lane with the most free space, lowest index on ties.
int roomiest_lane(const GameState& s) {
  int best = 0;
  int best_free = -1;
  for (int lane = 0; lane < s.config.lanes; ++lane) {
    const int free = s.config.lane_size - s.players[0].lane_count(lane);
    if (free > best_free) {
      best = lane;
      best_free = free;
    }
  }
  return best;
}

void summon_all(TurnPlanner& plan) {
  for (int id : hand_ids(plan.me(), [](const Card& c) { return c.is_creature(); })) {
    if (plan.over()) return;
    plan.try_apply(SummonAction{id, roomiest_lane(plan.state())});
  }
}

std::vector<int> random_construction(const AgentView& view, Rng& rng) {
  std::map<int, int> copies;
  std::vector<int> picks;
  if (view.cards.empty()) return picks;
  while (picks.size() < 30) {
    const int number = view.cards[static_cast<std::size_t>(rng.below(view.cards.size()))].card_number;
    if (copies[number] >= 2) continue;
    ++copies[number];
    picks.push_back(number);
  }
  return picks;
}

// ---------------------------------------------------------------------------

class Baseline1 final : public Agent {
 public:
  std::string_view name() const override { return "baseline1"; }
  bool deterministic() const override { return true; }

  std::vector<Action> act(const AgentView& view) override {
    if (view.phase == Phase::Draft) {
      for (std::size_t i = 0; i < view.cards.size(); ++i) {
        const auto& c = view.cards[i];
        if (c.type == CardType::Creature && c.keywords.has(Keyword::Guard)) return {PickAction{static_cast<int>(i)}};
      }
      return {PickAction{0}};
    }
    if (view.phase == Phase::Construction) return {ChooseAction{}};

    TurnPlanner plan(view);
    summon_all(plan);
    for (int id : hand_ids(plan.me(), [](const Card& c) { return c.is_item(); })) {
      if (plan.over()) break;
      const auto* h = plan.me().find_hand(id);
      if (!h) continue;
      if (h->card.type == CardType::GreenItem) {
        if (!plan.me().board.empty()) plan.try_apply(UseAction{id, plan.me().board.front().instance_id});
      } else if (h->card.type == CardType::RedItem) {
        if (!plan.opp().board.empty()) plan.try_apply(UseAction{id, plan.opp().board.front().instance_id});
      } else {
        plan.try_apply(UseAction{id, kFace});
      }
    }
    for (int id : ready_attackers(plan.me())) attack_face_or_guard(plan, id);
    return plan.finish();
  }
};

class Baseline2 final : public Agent {
 public:
  std::string_view name() const override { return "baseline2"; }
  bool deterministic() const override { return true; }

  std::vector<Action> act(const AgentView& view) override {
    if (view.phase == Phase::Draft) {
      int best = -1;
      for (std::size_t i = 0; i < view.cards.size(); ++i) {
        const auto& c = view.cards[i];
        if (c.type != CardType::Creature) continue;
        if (best < 0 || c.attack > view.cards[best].attack) best = static_cast<int>(i);
      }
      return {PickAction{std::max(best, 0)}};
    }
    if (view.phase == Phase::Construction) return {ChooseAction{}};

    TurnPlanner plan(view);
    for (int id : ready_attackers(plan.me())) attack_face_or_guard(plan, id);
    summon_all(plan);
    return plan.finish();
  }
};

class RandomWItems2Lanes final : public Agent {
 public:
  explicit RandomWItems2Lanes(std::uint64_t seed) : rng_(seed) {}
  std::string_view name() const override { return "random2lanes"; }
  bool deterministic() const override { return false; }

  std::vector<Action> act(const AgentView& view) override {
    if (view.phase == Phase::Draft) return {PickAction{static_cast<int>(rng_.below(std::max<std::size_t>(1, view.cards.size())))}};
    if (view.phase == Phase::Construction) return {ChooseAction{random_construction(view, rng_)}};

    TurnPlanner plan(view);
    auto random_of = [this](const std::vector<int>& ids) { return ids[static_cast<std::size_t>(rng_.below(ids.size()))]; };
    auto creature_ids = [](const PlayerState& pl) {
      std::vector<int> ids;
      for (const auto& c : pl.board) {
        if (c.instance_id < kUnknownIdBase) ids.push_back(c.instance_id);
      }
      return ids;
    };

    for (int id : hand_ids(plan.me(), [](const Card& c) { return c.type == CardType::GreenItem; })) {
      const auto own = creature_ids(plan.me());
      if (plan.over() || own.empty()) break;
      plan.try_apply(UseAction{id, random_of(own)});
    }
    for (int id : ready_attackers(plan.me())) {
      if (plan.over()) break;
      const auto* c = plan.me().find_creature(id);
      if (!c) continue;
      std::vector<int> targets = guards_in_lane(plan.opp(), c->lane);
      if (targets.empty()) {
        targets.push_back(kFace);
        for (const auto& d : plan.opp().board) {
          if (d.lane == c->lane) targets.push_back(d.instance_id);
        }
      }
      plan.try_apply(AttackAction{id, random_of(targets)});
    }
    for (int id : hand_ids(plan.me(), [](const Card& c) { return c.is_creature(); })) {
      if (plan.over()) break;
      std::vector<int> lanes;
      for (int lane = 0; lane < plan.state().config.lanes; ++lane) {
        if (plan.me().lane_count(lane) < plan.state().config.lane_size) lanes.push_back(lane);
      }
      if (lanes.empty()) break;
      plan.try_apply(SummonAction{id, random_of(lanes)});
    }
    for (int id : hand_ids(plan.me(), [](const Card& c) { return c.type == CardType::RedItem || c.type == CardType::BlueItem; })) {
      if (plan.over()) break;
      const auto* h = plan.me().find_hand(id);
      std::vector<int> targets = creature_ids(plan.opp());
      if (h->card.type == CardType::BlueItem) targets.push_back(kFace);
      if (targets.empty()) continue;
      plan.try_apply(UseAction{id, random_of(targets)});
    }
    return plan.finish();
  }

 private:
  Rng rng_;
};

class RandomActions final : public Agent {
 public:
  explicit RandomActions(std::uint64_t seed) : rng_(seed) {}
  std::string_view name() const override { return "random"; }
  bool deterministic() const override { return false; }

  std::vector<Action> act(const AgentView& view) override {
    if (view.phase == Phase::Draft) return {PickAction{static_cast<int>(rng_.below(std::max<std::size_t>(1, view.cards.size())))}};
    if (view.phase == Phase::Construction) return {ChooseAction{random_construction(view, rng_)}};

    TurnPlanner plan(view);
    for (int step = 0; step < 200 && !plan.over(); ++step) {
      const auto legal = plan.legal();
      const Action& pick = legal[static_cast<std::size_t>(rng_.below(legal.size()))];
      if (std::holds_alternative<PassAction>(pick)) break;
      plan.try_apply(pick);
    }
    return plan.finish();
  }

 private:
  Rng rng_;
};

class Greedy final : public Agent {
 public:
  std::string_view name() const override { return "greedy"; }
  bool deterministic() const override { return true; }

  std::vector<Action> act(const AgentView& view) override {
    if (view.phase == Phase::Draft) {
      int best = 0;
      for (std::size_t i = 1; i < view.cards.size(); ++i) {
        if (card_value(view.cards[i].to_card()) > card_value(view.cards[best].to_card())) best = static_cast<int>(i);
      }
      return {PickAction{best}};
    }
    if (view.phase == Phase::Construction) return {ChooseAction{construct(view)}};

    TurnPlanner plan(view);
    play_lethal(plan);
    for (int step = 0; step < 200 && !plan.over(); ++step) {
      const double baseline = evaluate(plan.state(), 0, weights_);
      double best_score = baseline;
      std::optional<Action> best;
      for (const auto& a : plan.legal()) {
        if (std::holds_alternative<PassAction>(a)) continue;
        GameState next = plan.state();
        apply_action(next, a, Policy::Lenient);
        const double score = evaluate(next, 0, weights_);
        if (score > best_score + 1e-9) {
          best_score = score;
          best = a;
        }
      }
      if (!best) break;
      plan.try_apply(*best);
    }
    return plan.finish();
  }

 private:
  static std::vector<int> construct(const AgentView& view) {
    std::vector<std::size_t> order(view.cards.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return card_value(view.cards[a].to_card()) > card_value(view.cards[b].to_card());
    });
    // Best cards first, capped per cost band so the deck has a mana curve.
    auto bucket = [](int cost) { return cost <= 2 ? 0 : cost <= 4 ? 1 : cost <= 6 ? 2 : 3; };
    const int caps[4] = {8, 12, 7, 3};
    int used[4] = {0, 0, 0, 0};
    std::vector<int> picks;
    for (std::size_t i : order) {
      const int b = bucket(view.cards[i].cost);
      for (int copy = 0; copy < 2 && picks.size() < 30 && used[b] < caps[b]; ++copy) {
        picks.push_back(view.cards[i].card_number);
        ++used[b];
      }
    }
    return picks;
  }

  // Every ready creature that can reach the face attacks it when their total
  // attack is enough to finish the opponent.
  static void play_lethal(TurnPlanner& plan) {
    int reachable = 0;
    std::vector<int> attackers;
    for (int id : ready_attackers(plan.me())) {
      const auto* c = plan.me().find_creature(id);
      if (!guards_in_lane(plan.opp(), c->lane).empty()) continue;
      reachable += c->attack;
      attackers.push_back(id);
    }
    if (reachable < plan.opp().health) return;
    for (int id : attackers) {
      if (plan.over()) break;
      plan.try_apply(AttackAction{id, kFace});
    }
  }

  GreedyWeights weights_;
};

}  // namespace

const std::vector<std::string>& builtin_agent_names() {
  static const std::vector<std::string> names = {"baseline1", "baseline2", "random2lanes", "greedy", "random"};
  return names;
}

bool is_builtin_agent(std::string_view name) {
  const auto& names = builtin_agent_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::unique_ptr<Agent> make_builtin_agent(std::string_view name, std::uint64_t seed) {
  if (name == "baseline1") return std::make_unique<Baseline1>();
  if (name == "baseline2") return std::make_unique<Baseline2>();
  if (name == "random2lanes") return std::make_unique<RandomWItems2Lanes>(seed);
  if (name == "greedy") return std::make_unique<Greedy>();
  if (name == "random") return std::make_unique<RandomActions>(seed);
  return nullptr;
}

}  // namespace locm
