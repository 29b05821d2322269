#include "locm/engine.hpp"

#include <algorithm>
#include <sstream>

namespace locm {

std::string_view to_string(IgnoreReason r) {
  switch (r) {
    case IgnoreReason::WrongPhase: return "wrong-phase";
    case IgnoreReason::UnknownCard: return "unknown-card";
    case IgnoreReason::NotEnoughMana: return "not-enough-mana";
    case IgnoreReason::BadLane: return "bad-lane";
    case IgnoreReason::LaneFull: return "lane-full";
    case IgnoreReason::CannotAttack: return "cannot-attack";
    case IgnoreReason::BadTarget: return "bad-target";
    case IgnoreReason::GuardInTheWay: return "guard-in-the-way";
    case IgnoreReason::UnknownCommand: return "unknown-command";
  }
  return "?";
}

namespace {

// Action tags used by ActionRecorded events.
enum ActionTag : int { kTagSummon = 1, kTagAttack = 2, kTagUse = 3 };

Action decode_action(const Event& e) {
  switch (e.a) {
    case kTagSummon: return SummonAction{e.b, e.c};
    case kTagAttack: return AttackAction{e.b, e.c};
    case kTagUse: return UseAction{e.b, e.c};
    default: return PassAction{};
  }
}

constexpr std::string_view kind_name(EventKind k) {
  switch (k) {
    case EventKind::TurnStart: return "turn-start";
    case EventKind::ManaSet: return "mana";
    case EventKind::Draw: return "draw";
    case EventKind::Burn: return "burn";
    case EventKind::RuneBreak: return "rune-break";
    case EventKind::HealthChange: return "health";
    case EventKind::DrawCounters: return "draw-counters";
    case EventKind::BonusDraw: return "bonus-draw";
    case EventKind::BonusManaLost: return "bonus-mana-lost";
    case EventKind::Summon: return "summon";
    case EventKind::HandRemoved: return "hand-removed";
    case EventKind::ManaSpent: return "mana-spent";
    case EventKind::Damage: return "damage";
    case EventKind::WardBroken: return "ward-broken";
    case EventKind::StatsChanged: return "stats";
    case EventKind::KeywordsSet: return "keywords";
    case EventKind::Exhausted: return "exhausted";
    case EventKind::Death: return "death";
    case EventKind::DecksCleared: return "decks-cleared";
    case EventKind::ActionRecorded: return "action";
    case EventKind::Ignored: return "ignored";
    case EventKind::GameOver: return "game-over";
  }
  return "?";
}

}  // namespace

std::string to_string(const Event& e) {
  std::ostringstream out;
  out << kind_name(e.kind) << " p" << static_cast<int>(e.player);
  switch (e.kind) {
    case EventKind::KeywordsSet:
      out << " id=" << e.id << " kw=" << KeywordSet(static_cast<std::uint8_t>(e.a)).mask();
      break;
    case EventKind::Ignored:
      out << " reason=" << to_string(static_cast<IgnoreReason>(e.a));
      break;
    default:
      out << " id=" << e.id << " a=" << e.a << " b=" << e.b << " c=" << e.c;
  }
  return out.str();
}

void apply_event(GameState& s, const Event& e) {
  auto& pl = s.players[e.player];
  switch (e.kind) {
    case EventKind::TurnStart:
      s.active = e.player;
      s.turn = e.a;
      for (auto& c : pl.board) {
        c.can_attack = true;
        c.attacked_this_turn = false;
        c.summoned_this_turn = false;
      }
      for (auto& c : s.players[1 - e.player].board) c.summoned_this_turn = false;
      pl.last_actions.clear();
      break;
    case EventKind::ManaSet:
      pl.mana = e.a;
      pl.max_mana = e.b;
      break;
    case EventKind::Draw:
      pl.hand.push_back(HandCard{e.id, pl.deck.back()});
      pl.deck.pop_back();
      s.next_instance_id = std::max(s.next_instance_id, e.id + 1);
      break;
    case EventKind::Burn:
      pl.deck.pop_back();
      break;
    case EventKind::RuneBreak:
      --pl.runes;
      if (e.a) ++pl.next_turn_draw;
      break;
    case EventKind::HealthChange:
      pl.health += e.a;
      if (e.a < 0 && e.player != s.active) pl.health_lost_this_enemy_turn -= e.a;
      break;
    case EventKind::DrawCounters:
      pl.next_turn_draw = e.a;
      pl.health_lost_this_enemy_turn = e.b;
      break;
    case EventKind::BonusDraw:
      pl.next_turn_draw += e.a;
      break;
    case EventKind::BonusManaLost:
      pl.bonus_mana = false;
      break;
    case EventKind::Summon: {
      const HandCard* hc = pl.find_hand(e.b);
      BoardCreature c;
      c.instance_id = e.id;
      c.card = hc->card;
      c.attack = hc->card.attack;
      c.defense = hc->card.defense;
      c.keywords = hc->card.keywords;
      c.lane = e.a;
      c.can_attack = c.keywords.has(Keyword::Charge);
      c.summoned_this_turn = true;
      pl.board.push_back(c);
      s.next_instance_id = std::max(s.next_instance_id, e.id + 1);
      break;
    }
    case EventKind::HandRemoved:
      std::erase_if(pl.hand, [&e](const HandCard& h) { return h.instance_id == e.id; });
      break;
    case EventKind::ManaSpent:
      pl.mana -= e.a;
      break;
    case EventKind::Damage:
      pl.find_creature(e.id)->defense -= e.a;
      break;
    case EventKind::WardBroken:
      pl.find_creature(e.id)->keywords.remove(Keyword::Ward);
      break;
    case EventKind::StatsChanged: {
      auto* c = pl.find_creature(e.id);
      c->attack += e.a;
      c->defense += e.b;
      break;
    }
    case EventKind::KeywordsSet: {
      auto* c = pl.find_creature(e.id);
      const bool gained_charge = !c->keywords.has(Keyword::Charge) && KeywordSet(static_cast<std::uint8_t>(e.a)).has(Keyword::Charge);
      c->keywords = KeywordSet(static_cast<std::uint8_t>(e.a));
      if (gained_charge && c->summoned_this_turn && !c->attacked_this_turn && e.player == s.active) c->can_attack = true;
      if (!c->keywords.has(Keyword::Charge) && c->summoned_this_turn) c->can_attack = false;
      break;
    }
    case EventKind::Exhausted: {
      auto* c = pl.find_creature(e.id);
      c->attacked_this_turn = true;
      c->can_attack = false;
      break;
    }
    case EventKind::Death:
      std::erase_if(pl.board, [&e](const BoardCreature& c) { return c.instance_id == e.id; });
      break;
    case EventKind::DecksCleared:
      s.players[0].deck.clear();
      s.players[1].deck.clear();
      break;
    case EventKind::ActionRecorded:
      pl.last_actions.push_back(decode_action(e));
      break;
    case EventKind::Ignored:
      break;
    case EventKind::GameOver:
      s.winner = static_cast<Winner>(e.a);
      s.end_reason = static_cast<EndReason>(e.b);
      s.phase = Phase::Finished;
      break;
  }
}

namespace {

class Emitter {
 public:
  Emitter(GameState& s, TransitionLog* log) : s_(s), log_(log) {}

  void operator()(EventKind kind, int player, int id = 0, int a = 0, int b = 0, int c = 0) {
    const Event e{kind, static_cast<std::int8_t>(player), id, a, b, c};
    apply_event(s_, e);
    if (log_) log_->push_back(e);
  }

  GameState& state() { return s_; }

 private:
  GameState& s_;
  TransitionLog* log_;
};

void change_health(Emitter& emit, int player, int delta) {
  auto& s = emit.state();
  auto& pl = s.players[player];
  if (delta > 0 && s.config.health_cap) delta = std::min(delta, std::max(0, *s.config.health_cap - pl.health));
  if (delta == 0) return;
  emit(EventKind::HealthChange, player, 0, delta);
  if (delta < 0 && s.config.uses_runes()) {
    while (pl.runes > 0 && pl.health <= s.config.rune_step * pl.runes) emit(EventKind::RuneBreak, player, 0, 1);
  }
}

void draw_one(Emitter& emit, int player) {
  auto& s = emit.state();
  auto& pl = s.players[player];
  if (pl.deck.empty()) {
    if (s.config.uses_runes()) {
      if (pl.runes > 0) {
        const int threshold = s.config.rune_step * pl.runes;
        emit(EventKind::RuneBreak, player, 0, 0);
        change_health(emit, player, threshold - pl.health);
      } else {
        change_health(emit, player, -pl.health);
      }
    } else {
      change_health(emit, player, -s.config.empty_deck_damage);
    }
  } else if (static_cast<int>(pl.hand.size()) >= s.config.hand_limit) {
    emit(EventKind::Burn, player);
  } else {
    emit(EventKind::Draw, player, s.next_instance_id);
  }
}

void apply_card_effects(Emitter& emit, int player, const Card& card) {
  change_health(emit, player, card.my_health_change);
  change_health(emit, 1 - player, card.opp_health_change);
  if (card.card_draw > 0) emit(EventKind::BonusDraw, player, 0, card.card_draw);
}

bool lane_has_guard(const PlayerState& pl, int lane) {
  return std::any_of(pl.board.begin(), pl.board.end(),
                     [lane](const BoardCreature& c) { return c.lane == lane && c.keywords.has(Keyword::Guard); });
}

// Creature ids affected by an item aimed at `target` on `side`.
std::vector<int> area_targets(const PlayerState& side, const BoardCreature& target, Area area) {
  std::vector<int> ids;
  for (const auto& c : side.board) {
    if (area == Area::Lane2 || (area == Area::Lane1 && c.lane == target.lane) || c.instance_id == target.instance_id)
      ids.push_back(c.instance_id);
  }
  return ids;
}

}  // namespace

void begin_turn(GameState& s, TransitionLog* log) {
  Emitter emit(s, log);
  const int p = s.active;
  auto& pl = s.players[p];
  const int max_mana = std::min(pl.max_mana + 1, s.config.max_mana);
  emit(EventKind::ManaSet, p, 0, max_mana + (pl.bonus_mana ? 1 : 0), max_mana);
  int draws = pl.next_turn_draw;
  if (!s.config.uses_runes()) draws += pl.health_lost_this_enemy_turn / s.config.health_per_bonus_draw;
  emit(EventKind::DrawCounters, p, 0, 1, 0);
  for (int i = 0; i < draws; ++i) draw_one(emit, p);
}

void end_turn(GameState& s, TransitionLog* log) {
  Emitter emit(s, log);
  const int p = s.active;
  if (s.players[p].bonus_mana && s.players[p].mana == 0) emit(EventKind::BonusManaLost, p);
  const int next = 1 - p;
  const int round = s.turn + (p == 1 ? 1 : 0);
  if (round >= s.config.deck_empty_turn && !(s.players[0].deck.empty() && s.players[1].deck.empty()))
    emit(EventKind::DecksCleared, 0);
  emit(EventKind::TurnStart, next, 0, round);
}

void legal_actions(const GameState& s, std::vector<Action>& out) {
  out.clear();
  if (s.phase != Phase::Battle) {
    out.emplace_back(PassAction{});
    return;
  }
  const auto& me = s.me();
  const auto& opp = s.opponent();
  const auto& cfg = s.config;

  for (const auto& h : me.hand) {
    if (h.card.cost > me.mana) continue;
    switch (h.card.type) {
      case CardType::Creature:
        for (int lane = 0; lane < cfg.lanes; ++lane) {
          if (me.lane_count(lane) < cfg.lane_size) out.emplace_back(SummonAction{h.instance_id, lane});
        }
        break;
      case CardType::GreenItem:
        for (const auto& c : me.board) out.emplace_back(UseAction{h.instance_id, c.instance_id});
        break;
      case CardType::BlueItem:
        out.emplace_back(UseAction{h.instance_id, kFace});
        [[fallthrough]];
      case CardType::RedItem:
        for (const auto& c : opp.board) out.emplace_back(UseAction{h.instance_id, c.instance_id});
        break;
    }
  }

  for (const auto& a : me.board) {
    if (!a.can_attack || a.attacked_this_turn) continue;
    const bool guarded = lane_has_guard(opp, a.lane);
    if (!guarded) out.emplace_back(AttackAction{a.instance_id, kFace});
    for (const auto& d : opp.board) {
      if (d.lane != a.lane) continue;
      if (guarded && !d.keywords.has(Keyword::Guard)) continue;
      out.emplace_back(AttackAction{a.instance_id, d.instance_id});
    }
  }
  out.emplace_back(PassAction{});
}

std::vector<Action> legal_actions(const GameState& s) {
  std::vector<Action> out;
  legal_actions(s, out);
  return out;
}

std::optional<IgnoreReason> check_legal(const GameState& s, const Action& action) {
  if (s.phase != Phase::Battle) return IgnoreReason::WrongPhase;
  const auto& me = s.me();
  const auto& opp = s.opponent();
  const auto& cfg = s.config;

  if (const auto* sm = std::get_if<SummonAction>(&action)) {
    const HandCard* h = me.find_hand(sm->instance_id);
    if (!h || !h->card.is_creature()) return IgnoreReason::UnknownCard;
    if (h->card.cost > me.mana) return IgnoreReason::NotEnoughMana;
    if (sm->lane < 0 || sm->lane >= cfg.lanes) return IgnoreReason::BadLane;
    if (me.lane_count(sm->lane) >= cfg.lane_size) return IgnoreReason::LaneFull;
    return std::nullopt;
  }
  if (const auto* at = std::get_if<AttackAction>(&action)) {
    const BoardCreature* a = me.find_creature(at->instance_id);
    if (!a) return IgnoreReason::UnknownCard;
    if (!a->can_attack || a->attacked_this_turn) return IgnoreReason::CannotAttack;
    const bool guarded = lane_has_guard(opp, a->lane);
    if (at->target == kFace) return guarded ? std::optional(IgnoreReason::GuardInTheWay) : std::nullopt;
    const BoardCreature* d = opp.find_creature(at->target);
    if (!d || d->lane != a->lane) return IgnoreReason::BadTarget;
    if (guarded && !d->keywords.has(Keyword::Guard)) return IgnoreReason::GuardInTheWay;
    return std::nullopt;
  }
  if (const auto* use = std::get_if<UseAction>(&action)) {
    const HandCard* h = me.find_hand(use->instance_id);
    if (!h || !h->card.is_item()) return IgnoreReason::UnknownCard;
    if (h->card.cost > me.mana) return IgnoreReason::NotEnoughMana;
    switch (h->card.type) {
      case CardType::GreenItem:
        if (!me.find_creature(use->target)) return IgnoreReason::BadTarget;
        break;
      case CardType::RedItem:
        if (!opp.find_creature(use->target)) return IgnoreReason::BadTarget;
        break;
      case CardType::BlueItem:
        if (use->target != kFace && !opp.find_creature(use->target)) return IgnoreReason::BadTarget;
        break;
      case CardType::Creature:
        break;
    }
    return std::nullopt;
  }
  if (std::holds_alternative<PassAction>(action)) return std::nullopt;
  return IgnoreReason::WrongPhase;
}

void summon_creature(GameState& s, int card_id, int lane, TransitionLog* log) {
  Emitter emit(s, log);
  const int p = s.active;
  const Card card = s.me().find_hand(card_id)->card;
  const auto& cfg = s.config;
  emit(EventKind::ManaSpent, p, 0, card.cost);
  emit(EventKind::Summon, p, card_id, lane, card_id);
  if (card.area == Area::Lane1 && s.me().lane_count(lane) < cfg.lane_size) {
    emit(EventKind::Summon, p, s.next_instance_id, lane, card_id);
  } else if (card.area == Area::Lane2 && cfg.lanes > 1 && s.me().lane_count(1 - lane) < cfg.lane_size) {
    emit(EventKind::Summon, p, s.next_instance_id, 1 - lane, card_id);
  }
  emit(EventKind::HandRemoved, p, card_id);
  apply_card_effects(emit, p, card);
}

void apply_item(GameState& s, int item_id, int target, TransitionLog* log) {
  Emitter emit(s, log);
  const int p = s.active;
  const Card card = s.me().find_hand(item_id)->card;
  emit(EventKind::ManaSpent, p, 0, card.cost);
  emit(EventKind::HandRemoved, p, item_id);

  if (card.type == CardType::GreenItem) {
    auto& side = s.players[p];
    for (int id : area_targets(side, *side.find_creature(target), card.area)) {
      const auto* c = side.find_creature(id);
      if (card.attack != 0 || card.defense != 0) emit(EventKind::StatsChanged, p, id, card.attack, card.defense);
      KeywordSet kw = c->keywords;
      kw.add_all(card.keywords);
      if (kw != c->keywords) emit(EventKind::KeywordsSet, p, id, kw.bits());
    }
  } else if (target == kFace) {
    change_health(emit, 1 - p, card.defense);
  } else {
    const int o = 1 - p;
    auto& side = s.players[o];
    for (int id : area_targets(side, *side.find_creature(target), card.area)) {
      const auto* c = side.find_creature(id);
      const int attack_delta = std::max(-c->attack, card.attack);
      if (attack_delta != 0) emit(EventKind::StatsChanged, o, id, attack_delta, 0);
      if (card.defense < 0) {
        if (c->keywords.has(Keyword::Ward)) {
          emit(EventKind::WardBroken, o, id);
        } else {
          emit(EventKind::Damage, o, id, -card.defense);
        }
      }
      KeywordSet kw = c->keywords;
      kw.remove_all(card.keywords);
      if (kw != c->keywords) emit(EventKind::KeywordsSet, o, id, kw.bits());
      if (c->defense <= 0) emit(EventKind::Death, o, id);
    }
  }
  apply_card_effects(emit, p, card);
}

void resolve_attack(GameState& s, int attacker_id, int target, TransitionLog* log) {
  Emitter emit(s, log);
  const int p = s.active;
  const int o = 1 - p;
  emit(EventKind::Exhausted, p, attacker_id);
  const BoardCreature attacker = *s.players[p].find_creature(attacker_id);

  if (target == kFace) {
    if (attacker.attack > 0) {
      change_health(emit, o, -attacker.attack);
      if (attacker.keywords.has(Keyword::Drain)) change_health(emit, p, attacker.attack);
    }
    return;
  }

  const BoardCreature defender = *s.players[o].find_creature(target);
  int dealt_to_defender = 0;
  int dealt_to_attacker = 0;
  if (attacker.attack > 0) {
    if (defender.keywords.has(Keyword::Ward)) {
      emit(EventKind::WardBroken, o, target);
    } else {
      dealt_to_defender = attacker.attack;
      emit(EventKind::Damage, o, target, dealt_to_defender);
    }
  }
  if (defender.attack > 0) {
    if (attacker.keywords.has(Keyword::Ward)) {
      emit(EventKind::WardBroken, p, attacker_id);
    } else {
      dealt_to_attacker = defender.attack;
      emit(EventKind::Damage, p, attacker_id, dealt_to_attacker);
    }
  }
  const bool defender_dies =
      defender.defense - dealt_to_defender <= 0 || (dealt_to_defender > 0 && attacker.keywords.has(Keyword::Lethal));
  const bool attacker_dies =
      attacker.defense - dealt_to_attacker <= 0 || (dealt_to_attacker > 0 && defender.keywords.has(Keyword::Lethal));
  if (defender_dies) emit(EventKind::Death, o, target);
  if (attacker_dies) emit(EventKind::Death, p, attacker_id);

  if (attacker.keywords.has(Keyword::Breakthrough) && dealt_to_defender > defender.defense)
    change_health(emit, o, defender.defense - dealt_to_defender);
  if (attacker.keywords.has(Keyword::Drain) && dealt_to_defender > 0) change_health(emit, p, dealt_to_defender);
}

EndCheck check_end(const GameState& s) {
  if (s.phase == Phase::Finished) {
    if (s.winner == Winner::Draw) return {Outcome::Draw, -1, s.end_reason};
    return {Outcome::Won, static_cast<int>(s.winner), s.end_reason};
  }
  const int h0 = s.players[0].health;
  const int h1 = s.players[1].health;
  if (h0 <= 0 && h1 <= 0) return {Outcome::Won, s.active, EndReason::HealthZero};
  if (h0 <= 0) return {Outcome::Won, 1, EndReason::HealthZero};
  if (h1 <= 0) return {Outcome::Won, 0, EndReason::HealthZero};
  if (s.phase == Phase::Battle && s.turn >= s.config.max_turns_hard_cap) {
    if (h0 == h1) return {Outcome::Draw, -1, EndReason::HardCap};
    return {Outcome::Won, h0 > h1 ? 0 : 1, EndReason::HardCap};
  }
  return {};
}

void finish(GameState& s, Winner winner, EndReason reason, TransitionLog* log) {
  Emitter emit(s, log);
  emit(EventKind::GameOver, 0, 0, static_cast<int>(winner), static_cast<int>(reason));
}

bool settle(GameState& s, TransitionLog* log) {
  if (s.finished()) return true;
  const EndCheck ec = check_end(s);
  if (ec.outcome == Outcome::Ongoing) return false;
  finish(s, ec.outcome == Outcome::Draw ? Winner::Draw : winner_for(ec.player), ec.reason, log);
  return true;
}

ApplyResult apply_action(GameState& s, const Action& action, Policy policy, TransitionLog* log) {
  if (s.finished()) return {ApplyStatus::Ignored, IgnoreReason::WrongPhase};
  if (auto why = check_legal(s, action)) {
    if (policy == Policy::Strict) {
      finish(s, winner_for(1 - s.active), EndReason::InvalidStrict, log);
      return {ApplyStatus::Rejected, *why};
    }
    Emitter emit(s, log);
    emit(EventKind::Ignored, s.active, 0, static_cast<int>(*why));
    return {ApplyStatus::Ignored, *why};
  }
  Emitter emit(s, log);
  const int p = s.active;
  if (const auto* sm = std::get_if<SummonAction>(&action)) {
    emit(EventKind::ActionRecorded, p, 0, kTagSummon, sm->instance_id, sm->lane);
    summon_creature(s, sm->instance_id, sm->lane, log);
  } else if (const auto* at = std::get_if<AttackAction>(&action)) {
    emit(EventKind::ActionRecorded, p, 0, kTagAttack, at->instance_id, at->target);
    resolve_attack(s, at->instance_id, at->target, log);
  } else if (const auto* use = std::get_if<UseAction>(&action)) {
    emit(EventKind::ActionRecorded, p, 0, kTagUse, use->instance_id, use->target);
    apply_item(s, use->instance_id, use->target, log);
  }
  settle(s, log);
  return {};
}

}  // namespace locm
