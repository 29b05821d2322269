#include "combat_oracle.hpp"

namespace oracle {

namespace {

// One blow of `amount` against `victim`. Returns the damage that landed;
// a ward soaks any positive blow completely and is spent doing so.
int land(Fighter& victim, int amount) {
  if (amount <= 0) return 0;
  if (victim.keywords & W) {
    victim.keywords &= ~W;
    return 0;
  }
  victim.defense -= amount;
  return amount;
}

bool survives(const Fighter& f, int landed_on_it, const Fighter& source) {
  if (f.defense <= 0) return false;
  return !(landed_on_it > 0 && (source.keywords & L));
}

}  // namespace

Outcome strike(Fighter attacker, Fighter defender) {
  const Fighter a0 = attacker;
  const Fighter d0 = defender;
  // Both blows use the stats from before the exchange.
  const int to_defender = land(defender, a0.attack);
  const int to_attacker = land(attacker, d0.attack);

  Outcome out{};
  out.attacker = attacker;
  out.defender = defender;
  out.defender_alive = survives(defender, to_defender, a0);
  out.attacker_alive = survives(attacker, to_attacker, d0);
  out.face_damage = (a0.keywords & B) && to_defender > d0.defense ? to_defender - d0.defense : 0;
  out.drain_heal = (a0.keywords & D) ? to_defender : 0;
  return out;
}

}  // namespace oracle
