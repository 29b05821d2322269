#include "locm/card.hpp"

#include <bit>

namespace locm {

std::string_view to_string(Version v) {
  switch (v) {
    case Version::V10: return "1.0";
    case Version::V12: return "1.2";
    case Version::V15: return "1.5";
  }
  return "?";
}

bool parse_version(std::string_view text, Version& out) {
  if (text == "1.0" || text == "10") {
    out = Version::V10;
  } else if (text == "1.2" || text == "12") {
    out = Version::V12;
  } else if (text == "1.5" || text == "15") {
    out = Version::V15;
  } else {
    return false;
  }
  return true;
}

int KeywordSet::count() const { return std::popcount(bits_); }

std::string KeywordSet::mask() const {
  std::string out(kKeywordCount, '-');
  for (int i = 0; i < kKeywordCount; ++i) {
    if (bits_ & (1u << i)) out[i] = kKeywordLetters[i];
  }
  return out;
}

bool KeywordSet::from_mask(std::string_view mask, KeywordSet& out) {
  if (mask.size() != kKeywordCount) return false;
  std::uint8_t bits = 0;
  for (int i = 0; i < kKeywordCount; ++i) {
    if (mask[i] == kKeywordLetters[i]) {
      bits |= static_cast<std::uint8_t>(1u << i);
    } else if (mask[i] != '-') {
      return false;
    }
  }
  out = KeywordSet(bits);
  return true;
}

std::string_view to_string(CardType t) {
  switch (t) {
    case CardType::Creature: return "creature";
    case CardType::GreenItem: return "itemGreen";
    case CardType::RedItem: return "itemRed";
    case CardType::BlueItem: return "itemBlue";
  }
  return "?";
}

bool parse_card_type(std::string_view text, CardType& out) {
  for (auto t : {CardType::Creature, CardType::GreenItem, CardType::RedItem, CardType::BlueItem}) {
    if (text == to_string(t)) {
      out = t;
      return true;
    }
  }
  return false;
}

std::vector<std::string> validate_card(const Card& card, Version version) {
  std::vector<std::string> v;
  if (card.cost < 0) v.push_back("cost must be >= 0");
  if (card.card_draw < 0) v.push_back("card draw must be >= 0");
  if (card.opp_health_change > 0) v.push_back("opponent health change must be <= 0");
  switch (card.type) {
    case CardType::Creature:
      if (card.attack < 0) v.push_back("creature attack must be >= 0");
      if (card.defense < 0) v.push_back("creature defense must be >= 0");
      break;
    case CardType::GreenItem:
      if (card.attack < 0) v.push_back("green item attack must be >= 0");
      if (card.defense < 0) v.push_back("green item defense must be >= 0");
      break;
    case CardType::RedItem:
      if (card.attack > 0) v.push_back("red item attack must be <= 0");
      if (card.defense > 0) v.push_back("red item defense must be <= 0");
      break;
    case CardType::BlueItem:
      if (card.attack > 0) v.push_back("blue item attack must be <= 0");
      if (card.defense > 0) v.push_back("blue item defense must be <= 0");
      break;
  }
  if (card.area != Area::Target && version != Version::V15) v.push_back("area requires v1.5");
  return v;
}

}  // namespace locm
