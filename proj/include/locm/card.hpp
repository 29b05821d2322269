#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace locm {

enum class Version : std::uint8_t { V10, V12, V15 };

std::string_view to_string(Version v);
// Accepts "1.0", "1.2", "1.5".
bool parse_version(std::string_view text, Version& out);

enum class Keyword : std::uint8_t {
  Breakthrough = 0,
  Charge,
  Drain,
  Guard,
  Lethal,
  Ward,
};

inline constexpr int kKeywordCount = 6;
// Protocol mask order, one letter per keyword.
inline constexpr std::string_view kKeywordLetters = "BCDGLW";

class KeywordSet {
 public:
  constexpr KeywordSet() = default;
  constexpr explicit KeywordSet(std::uint8_t bits) : bits_(bits & kAll) {}

  constexpr bool has(Keyword k) const { return bits_ & bit(k); }
  constexpr void add(Keyword k) { bits_ |= bit(k); }
  constexpr void remove(Keyword k) { bits_ &= static_cast<std::uint8_t>(~bit(k)); }
  constexpr void add_all(KeywordSet other) { bits_ |= other.bits_; }
  constexpr void remove_all(KeywordSet other) { bits_ &= static_cast<std::uint8_t>(~other.bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  int count() const;

  // Six characters, e.g. "-C---W".
  std::string mask() const;
  // Inverse of mask(); false on malformed input.
  static bool from_mask(std::string_view mask, KeywordSet& out);

  friend constexpr bool operator==(KeywordSet, KeywordSet) = default;

  static constexpr std::uint8_t kAll = 0x3f;

 private:
  static constexpr std::uint8_t bit(Keyword k) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k)); }
  std::uint8_t bits_ = 0;
};

enum class CardType : std::uint8_t { Creature = 0, GreenItem = 1, RedItem = 2, BlueItem = 3 };

std::string_view to_string(CardType t);
bool parse_card_type(std::string_view text, CardType& out);

// Area ability, only meaningful under 1.5 rules.
enum class Area : std::uint8_t { Target = 0, Lane1 = 1, Lane2 = 2 };

struct Card {
  int number = 0;
  CardType type = CardType::Creature;
  int cost = 0;
  int attack = 0;
  int defense = 0;
  KeywordSet keywords;
  int my_health_change = 0;
  int opp_health_change = 0;
  int card_draw = 0;
  Area area = Area::Target;

  bool is_creature() const { return type == CardType::Creature; }
  bool is_item() const { return type != CardType::Creature; }

  friend bool operator==(const Card&, const Card&) = default;
};

// Every violated card invariant as a human-readable message; empty means valid.
std::vector<std::string> validate_card(const Card& card, Version version);

}  // namespace locm
