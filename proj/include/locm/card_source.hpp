#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locm/card.hpp"

namespace locm {

struct CardSet {
  std::string name;
  Version version = Version::V12;
  std::vector<Card> cards;
  // Display names, parallel to `cards`.
  std::vector<std::string> names;

  const Card* find(int number) const;
  std::size_t size() const { return cards.size(); }
};

class CardSetError : public std::runtime_error {
 public:
  enum class Kind { Io, Parse, Validation };

  CardSetError(Kind kind, std::string message, int line = 0, int field = 0, std::vector<int> cards = {})
      : std::runtime_error(std::move(message)), kind_(kind), line_(line), field_(field), cards_(std::move(cards)) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int field() const { return field_; }
  // Offending card numbers for validation errors.
  const std::vector<int>& cards() const { return cards_; }

 private:
  Kind kind_;
  int line_;
  int field_;
  std::vector<int> cards_;
};

// Card set file: one card per line,
//   cardNumber;name;type;cost;attack;defense;abilities;myHealthChange;opponentHealthChange;cardDraw[;area]
// Blank lines and lines starting with '#' are skipped. Sets with the area
// column are 1.5 sets; others default to 1.2 unless `version` says 1.0.
CardSet parse_card_set(std::string_view text, std::string name = "inline", Version laneless_version = Version::V12);
CardSet load_card_set(const std::filesystem::path& path, Version laneless_version = Version::V12);
std::string format_card_set(const CardSet& set);
void save_card_set(const CardSet& set, const std::filesystem::path& path);

// Knobs of the procedural generator. All probabilities are in [0, 1].
struct GeneratorParams {
  int min_cost = 0;
  int max_cost = 12;
  double creature_weight = 0.7;
  double green_weight = 0.1;
  double red_weight = 0.1;
  double blue_weight = 0.1;
  // Creature attack + defense ~ base + per_cost * cost +- noise.
  double stat_base = 1.0;
  double stat_per_cost = 2.0;
  int stat_noise = 1;
  // Item stat budget ~ max(1, item_per_cost * cost).
  double item_per_cost = 1.5;
  // Probability of the k-th keyword is keyword_base * keyword_decay^k.
  double keyword_base = 0.3;
  double keyword_decay = 0.5;
  double effect_probability = 0.15;
  int max_card_draw = 2;
  int max_heal = 4;
  int max_damage = 4;
  double area_lane1_weight = 0.1;
  double area_lane2_weight = 0.1;
  // Heavy tail: free blue items with large damage.
  double degenerate_probability = 0.01;
  int max_degenerate_damage = 99;

  // Empty when valid.
  std::vector<std::string> validate() const;

  // `key = value` lines, '#' comments. Unknown keys are an error.
  static GeneratorParams parse(std::string_view text);
  std::string format() const;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

// Deterministic in (params, seed, count, version). Card numbers are 1..count.
CardSet generate_cards(const GeneratorParams& params, std::uint64_t seed, int count, Version version);

// A fresh 120-card 1.5 pool.
CardSet generate_pool(const GeneratorParams& params, std::uint64_t seed);

// The fixed 160-card set used for 1.0/1.2 drafts (data/cardlist.txt holds the same cards).
const CardSet& default_card_set();

// Stable digest of card contents, for transcripts.
std::uint64_t fingerprint(const CardSet& set);

}  // namespace locm
