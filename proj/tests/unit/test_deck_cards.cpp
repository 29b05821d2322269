#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <set>

#include "locm/card_source.hpp"
#include "locm/deck_phase.hpp"
#include "locm/rng.hpp"

using namespace locm;

namespace {

std::vector<int> numbers(const std::vector<Card>& cards) {
  std::vector<int> out;
  for (const auto& c : cards) out.push_back(c.number);
  return out;
}

std::vector<std::vector<int>> option_stream(std::uint64_t seed) {
  std::vector<std::vector<int>> out;
  for (int t = 0; t < 30; ++t) out.push_back(numbers(draft_options(default_card_set(), seed, t)));
  return out;
}

ConstructionState pool_state(std::uint64_t seed) {
  ConstructionState cs;
  cs.pool = generate_pool(GeneratorParams{}, seed);
  return cs;
}

const std::filesystem::path kCardList = std::filesystem::path(LOCM_SOURCE_DIR) / "data" / "cardlist.txt";

}  // namespace

// ---- draft -----------------------------------------------------------------

TEST(Draft, OptionsAreDeterministic) {
  EXPECT_EQ(draft_options(default_card_set(), 42, 7), draft_options(default_card_set(), 42, 7));
}

TEST(Draft, OptionsAreThreeDistinctCards) {
  for (int t = 0; t < 30; ++t) {
    const auto opts = numbers(draft_options(default_card_set(), 9, t));
    ASSERT_EQ(opts.size(), 3u);
    EXPECT_EQ(std::set<int>(opts.begin(), opts.end()).size(), 3u);
  }
}

TEST(Draft, DifferentSeedsGiveDifferentStreams) {
  std::set<std::vector<std::vector<int>>> streams;
  for (std::uint64_t seed = 0; seed < 100; ++seed) streams.insert(option_stream(seed));
  // Fewer than 1% identical streams.
  EXPECT_GE(streams.size(), 100u);
}

TEST(Draft, BothPlayersSeeTheSameOptions) {
  const auto cfg = RulesetConfig::for_version(Version::V12);
  DraftState d = start_draft(default_card_set(), 5, cfg);
  Rng rng(1);
  while (!d.complete()) {
    const auto opts = d.options;
    const int i0 = rng.range(0, 2);
    const int i1 = rng.range(0, 2);
    EXPECT_EQ(apply_pick(d, 0, i0, Policy::Strict).card, opts[i0]);
    EXPECT_EQ(d.options, opts);
    EXPECT_EQ(apply_pick(d, 1, i1, Policy::Strict).card, opts[i1]);
  }
  EXPECT_EQ(d.picks[0].size(), 30u);
  EXPECT_EQ(d.picks[1].size(), 30u);
}

TEST(Draft, PickIndexOneTakesSecondOption) {
  DraftState d = start_draft(default_card_set(), 3, RulesetConfig::for_version(Version::V12));
  const auto opts = d.options;
  const auto out = apply_pick(d, 0, 1, Policy::Strict);
  EXPECT_TRUE(out.accepted);
  EXPECT_FALSE(out.fell_back);
  ASSERT_EQ(d.picks[0].size(), 1u);
  EXPECT_EQ(d.picks[0][0], opts[1]);
}

TEST(Draft, OutOfRangeFallsBackUnderLenient) {
  DraftState d = start_draft(default_card_set(), 3, RulesetConfig::for_version(Version::V12));
  const auto opts = d.options;
  const auto out = apply_pick(d, 0, 5, Policy::Lenient);
  EXPECT_TRUE(out.accepted);
  EXPECT_TRUE(out.fell_back);
  EXPECT_EQ(d.picks[0].at(0), opts[0]);
}

TEST(Draft, OutOfRangeRejectedUnderStrict) {
  DraftState d = start_draft(default_card_set(), 3, RulesetConfig::for_version(Version::V12));
  const auto out = apply_pick(d, 0, 3, Policy::Strict);
  EXPECT_FALSE(out.accepted);
  EXPECT_TRUE(d.picks[0].empty());
}

TEST(Draft, ThirtyPicksCompleteTheDraft) {
  DraftState d = start_draft(default_card_set(), 11, RulesetConfig::for_version(Version::V12));
  for (int t = 0; t < 30; ++t) {
    EXPECT_FALSE(d.complete());
    apply_pick(d, 0, 0, Policy::Strict);
    apply_pick(d, 1, 2, Policy::Strict);
  }
  EXPECT_TRUE(d.complete());
  EXPECT_EQ(d.picks[0].size(), 30u);
  EXPECT_FALSE(apply_pick(d, 0, 0, Policy::Lenient).accepted);
}

TEST(Draft, PlayerCannotPickTwiceInOneTurn) {
  DraftState d = start_draft(default_card_set(), 11, RulesetConfig::for_version(Version::V12));
  apply_pick(d, 0, 0, Policy::Strict);
  EXPECT_FALSE(apply_pick(d, 0, 0, Policy::Strict).accepted);
  EXPECT_EQ(d.picks[0].size(), 1u);
}

// ---- construction ----------------------------------------------------------

TEST(Construction, ThirtyDistinctPoolCards) {
  ConstructionState cs = pool_state(1);
  std::vector<int> picks;
  for (int i = 0; i < 30; ++i) picks.push_back(cs.pool.cards[i].number);
  const auto out = apply_choice(cs, 0, picks, RulesetConfig::for_version(Version::V15), Policy::Strict, 9);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.padded, 0);
  EXPECT_EQ(numbers(out.deck), picks);
}

TEST(Construction, ThreeCopiesRejectedUnderStrict) {
  ConstructionState cs = pool_state(1);
  const auto out = apply_choice(cs, 0, {17, 17, 17}, RulesetConfig::for_version(Version::V15), Policy::Strict, 9);
  EXPECT_FALSE(out.accepted);
  EXPECT_NE(out.reason.find("17"), std::string::npos);
  EXPECT_TRUE(cs.picks[0].empty());
}

TEST(Construction, ThreeCopiesDroppedUnderLenient) {
  ConstructionState cs = pool_state(1);
  const auto out = apply_choice(cs, 0, {17, 17, 17, 500}, RulesetConfig::for_version(Version::V15), Policy::Lenient, 9);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.dropped, (std::vector<int>{17, 500}));
  EXPECT_EQ(out.deck.size(), 30u);
  EXPECT_EQ(std::count(cs.picks[0].begin(), cs.picks[0].end(), 17), 2);
}

TEST(Construction, TooManyPicksRejectedUnderStrict) {
  ConstructionState cs = pool_state(1);
  std::vector<int> picks;
  for (int i = 0; i < 31; ++i) picks.push_back(cs.pool.cards[i].number);
  EXPECT_FALSE(apply_choice(cs, 0, picks, RulesetConfig::for_version(Version::V15), Policy::Strict, 9).accepted);
}

TEST(Construction, ShortChoicePaddedToThirty) {
  const auto cfg = RulesetConfig::for_version(Version::V15);
  ConstructionState cs = pool_state(2);
  std::vector<int> picks;
  for (int i = 0; i < 20; ++i) picks.push_back(cs.pool.cards[i].number);
  const auto out = apply_choice(cs, 0, picks, cfg, Policy::Strict, 77);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.padded, 10);
  ASSERT_EQ(out.deck.size(), 30u);
  std::map<int, int> copies;
  for (const auto& c : out.deck) EXPECT_LE(++copies[c.number], 2);

  ConstructionState again = pool_state(2);
  EXPECT_EQ(apply_choice(again, 0, picks, cfg, Policy::Strict, 77).deck, out.deck);
}

TEST(Construction, EmptyChoiceIsAllPadding) {
  ConstructionState cs = pool_state(3);
  const auto out = apply_choice(cs, 1, {}, RulesetConfig::for_version(Version::V15), Policy::Strict, 5);
  EXPECT_EQ(out.padded, 30);
  EXPECT_EQ(cs.picks[1].size(), 30u);
}

TEST(FinalizeDeck, SameSeedSameOrder) {
  const auto& cards = default_card_set().cards;
  std::vector<Card> deck(cards.begin(), cards.begin() + 30);
  EXPECT_EQ(finalize_deck(deck, 4), finalize_deck(deck, 4));
  EXPECT_NE(finalize_deck(deck, 4), finalize_deck(deck, 5));
}

TEST(FinalizeDeck, SingletonIsItself) {
  const std::vector<Card> one{default_card_set().cards[3]};
  EXPECT_EQ(finalize_deck(one, 99), one);
}

TEST(FinalizeDeck, IsAPermutation) {
  const auto& cards = default_card_set().cards;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::vector<Card> deck(cards.begin() + static_cast<long>(seed), cards.begin() + static_cast<long>(seed) + 30);
    auto a = numbers(deck);
    auto b = numbers(finalize_deck(deck, seed));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

// ---- card sets -------------------------------------------------------------

TEST(CardSet, ShippedFileMatchesDefaultSet) {
  const CardSet loaded = load_card_set(kCardList);
  ASSERT_EQ(loaded.size(), 160u);
  EXPECT_EQ(loaded.cards, default_card_set().cards);
  EXPECT_EQ(fingerprint(loaded), fingerprint(default_card_set()));
}

TEST(CardSet, DefaultSetHasEveryType) {
  std::set<CardType> types;
  for (const auto& c : default_card_set().cards) {
    types.insert(c.type);
    EXPECT_TRUE(validate_card(c, Version::V12).empty()) << c.number;
    EXPECT_EQ(c.area, Area::Target);
  }
  EXPECT_EQ(types.size(), 4u);
}

TEST(CardSet, DuplicateNumberNamed) {
  const std::string text =
      "1;A;creature;1;1;1;------;0;0;0\n"
      "7;B;creature;1;1;1;------;0;0;0\n"
      "7;C;creature;1;2;1;------;0;0;0\n";
  try {
    parse_card_set(text);
    FAIL() << "expected a validation error";
  } catch (const CardSetError& e) {
    EXPECT_EQ(e.kind(), CardSetError::Kind::Validation);
    EXPECT_EQ(e.cards(), std::vector<int>{7});
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos);
  }
}

TEST(CardSet, RedItemWithPositiveAttack) {
  try {
    parse_card_set("3;Bad;itemRed;1;2;0;------;0;0;0\n");
    FAIL() << "expected a validation error";
  } catch (const CardSetError& e) {
    EXPECT_EQ(e.kind(), CardSetError::Kind::Validation);
    EXPECT_EQ(e.cards(), std::vector<int>{3});
  }
}

TEST(CardSet, ParseErrorsCarryPosition) {
  try {
    parse_card_set("# header\n1;A;creature;1;1;1;------;0;0;0\n2;B;wizard;1;1;1;------;0;0;0\n");
    FAIL() << "expected a parse error";
  } catch (const CardSetError& e) {
    EXPECT_EQ(e.kind(), CardSetError::Kind::Parse);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), 3);
  }
  EXPECT_THROW(parse_card_set("1;A;creature;1;1\n"), CardSetError);
  EXPECT_THROW(parse_card_set("1;A;creature;x;1;1;------;0;0;0\n"), CardSetError);
  EXPECT_THROW(parse_card_set("1;A;creature;1;1;1;--Q---;0;0;0\n"), CardSetError);
}

TEST(CardSet, MissingFileIsIoError) {
  try {
    load_card_set("/nonexistent/cards.txt");
    FAIL();
  } catch (const CardSetError& e) {
    EXPECT_EQ(e.kind(), CardSetError::Kind::Io);
  }
}

TEST(CardSet, AreaColumnMeansV15) {
  const CardSet s = parse_card_set("1;A;creature;1;1;1;------;0;0;0;2\n");
  EXPECT_EQ(s.version, Version::V15);
  EXPECT_EQ(s.cards[0].area, Area::Lane2);
  EXPECT_EQ(parse_card_set("1;A;creature;1;1;1;------;0;0;0\n").version, Version::V12);
}

TEST(CardSet, FormatRoundTrips) {
  const CardSet pool = generate_pool(GeneratorParams{}, 8);
  const CardSet back = parse_card_set(format_card_set(pool));
  EXPECT_EQ(back.cards, pool.cards);
  EXPECT_EQ(back.version, Version::V15);
  EXPECT_EQ(parse_card_set(format_card_set(default_card_set())).cards, default_card_set().cards);
}

// ---- generator -------------------------------------------------------------

TEST(Generator, PoolIsDeterministic) {
  const GeneratorParams p;
  const CardSet a = generate_pool(p, 123);
  const CardSet b = generate_pool(p, 123);
  ASSERT_EQ(a.size(), 120u);
  EXPECT_EQ(a.cards, b.cards);
}

TEST(Generator, NumbersAreOneToCount) {
  const CardSet pool = generate_pool(GeneratorParams{}, 4);
  for (std::size_t i = 0; i < pool.size(); ++i) EXPECT_EQ(pool.cards[i].number, static_cast<int>(i) + 1);
}

TEST(Generator, TenThousandPools) {
  const GeneratorParams p;
  std::array<int, 4> pools_with_type{};
  std::set<std::uint64_t> fingerprints;
  int invalid = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const CardSet pool = generate_pool(p, derive_seed(seed, tag_of("pool")));
    std::array<bool, 4> seen{};
    for (const auto& c : pool.cards) {
      seen[static_cast<int>(c.type)] = true;
      if (!validate_card(c, Version::V15).empty()) ++invalid;
    }
    for (int t = 0; t < 4; ++t) pools_with_type[t] += seen[t];
    fingerprints.insert(fingerprint(pool));
  }
  EXPECT_EQ(invalid, 0);
  for (int t = 0; t < 4; ++t) EXPECT_GT(pools_with_type[t], 9900) << t;
  // Collision rate below 1e-4 over 10^4 samples: no collision at all.
  EXPECT_EQ(fingerprints.size(), 10000u);
}

TEST(Generator, DegenerateBlueItemsAreRepresentable) {
  GeneratorParams p;
  p.degenerate_probability = 1.0;
  p.creature_weight = 0;
  p.green_weight = 0;
  p.red_weight = 0;
  p.blue_weight = 1;
  const CardSet set = generate_cards(p, 6, 500, Version::V15);
  int worst = 0;
  for (const auto& c : set.cards) {
    EXPECT_EQ(c.type, CardType::BlueItem);
    EXPECT_EQ(c.cost, 0);
    EXPECT_TRUE(validate_card(c, Version::V15).empty());
    worst = std::max(worst, -c.defense);
  }
  EXPECT_GE(worst, 90);
  EXPECT_LE(worst, 99);

  const CardSet file = parse_card_set("1;Doom;itemBlue;0;0;-99;------;0;0;0;0\n");
  EXPECT_EQ(file.cards[0].defense, -99);
}

TEST(Generator, ParamsValidation) {
  EXPECT_TRUE(GeneratorParams{}.validate().empty());
  GeneratorParams p;
  p.keyword_base = 1.5;
  EXPECT_FALSE(p.validate().empty());
  p = GeneratorParams{};
  p.min_cost = 5;
  p.max_cost = 2;
  EXPECT_FALSE(p.validate().empty());
  p = GeneratorParams{};
  p.creature_weight = p.green_weight = p.red_weight = p.blue_weight = 0;
  EXPECT_FALSE(p.validate().empty());
}

TEST(Generator, ParamsTextRoundTrip) {
  GeneratorParams p;
  p.max_cost = 9;
  p.degenerate_probability = 0.25;
  EXPECT_EQ(GeneratorParams::parse(p.format()), p);
  const GeneratorParams q = GeneratorParams::parse("# comment\nmax_cost = 7\n\nblue_weight=0.5\n");
  EXPECT_EQ(q.max_cost, 7);
  EXPECT_DOUBLE_EQ(q.blue_weight, 0.5);
  EXPECT_THROW(GeneratorParams::parse("bogus = 1\n"), std::exception);
  EXPECT_THROW(GeneratorParams::parse("max_cost = many\n"), std::exception);
}

TEST(Generator, CostRangeRespected) {
  GeneratorParams p;
  p.min_cost = 3;
  p.max_cost = 5;
  for (const auto& c : generate_cards(p, 1, 400, Version::V15).cards) {
    if (c.type == CardType::BlueItem && c.cost == 0) continue;
    EXPECT_GE(c.cost, 3);
    EXPECT_LE(c.cost, 5);
  }
}

TEST(Generator, V12SetsHaveNoArea) {
  for (const auto& c : generate_cards(GeneratorParams{}, 2, 300, Version::V12).cards) {
    EXPECT_EQ(c.area, Area::Target);
  }
}
