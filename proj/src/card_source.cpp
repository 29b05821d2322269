#include "locm/card_source.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "locm/rng.hpp"

namespace locm {

const Card* CardSet::find(int number) const {
  for (const auto& c : cards) {
    if (c.number == number) return &c;
  }
  return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool to_int(std::string_view s, int& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

CardSet parse_card_set(std::string_view text, std::string name, Version laneless_version) {
  CardSet set;
  set.name = std::move(name);
  std::optional<std::size_t> columns;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ';');
    if (fields.size() != 10 && fields.size() != 11)
      throw CardSetError(CardSetError::Kind::Parse,
                         "line " + std::to_string(line_no) + ": expected 10 or 11 fields, got " + std::to_string(fields.size()),
                         line_no);
    if (columns && *columns != fields.size())
      throw CardSetError(CardSetError::Kind::Parse, "line " + std::to_string(line_no) + ": inconsistent column count", line_no);
    columns = fields.size();

    auto fail = [&](int field, const std::string& what) {
      return CardSetError(CardSetError::Kind::Parse,
                          "line " + std::to_string(line_no) + ", field " + std::to_string(field) + ": " + what, line_no, field);
    };
    auto int_field = [&](int idx) {
      int v = 0;
      if (!to_int(trim(fields[idx]), v)) throw fail(idx + 1, "expected integer, got '" + std::string(trim(fields[idx])) + "'");
      return v;
    };

    Card c;
    c.number = int_field(0);
    const std::string card_name(trim(fields[1]));
    if (!parse_card_type(trim(fields[2]), c.type)) throw fail(3, "unknown card type '" + std::string(trim(fields[2])) + "'");
    c.cost = int_field(3);
    c.attack = int_field(4);
    c.defense = int_field(5);
    if (!KeywordSet::from_mask(trim(fields[6]), c.keywords)) throw fail(7, "bad abilities mask '" + std::string(trim(fields[6])) + "'");
    c.my_health_change = int_field(7);
    c.opp_health_change = int_field(8);
    c.card_draw = int_field(9);
    if (fields.size() == 11) {
      const int area = int_field(10);
      if (area < 0 || area > 2) throw fail(11, "area must be 0, 1 or 2");
      c.area = static_cast<Area>(area);
    }
    set.cards.push_back(c);
    set.names.push_back(card_name);
  }
  set.version = columns == 11u ? Version::V15 : laneless_version;

  std::set<int> seen;
  std::vector<int> bad;
  std::string details;
  for (const auto& c : set.cards) {
    std::vector<std::string> problems;
    if (c.number <= 0) problems.push_back("card number must be positive");
    if (!seen.insert(c.number).second) problems.push_back("duplicate card number");
    for (auto& p : validate_card(c, set.version)) problems.push_back(std::move(p));
    if (!problems.empty()) {
      bad.push_back(c.number);
      for (const auto& p : problems) details += "\n  card " + std::to_string(c.number) + ": " + p;
    }
  }
  if (!bad.empty()) throw CardSetError(CardSetError::Kind::Validation, "invalid cards:" + details, 0, 0, bad);
  return set;
}

CardSet load_card_set(const std::filesystem::path& path, Version laneless_version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CardSetError(CardSetError::Kind::Io, "cannot open card set " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_card_set(buf.str(), path.filename().string(), laneless_version);
}

std::string format_card_set(const CardSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.cards.size(); ++i) {
    const Card& c = set.cards[i];
    const std::string& name = i < set.names.size() ? set.names[i] : std::string("card");
    out += std::to_string(c.number) + ';' + name + ';' + std::string(to_string(c.type)) + ';' + std::to_string(c.cost) + ';' +
           std::to_string(c.attack) + ';' + std::to_string(c.defense) + ';' + c.keywords.mask() + ';' +
           std::to_string(c.my_health_change) + ';' + std::to_string(c.opp_health_change) + ';' + std::to_string(c.card_draw);
    if (set.version == Version::V15) out += ';' + std::to_string(static_cast<int>(c.area));
    out += '\n';
  }
  return out;
}

void save_card_set(const CardSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CardSetError(CardSetError::Kind::Io, "cannot write card set " + path.string());
  out << format_card_set(set);
  if (!out) throw CardSetError(CardSetError::Kind::Io, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Generator

namespace {

struct ParamField {
  std::string_view key;
  int GeneratorParams::*int_member = nullptr;
  double GeneratorParams::*double_member = nullptr;
};

const ParamField kParamFields[] = {
    {"min_cost", &GeneratorParams::min_cost},
    {"max_cost", &GeneratorParams::max_cost},
    {"creature_weight", nullptr, &GeneratorParams::creature_weight},
    {"green_weight", nullptr, &GeneratorParams::green_weight},
    {"red_weight", nullptr, &GeneratorParams::red_weight},
    {"blue_weight", nullptr, &GeneratorParams::blue_weight},
    {"stat_base", nullptr, &GeneratorParams::stat_base},
    {"stat_per_cost", nullptr, &GeneratorParams::stat_per_cost},
    {"stat_noise", &GeneratorParams::stat_noise},
    {"item_per_cost", nullptr, &GeneratorParams::item_per_cost},
    {"keyword_base", nullptr, &GeneratorParams::keyword_base},
    {"keyword_decay", nullptr, &GeneratorParams::keyword_decay},
    {"effect_probability", nullptr, &GeneratorParams::effect_probability},
    {"max_card_draw", &GeneratorParams::max_card_draw},
    {"max_heal", &GeneratorParams::max_heal},
    {"max_damage", &GeneratorParams::max_damage},
    {"area_lane1_weight", nullptr, &GeneratorParams::area_lane1_weight},
    {"area_lane2_weight", nullptr, &GeneratorParams::area_lane2_weight},
    {"degenerate_probability", nullptr, &GeneratorParams::degenerate_probability},
    {"max_degenerate_damage", &GeneratorParams::max_degenerate_damage},
};

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::vector<std::string> GeneratorParams::validate() const {
  std::vector<std::string> v;
  auto prob = [&v](std::string_view name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) v.push_back(std::string(name) + " must be in [0, 1]");
  };
  if (min_cost < 0 || max_cost < min_cost) v.push_back("cost range must be non-empty and non-negative");
  for (double w : {creature_weight, green_weight, red_weight, blue_weight}) {
    if (!(w >= 0.0)) v.push_back("type weights must be >= 0");
  }
  if (!(creature_weight + green_weight + red_weight + blue_weight > 0.0)) v.push_back("type weights must not all be zero");
  if (stat_noise < 0) v.push_back("stat_noise must be >= 0");
  if (!(stat_per_cost >= 0.0) || !(stat_base >= 0.0) || !(item_per_cost >= 0.0)) v.push_back("stat budgets must be >= 0");
  prob("keyword_base", keyword_base);
  prob("keyword_decay", keyword_decay);
  prob("effect_probability", effect_probability);
  prob("degenerate_probability", degenerate_probability);
  prob("area_lane1_weight", area_lane1_weight);
  prob("area_lane2_weight", area_lane2_weight);
  if (area_lane1_weight + area_lane2_weight > 1.0) v.push_back("area weights must sum to at most 1");
  if (max_card_draw < 0 || max_heal < 0 || max_damage < 0) v.push_back("effect ranges must be non-negative");
  if (max_degenerate_damage < 1) v.push_back("max_degenerate_damage must be >= 1");
  return v;
}

GeneratorParams GeneratorParams::parse(std::string_view text) {
  GeneratorParams p;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string value(trim(line.substr(eq + 1)));
    const auto* field = std::find_if(std::begin(kParamFields), std::end(kParamFields),
                                     [key](const ParamField& f) { return f.key == key; });
    if (field == std::end(kParamFields)) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    try {
      std::size_t used = 0;
      if (field->int_member) {
        p.*(field->int_member) = std::stoi(value, &used);
      } else {
        p.*(field->double_member) = std::stod(value, &used);
      }
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad value '" + value + "' for " + std::string(key));
    }
  }
  if (auto problems = p.validate(); !problems.empty()) throw std::invalid_argument("invalid generator params: " + problems.front());
  return p;
}

std::string GeneratorParams::format() const {
  std::string out;
  for (const auto& f : kParamFields) {
    out += std::string(f.key) + " = " + (f.int_member ? std::to_string(this->*(f.int_member)) : format_double(this->*(f.double_member))) + '\n';
  }
  return out;
}

namespace {

KeywordSet roll_keywords(Rng& rng, double base, double decay) {
  std::array<int, kKeywordCount> order{0, 1, 2, 3, 4, 5};
  rng.shuffle(order);
  KeywordSet kw;
  double p = base;
  for (int k : order) {
    if (rng.chance(p)) {
      kw.add(static_cast<Keyword>(k));
      p *= decay;
    }
  }
  return kw;
}

void roll_effects(Rng& rng, const GeneratorParams& params, Card& c) {
  if (!rng.chance(params.effect_probability)) return;
  switch (rng.below(3)) {
    case 0:
      if (params.max_card_draw > 0) c.card_draw = rng.range(1, params.max_card_draw);
      break;
    case 1:
      if (params.max_heal > 0) c.my_health_change = rng.range(1, params.max_heal);
      break;
    default:
      if (params.max_damage > 0) c.opp_health_change = -rng.range(1, params.max_damage);
      break;
  }
}

CardType roll_type(Rng& rng, const GeneratorParams& p) {
  const double total = p.creature_weight + p.green_weight + p.red_weight + p.blue_weight;
  double x = rng.unit() * total;
  if ((x -= p.creature_weight) < 0) return CardType::Creature;
  if ((x -= p.green_weight) < 0) return CardType::GreenItem;
  if ((x -= p.red_weight) < 0) return CardType::RedItem;
  return CardType::BlueItem;
}

Card generate_card(Rng& rng, const GeneratorParams& params, int number, Version version) {
  Card c;
  c.number = number;
  c.type = roll_type(rng, params);
  c.cost = rng.range(params.min_cost, params.max_cost);
  const int item_budget = std::max(1, static_cast<int>(std::lround(params.item_per_cost * c.cost)));

  switch (c.type) {
    case CardType::Creature: {
      const int noise = params.stat_noise > 0 ? rng.range(-params.stat_noise, params.stat_noise) : 0;
      const int budget = std::max(1, static_cast<int>(std::lround(params.stat_base + params.stat_per_cost * c.cost)) + noise);
      c.attack = rng.range(0, budget - 1);
      c.defense = budget - c.attack;
      c.keywords = roll_keywords(rng, params.keyword_base, params.keyword_decay);
      break;
    }
    case CardType::GreenItem:
      c.attack = rng.range(0, item_budget);
      c.defense = item_budget - c.attack;
      c.keywords = roll_keywords(rng, params.keyword_base, params.keyword_decay);
      break;
    case CardType::RedItem:
      c.attack = -rng.range(0, item_budget);
      c.defense = -(item_budget + c.attack);
      c.keywords = roll_keywords(rng, params.keyword_base * 0.5, params.keyword_decay);
      break;
    case CardType::BlueItem:
      if (rng.chance(params.degenerate_probability)) {
        c.cost = params.min_cost;
        c.defense = -rng.range(std::min(10, params.max_degenerate_damage), params.max_degenerate_damage);
      } else {
        c.defense = -item_budget;
      }
      break;
  }
  roll_effects(rng, params, c);
  if (version == Version::V15) {
    const double x = rng.unit();
    if (x < params.area_lane1_weight) {
      c.area = Area::Lane1;
    } else if (x < params.area_lane1_weight + params.area_lane2_weight) {
      c.area = Area::Lane2;
    }
  }
  return c;
}

std::string card_name(const Card& c) {
  static constexpr std::string_view kPrefix[] = {"Creature", "Green Item", "Red Item", "Blue Item"};
  return std::string(kPrefix[static_cast<int>(c.type)]) + " " + std::to_string(c.number);
}

}  // namespace

CardSet generate_cards(const GeneratorParams& params, std::uint64_t seed, int count, Version version) {
  if (auto problems = params.validate(); !problems.empty()) throw std::invalid_argument("invalid generator params: " + problems.front());
  CardSet set;
  set.name = "generated-" + std::to_string(seed);
  set.version = version;
  Rng rng(derive_seed(seed, tag_of("card-generator")));
  set.cards.reserve(count);
  for (int i = 1; i <= count; ++i) {
    set.cards.push_back(generate_card(rng, params, i, version));
    set.names.push_back(card_name(set.cards.back()));
  }
  return set;
}

CardSet generate_pool(const GeneratorParams& params, std::uint64_t seed) {
  return generate_cards(params, seed, 120, Version::V15);
}

const CardSet& default_card_set() {
  static const CardSet set = [] {
    GeneratorParams params;
    params.degenerate_probability = 0.0;
    CardSet s = generate_cards(params, 20180725, 160, Version::V12);
    s.name = "default";
    return s;
  }();
  return set;
}

std::uint64_t fingerprint(const CardSet& set) {
  const std::string text = format_card_set(set);
  return tag_of(text);
}

}  // namespace locm
