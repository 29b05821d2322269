#include "locm/protocol.hpp"

#include <array>
#include <charconv>
#include <limits>

namespace locm {

Card VisibleCard::to_card() const {
  Card c;
  c.number = card_number;
  c.type = type;
  c.cost = cost;
  c.attack = attack;
  c.defense = defense;
  c.keywords = keywords;
  c.my_health_change = my_health_change;
  c.opp_health_change = opp_health_change;
  c.card_draw = card_draw;
  c.area = area;
  return c;
}

namespace {

VisibleCard visible(const Card& c, int instance_id, int location, int lane) {
  VisibleCard v;
  v.card_number = c.number;
  v.instance_id = instance_id;
  v.location = location;
  v.type = c.type;
  v.cost = c.cost;
  v.attack = c.attack;
  v.defense = c.defense;
  v.keywords = c.keywords;
  v.my_health_change = c.my_health_change;
  v.opp_health_change = c.opp_health_change;
  v.card_draw = c.card_draw;
  v.area = c.area;
  v.lane = lane;
  return v;
}

VisibleCard visible(const BoardCreature& b, int location) {
  VisibleCard v = visible(b.card, b.instance_id, location, b.lane);
  v.attack = b.attack;
  v.defense = b.defense;
  v.keywords = b.keywords;
  return v;
}

PlayerSummary summarize(const GameState& s, const PlayerState& pl) {
  return PlayerSummary{pl.health, pl.mana, static_cast<int>(pl.deck.size()),
                       s.config.uses_runes() ? pl.runes : pl.next_turn_draw};
}

void append_int(std::string& out, int v) {
  std::array<char, 16> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), end);
}

}  // namespace

AgentView make_view(const GameState& s, int viewpoint) {
  AgentView v;
  v.version = s.config.version;
  v.phase = s.phase == Phase::Finished ? Phase::Battle : s.phase;
  const auto& me = s.players[viewpoint];
  const auto& opp = s.players[1 - viewpoint];
  v.me = summarize(s, me);
  v.opponent = summarize(s, opp);
  if (v.phase != Phase::Battle) {
    v.me.mana = 0;
    v.opponent.mana = 0;
    for (const auto& c : s.offered) v.cards.push_back(visible(c, -1, kInHand, -1));
    return v;
  }
  v.opponent_hand_count = static_cast<int>(opp.hand.size());
  v.opponent_actions = opp.last_actions;
  v.cards.reserve(me.hand.size() + me.board.size() + opp.board.size());
  for (const auto& h : me.hand) v.cards.push_back(visible(h.card, h.instance_id, kInHand, -1));
  for (const auto& b : me.board) v.cards.push_back(visible(b, kMyBoard));
  for (const auto& b : opp.board) v.cards.push_back(visible(b, kEnemyBoard));
  return v;
}

std::string render_view(const AgentView& v) {
  std::string out;
  out.reserve(64 + 48 * v.cards.size());
  for (const auto* p : {&v.me, &v.opponent}) {
    append_int(out, p->health);
    out += ' ';
    append_int(out, p->mana);
    out += ' ';
    append_int(out, p->deck_count);
    out += ' ';
    append_int(out, p->extra);
    out += '\n';
  }
  append_int(out, v.opponent_hand_count);
  out += ' ';
  append_int(out, static_cast<int>(v.opponent_actions.size()));
  out += '\n';
  for (const auto& a : v.opponent_actions) {
    out += render_action(a, v.version);
    out += '\n';
  }
  append_int(out, static_cast<int>(v.cards.size()));
  out += '\n';
  for (const auto& c : v.cards) {
    for (int x : {c.card_number, c.instance_id, c.location, static_cast<int>(c.type), c.cost, c.attack, c.defense}) {
      append_int(out, x);
      out += ' ';
    }
    out += c.keywords.mask();
    for (int x : {c.my_health_change, c.opp_health_change, c.card_draw}) {
      out += ' ';
      append_int(out, x);
    }
    if (v.version == Version::V15) {
      out += ' ';
      append_int(out, static_cast<int>(c.area));
    }
    out += ' ';
    append_int(out, c.lane);
    out += '\n';
  }
  return out;
}

std::string render_turn_input(const GameState& state, int viewpoint) { return render_view(make_view(state, viewpoint)); }

std::string ParseError::describe() const {
  std::string out = "parse error at byte " + std::to_string(offset) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += " | ";
      out += expected[i];
    }
    out += ')';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agent output

std::string render_action(const Action& action, Version version) {
  std::string out;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, PickAction>) {
          out = "PICK ";
          append_int(out, a.index);
        } else if constexpr (std::is_same_v<T, ChooseAction>) {
          for (std::size_t i = 0; i < a.card_numbers.size(); ++i) {
            if (i) out += ';';
            out += "CHOOSE ";
            append_int(out, a.card_numbers[i]);
          }
        } else if constexpr (std::is_same_v<T, SummonAction>) {
          out = "SUMMON ";
          append_int(out, a.instance_id);
          if (version != Version::V10) {
            out += ' ';
            append_int(out, a.lane);
          }
        } else if constexpr (std::is_same_v<T, AttackAction>) {
          out = "ATTACK ";
          append_int(out, a.instance_id);
          out += ' ';
          append_int(out, a.target);
        } else if constexpr (std::is_same_v<T, UseAction>) {
          out = "USE ";
          append_int(out, a.instance_id);
          out += ' ';
          append_int(out, a.target);
        } else {
          out = "PASS";
        }
      },
      action);
  return out;
}

std::string render_actions(const std::vector<Action>& actions, Version version) {
  std::string out;
  for (const auto& a : actions) {
    std::string one = render_action(a, version);
    if (one.empty()) continue;
    if (!out.empty()) out += ';';
    out += one;
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class OutputScanner {
 public:
  OutputScanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  std::string_view word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_upper(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Whitespace-separated signed integer argument.
  std::optional<int> integer() {
    const std::size_t save = pos_;
    if (pos_ >= text_.size() || !is_space(text_[pos_])) return std::nullopt;
    skip_space();
    std::size_t p = pos_;
    if (p < text_.size() && text_[p] == '-') ++p;
    if (p >= text_.size() || !is_digit(text_[p])) {
      pos_ = save;
      return std::nullopt;
    }
    while (p < text_.size() && is_digit(text_[p])) ++p;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + p, value);
    if (ec != std::errc() || ptr != text_.data() + p) {
      pos_ = save;
      return std::nullopt;
    }
    pos_ = p;
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

struct CommandSpec {
  std::string_view keyword;
  int arity;
};

}  // namespace

ParseResult<std::vector<Action>> parse_agent_output(std::string_view text, Phase phase, Version version, Policy policy) {
  std::vector<CommandSpec> commands;
  switch (phase) {
    case Phase::Draft: commands = {{"PICK", 1}}; break;
    case Phase::Construction: commands = {{"CHOOSE", 1}}; break;
    default: commands = {{"SUMMON", version == Version::V10 ? 1 : 2}, {"ATTACK", 2}, {"USE", 2}, {"PASS", 0}}; break;
  }
  std::vector<std::string> keywords;
  for (const auto& c : commands) keywords.emplace_back(c.keyword);

  std::vector<Action> actions;
  ChooseAction choose;
  auto finish = [&]() -> ParseResult<std::vector<Action>> {
    if (phase == Phase::Construction) return std::vector<Action>{std::move(choose)};
    return std::move(actions);
  };
  int complete = 0;
  auto fail = [&](std::size_t offset, std::vector<std::string> expected, std::string message) -> ParseResult<std::vector<Action>> {
    if (policy == Policy::Lenient && complete > 0) return finish();
    return ParseError{offset, std::move(expected), std::move(message)};
  };

  OutputScanner sc(text);
  while (true) {
    sc.skip_space();
    if (sc.at_end()) break;
    if (sc.peek() == ';') {
      sc.advance();
      continue;
    }
    const std::size_t start = sc.pos();
    const std::string_view word = sc.word();
    const CommandSpec* spec = nullptr;
    for (const auto& c : commands) {
      if (c.keyword == word) spec = &c;
    }
    if (!spec) return fail(start, keywords, "expected command keyword");

    std::array<int, 2> args{};
    for (int i = 0; i < spec->arity; ++i) {
      auto v = sc.integer();
      if (!v) return fail(sc.pos(), {"integer"}, "expected integer argument for " + std::string(spec->keyword));
      args[i] = *v;
    }
    sc.skip_space();
    if (!sc.at_end() && sc.peek() != ';') return fail(sc.pos(), {";", "end of input"}, "unexpected trailing input");

    if (word == "PICK") {
      actions.emplace_back(PickAction{args[0]});
    } else if (word == "CHOOSE") {
      choose.card_numbers.push_back(args[0]);
    } else if (word == "SUMMON") {
      actions.emplace_back(SummonAction{args[0], version == Version::V10 ? 0 : args[1]});
    } else if (word == "ATTACK") {
      actions.emplace_back(AttackAction{args[0], args[1]});
    } else if (word == "USE") {
      actions.emplace_back(UseAction{args[0], args[1]});
    } else {
      actions.emplace_back(PassAction{});
    }
    ++complete;
  }
  return finish();
}

// ---------------------------------------------------------------------------
// Turn input

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next line with its starting byte offset; nullopt at end of input.
  std::optional<std::string_view> next() {
    if (pos_ >= text_.size()) return std::nullopt;
    line_start_ = pos_;
    const std::size_t nl = text_.find('\n', pos_);
    std::string_view line = text_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }
  std::size_t line_start() const { return line_start_; }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
};

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool int_token(std::string_view t, int& out) {
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

}  // namespace

ParseResult<AgentView> parse_turn_input(std::string_view text, bool laneless) {
  LineReader lines(text);
  AgentView view;
  auto error = [&](std::string message) { return ParseError{lines.line_start(), {}, std::move(message)}; };

  auto int_line = [&](int count, std::vector<int>& out, const char* what) -> std::optional<ParseError> {
    auto line = lines.next();
    if (!line) return ParseError{text.size(), {what}, "unexpected end of input"};
    auto t = tokens(*line);
    if (static_cast<int>(t.size()) != count) return error(std::string(what) + ": expected " + std::to_string(count) + " integers");
    out.resize(count);
    for (int i = 0; i < count; ++i) {
      if (!int_token(t[i], out[i])) return error(std::string(what) + ": bad integer '" + std::string(t[i]) + "'");
    }
    return std::nullopt;
  };

  std::vector<int> nums;
  for (auto* p : {&view.me, &view.opponent}) {
    if (auto e = int_line(4, nums, "player line")) return *e;
    *p = PlayerSummary{nums[0], nums[1], nums[2], nums[3]};
  }
  if (auto e = int_line(2, nums, "hand/action counts")) return *e;
  view.opponent_hand_count = nums[0];
  const int action_count = nums[1];
  if (action_count < 0 || action_count > 1000) return error("bad opponent action count");
  std::vector<std::string_view> action_lines;
  for (int i = 0; i < action_count; ++i) {
    auto line = lines.next();
    if (!line) return ParseError{text.size(), {"opponent action"}, "unexpected end of input"};
    action_lines.push_back(*line);
  }
  if (auto e = int_line(1, nums, "card count")) return *e;
  const int card_count = nums[0];
  if (card_count < 0 || card_count > 10000) return error("bad card count");

  std::optional<std::size_t> width;
  for (int i = 0; i < card_count; ++i) {
    auto line = lines.next();
    if (!line) return ParseError{text.size(), {"card line"}, "unexpected end of input"};
    auto t = tokens(*line);
    if (t.size() != 12 && t.size() != 13) return error("card line: expected 12 or 13 fields");
    if (width && *width != t.size()) return error("card line: inconsistent field count");
    width = t.size();
    VisibleCard c;
    int type = 0;
    int area = 0;
    int* ints_before_mask[] = {&c.card_number, &c.instance_id, &c.location, &type, &c.cost, &c.attack, &c.defense};
    for (int k = 0; k < 7; ++k) {
      if (!int_token(t[k], *ints_before_mask[k])) return error("card line: bad integer '" + std::string(t[k]) + "'");
    }
    if (type < 0 || type > 3) return error("card line: bad card type");
    c.type = static_cast<CardType>(type);
    if (!KeywordSet::from_mask(t[7], c.keywords)) return error("card line: bad abilities mask");
    std::vector<int*> rest = {&c.my_health_change, &c.opp_health_change, &c.card_draw};
    if (t.size() == 13) rest.push_back(&area);
    rest.push_back(&c.lane);
    for (std::size_t k = 0; k < rest.size(); ++k) {
      if (!int_token(t[8 + k], *rest[k])) return error("card line: bad integer '" + std::string(t[8 + k]) + "'");
    }
    if (area < 0 || area > 2) return error("card line: bad area");
    c.area = static_cast<Area>(area);
    view.cards.push_back(c);
  }
  while (auto line = lines.next()) {
    if (!tokens(*line).empty()) return error("unexpected trailing input");
  }

  if (width == 13u) {
    view.version = Version::V15;
  } else {
    view.version = laneless ? Version::V10 : Version::V12;
  }
  if (view.me.mana == 0) {
    view.phase = view.version == Version::V15 ? Phase::Construction : Phase::Draft;
  } else {
    view.phase = Phase::Battle;
  }
  for (auto line : action_lines) {
    auto parsed = parse_agent_output(line, Phase::Battle, view.version, Policy::Strict);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
      err->offset += static_cast<std::size_t>(line.data() - text.data());
      return *err;
    }
    auto& list = std::get<std::vector<Action>>(parsed);
    if (list.size() != 1) return ParseError{static_cast<std::size_t>(line.data() - text.data()), {}, "expected one action per line"};
    view.opponent_actions.push_back(list.front());
  }
  return view;
}

std::optional<std::string> read_turn_block(std::istream& in) {
  std::string block;
  std::string line;
  auto take = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    block += line;
    block += '\n';
    return true;
  };
  auto count_at = [&](int index) -> std::optional<int> {
    auto t = tokens(line);
    int v = 0;
    if (static_cast<int>(t.size()) <= index || !int_token(t[index], v) || v < 0 || v > 10000) return std::nullopt;
    return v;
  };
  if (!take() || !take() || !take()) return std::nullopt;
  auto actions = count_at(1);
  if (!actions) return std::nullopt;
  for (int i = 0; i < *actions; ++i) {
    if (!take()) return std::nullopt;
  }
  if (!take()) return std::nullopt;
  auto cards = count_at(0);
  if (!cards) return std::nullopt;
  for (int i = 0; i < *cards; ++i) {
    if (!take()) return std::nullopt;
  }
  return block;
}

}  // namespace locm
