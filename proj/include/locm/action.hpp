#pragma once

#include <string>
#include <variant>
#include <vector>

namespace locm {

// Target id meaning the opposing player.
inline constexpr int kFace = -1;

struct PickAction {
  int index = 0;
  friend bool operator==(const PickAction&, const PickAction&) = default;
};

struct ChooseAction {
  std::vector<int> card_numbers;
  friend bool operator==(const ChooseAction&, const ChooseAction&) = default;
};

struct SummonAction {
  int instance_id = 0;
  int lane = 0;
  friend bool operator==(const SummonAction&, const SummonAction&) = default;
};

struct AttackAction {
  int instance_id = 0;
  int target = kFace;
  friend bool operator==(const AttackAction&, const AttackAction&) = default;
};

struct UseAction {
  int instance_id = 0;
  int target = kFace;
  friend bool operator==(const UseAction&, const UseAction&) = default;
};

struct PassAction {
  friend bool operator==(const PassAction&, const PassAction&) = default;
};

using Action = std::variant<PickAction, ChooseAction, SummonAction, AttackAction, UseAction, PassAction>;

}  // namespace locm
