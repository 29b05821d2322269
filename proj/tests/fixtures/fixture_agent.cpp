// Misbehaving protocol agents for runtime tests.
//
//   fixture_agent pass                 legal minimal replies
//   fixture_agent sleep TURN MS        sleeps MS before replying to battle turn TURN (1-based)
//   fixture_agent hog MB HOLD_MS       allocates and touches MB megabytes on the first
//                                      request, waits HOLD_MS, then plays on
//   fixture_agent stderr               logs every input block to standard error
//   fixture_agent crash TURN           exits with status 3 on battle turn TURN (0 = first request)
//   fixture_agent eager KB             writes a KB-kilobyte reply before reading its input,
//                                      then consumes input up to a line "end", replies again and drains stdin
//   fixture_agent silent               reads input, never replies

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "locm/protocol.hpp"

namespace {

std::string reply_for(const std::string& block) {
  auto parsed = locm::parse_turn_input(block);
  if (std::holds_alternative<locm::ParseError>(parsed)) return "PASS";
  switch (std::get<locm::AgentView>(parsed).phase) {
    case locm::Phase::Draft: return "PICK 0";
    case locm::Phase::Construction: return "";
    default: return "PASS";
  }
}

bool is_battle(const std::string& block) {
  auto parsed = locm::parse_turn_input(block);
  return std::holds_alternative<locm::AgentView>(parsed) &&
         std::get<locm::AgentView>(parsed).phase == locm::Phase::Battle;
}

void sleep_ms(long ms) { std::this_thread::sleep_for(std::chrono::milliseconds(ms)); }

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "pass";
  auto arg = [&](int i, long fallback) { return argc > i ? std::atol(argv[i]) : fallback; };

  if (mode == "eager") {
    const long kb = arg(2, 256);
    std::string reply = "PASS" + std::string(static_cast<std::size_t>(kb) * 1024, ' ');
    std::cout << reply << std::endl;
    std::string line;
    while (std::getline(std::cin, line)) {
      if (line == "end") break;
    }
    std::cout << "PASS" << std::endl;
    while (std::getline(std::cin, line)) {
    }
    return 0;
  }

  std::vector<char*> hoard;
  int requests = 0;
  int battle_turns = 0;
  while (auto block = locm::read_turn_block(std::cin)) {
    ++requests;
    if (is_battle(*block)) ++battle_turns;
    if (mode == "sleep" && battle_turns == arg(2, 1) && is_battle(*block)) sleep_ms(arg(3, 1000));
    if (mode == "crash" && ((arg(2, 0) == 0 && requests == 1) || (battle_turns == arg(2, 0) && is_battle(*block)))) {
      std::exit(3);
    }
    if (mode == "hog" && requests == 1) {
      const long mb = arg(2, 1100);
      for (long i = 0; i < mb; ++i) {
        char* chunk = static_cast<char*>(std::malloc(1 << 20));
        std::memset(chunk, static_cast<int>(i), 1 << 20);
        hoard.push_back(chunk);
      }
      sleep_ms(arg(3, 0));
    }
    if (mode == "stderr") std::cerr << "fixture saw " << block->size() << " bytes\n" << std::flush;
    if (mode == "silent") continue;
    std::cout << reply_for(*block) << std::endl;
  }
  return 0;
}
