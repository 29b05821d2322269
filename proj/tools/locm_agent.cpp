// A built-in agent speaking the wire protocol on standard input/output.
// Malformed input is answered with PASS and reported on standard error.

#include <iostream>

#include <CLI11.hpp>

#include "locm/agents.hpp"
#include "locm/protocol.hpp"

int main(int argc, char** argv) {
  using namespace locm;
  CLI::App app{"Built-in LOCM agent as an external process"};
  std::string name;
  std::string version_text = "1.2";
  std::uint64_t seed = 0;
  app.add_option("--agent", name, "Agent name")->required()->check(CLI::IsMember(builtin_agent_names()));
  app.add_option("--version", version_text, "Ruleset version (1.0 disambiguates laneless input)")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed of stochastic agents")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  Version version;
  if (!parse_version(version_text, version)) {
    std::cerr << "unknown version " << version_text << "\n";
    return 2;
  }
  auto agent = make_builtin_agent(name, seed);
  std::ios::sync_with_stdio(false);
  while (auto block = read_turn_block(std::cin)) {
    auto parsed = parse_turn_input(*block, version == Version::V10);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
      std::cerr << name << ": " << err->describe() << "\n";
      std::cout << "PASS" << std::endl;
      continue;
    }
    const AgentView& view = std::get<AgentView>(parsed);
    std::cout << render_actions(agent->act(view), view.version) << std::endl;
  }
  return 0;
}
