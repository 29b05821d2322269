#include <gtest/gtest.h>

#include <dirent.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "locm/match.hpp"
#include "locm/runtime.hpp"
#include "support/builders.hpp"

using namespace locm;
using namespace locm::test;
namespace fs = std::filesystem;

namespace {

const std::string kFixture = LOCM_FIXTURE_AGENT;

std::string fixture(const std::string& args) { return kFixture + " " + args; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("locm_rt_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string battle_input() {
  GameState s = battle(Version::V12, 10);
  begin_turn(s);
  return render_turn_input(s, 0);
}

std::string draft_input() {
  GameState s;
  s.config = RulesetConfig::for_version(Version::V12);
  s.phase = Phase::Draft;
  s.offered = {creature(1, 1), creature(2, 2), creature(3, 3)};
  return render_turn_input(s, 0);
}

// Children of this process that still exist, zombies included.
int live_children() {
  int n = 0;
  DIR* proc = ::opendir("/proc");
  if (!proc) return -1;
  const std::string me = std::to_string(::getpid());
  while (dirent* e = ::readdir(proc)) {
    if (e->d_name[0] < '0' || e->d_name[0] > '9') continue;
    std::ifstream stat(std::string("/proc/") + e->d_name + "/stat");
    std::string text;
    std::getline(stat, text);
    const auto close = text.rfind(')');
    if (close == std::string::npos) continue;
    std::istringstream rest(text.substr(close + 2));
    std::string state, ppid;
    rest >> state >> ppid;
    if (ppid == me) ++n;
  }
  ::closedir(proc);
  return n;
}

Budget budget() {
  Budget b;
  return b;
}

}  // namespace

TEST(Budget, Validation) {
  EXPECT_TRUE(Budget{}.validate().empty());
  Budget b;
  b.first_turn_ms = 100;
  EXPECT_FALSE(b.validate().empty());
  b = Budget{};
  b.mem_soft_bytes = b.mem_hard_bytes;
  EXPECT_FALSE(b.validate().empty());
}

TEST(Spawn, RunningHandle) {
  auto h = AgentHandle::spawn(fixture("pass"), {}, budget());
  EXPECT_EQ(h.status(), AgentStatus::Running);
  EXPECT_GT(h.pid(), 0);
  const auto r = h.request_move(draft_input(), 2000);
  EXPECT_EQ(r.status, MoveStatus::Ok);
  EXPECT_EQ(r.line, "PICK 0");
  EXPECT_EQ(h.request_move(battle_input(), 2000).line, "PASS");
}

TEST(Spawn, MissingBinary) {
  EXPECT_THROW(AgentHandle::spawn("/nonexistent/agent", {}, budget()), SpawnError);
  EXPECT_THROW(AgentHandle::spawn("no-such-agent-on-path-xyz", {}, budget()), SpawnError);
  EXPECT_THROW(AgentHandle::spawn("", {}, budget()), SpawnError);
}

TEST(Spawn, StderrGoesToLog) {
  const fs::path dir = scratch("log");
  const fs::path log = dir / "m1" / "agent.stderr.txt";
  {
    auto h = AgentHandle::spawn(fixture("stderr"), log, budget());
    EXPECT_EQ(h.request_move(draft_input(), 2000).line, "PICK 0");
    EXPECT_EQ(h.request_move(battle_input(), 2000).line, "PASS");
  }
  std::ifstream in(log);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("fixture saw"), std::string::npos);
  fs::remove_all(dir);
}

TEST(RequestMove, LateBattleReplyTimesOut) {
  auto h = AgentHandle::spawn(fixture("sleep 1 350"), {}, budget());
  const auto r = h.request_move(battle_input(), 200);
  EXPECT_EQ(r.status, MoveStatus::Timeout);
  EXPECT_EQ(h.status(), AgentStatus::TimedOut);
  EXPECT_EQ(h.request_move(battle_input(), 200).status, MoveStatus::NotRunning);
}

TEST(RequestMove, SlowReplyWithinFirstTurnBudget) {
  auto h = AgentHandle::spawn(fixture("sleep 1 3200"), {}, budget());
  const auto r = h.request_move(battle_input(), 4000);
  EXPECT_EQ(r.status, MoveStatus::Ok);
  EXPECT_GE(r.elapsed_ms, 3100.0);
  EXPECT_LT(r.elapsed_ms, 4000.0);
}

TEST(RequestMove, ExitMidTurnIsCrash) {
  auto h = AgentHandle::spawn(fixture("crash 0"), {}, budget());
  EXPECT_EQ(h.request_move(draft_input(), 2000).status, MoveStatus::Crash);
  EXPECT_EQ(h.status(), AgentStatus::Crashed);
}

TEST(RequestMove, SilentAgentTimesOut) {
  auto h = AgentHandle::spawn(fixture("silent"), {}, budget());
  EXPECT_EQ(h.request_move(battle_input(), 100).status, MoveStatus::Timeout);
}

TEST(RequestMove, EagerWriterDoesNotDeadlock) {
  auto h = AgentHandle::spawn(fixture("eager 256"), {}, budget());
  std::string input;
  const std::string filler(1023, 'x');
  while (input.size() < (1u << 20)) input += filler + "\n";
  input += "end\n";
  const auto r = h.request_move(input, 3000);
  ASSERT_EQ(r.status, MoveStatus::Ok);
  EXPECT_EQ(r.line.substr(0, 4), "PASS");
  EXPECT_EQ(r.line.size(), 4u + 256u * 1024u);
  const auto second = h.request_move("", 3000);
  EXPECT_EQ(second.status, MoveStatus::Ok);
  EXPECT_EQ(second.line, "PASS");
}

TEST(Memory, SmallAgentIsOk) {
  auto h = AgentHandle::spawn(fixture("hog 100 0"), {}, budget());
  ASSERT_EQ(h.request_move(draft_input(), 5000).status, MoveStatus::Ok);
  EXPECT_EQ(h.check_memory(), MemoryCheck::Ok);
  EXPECT_GE(h.peak_rss_bytes(), 90 * kMiB);
}

TEST(Memory, SoftLimitWarns) {
  auto h = AgentHandle::spawn(fixture("hog 300 0"), {}, budget());
  ASSERT_EQ(h.request_move(draft_input(), 5000).status, MoveStatus::Ok);
  EXPECT_EQ(h.check_memory(), MemoryCheck::SoftExceeded);
  EXPECT_GE(h.soft_warnings(), 1);
  EXPECT_EQ(h.status(), AgentStatus::Running);
}

TEST(Memory, HardLimitDisqualifies) {
  auto h = AgentHandle::spawn(fixture("hog 1100 500"), {}, budget());
  const auto r = h.request_move(draft_input(), 10000);
  EXPECT_EQ(r.status, MoveStatus::Disqualified);
  EXPECT_EQ(h.status(), AgentStatus::Disqualified);
  EXPECT_EQ(h.check_memory(), MemoryCheck::Disqualified);
}

TEST(Lifecycle, NoOrphansAfterThousandCycles) {
  const int before = live_children();
  for (int i = 0; i < 1000; ++i) {
    auto h = AgentHandle::spawn(fixture(i % 3 == 0 ? "silent" : "pass"), {}, budget());
    if (i % 3 != 0) {
      ASSERT_EQ(h.request_move(draft_input(), 2000).status, MoveStatus::Ok);
    }
    if (i % 2) h.kill();
  }
  EXPECT_EQ(live_children(), before);
  errno = 0;
  EXPECT_EQ(::waitpid(-1, nullptr, WNOHANG), -1);
}

// ---- through play_game -----------------------------------------------------

namespace {

GameSetup v12_setup(std::uint64_t seed) {
  GameSetup s;
  s.config = RulesetConfig::for_version(Version::V12);
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Match, TimeoutOnThirdTurnForfeits) {
  const fs::path dir = scratch("timeout");
  Budget b;
  ProcessController slow(fixture("sleep 3 350"), dir / "slow.stderr.txt", b);
  InProcessController other(make_builtin_agent("baseline2"));
  const GameRecord r = play_game(v12_setup(4), {&slow, &other}, true);
  EXPECT_EQ(r.winner, Winner::Player1);
  EXPECT_EQ(r.reason, EndReason::Timeout);
  EXPECT_EQ(r.turns, 3);
  EXPECT_NE(r.transcript.find("!timeout"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Match, CrashForfeitsAndOpponentWins) {
  Budget b;
  InProcessController other(make_builtin_agent("baseline1"));
  ProcessController crashy(fixture("crash 2"), {}, b);
  const GameRecord r = play_game(v12_setup(5), {&other, &crashy}, false);
  EXPECT_EQ(r.winner, Winner::Player0);
  EXPECT_EQ(r.reason, EndReason::Crash);
  EXPECT_EQ(r.turns, 2);
}

TEST(Match, HogDisqualifiedDuringConstruction) {
  GameSetup setup;
  setup.config = RulesetConfig::for_version(Version::V15);
  setup.seed = 3;
  Budget b;
  ProcessController hog(fixture("hog 1100 1500"), {}, b);
  InProcessController other(make_builtin_agent("greedy"));
  const GameRecord r = play_game(setup, {&other, &hog}, false);
  EXPECT_EQ(r.winner, Winner::Player0);
  EXPECT_EQ(r.reason, EndReason::Disqualified);
  EXPECT_EQ(r.turns, 0);
}

TEST(Match, ExternalBuiltinPlaysCleanly) {
  Budget b;
  ProcessController ext(std::string(LOCM_AGENT_BIN) + " --agent greedy --version 1.5", {}, b);
  InProcessController other(make_builtin_agent("random2lanes", 9));
  GameSetup setup;
  setup.config = RulesetConfig::for_version(Version::V15);
  setup.seed = 21;
  const GameRecord r = play_game(setup, {&ext, &other}, true);
  EXPECT_EQ(r.reason, EndReason::HealthZero);
  EXPECT_EQ(r.parse_errors[0], 0);
  EXPECT_EQ(r.ignored_actions[0], 0);
  EXPECT_EQ(r.ignored_actions[1], 0);
  EXPECT_TRUE(replay_transcript(r.transcript).verified);
}

TEST(Match, ReplayVerifiesAndDetectsTampering) {
  InProcessController a(make_builtin_agent("baseline1"));
  InProcessController b(make_builtin_agent("random", 4));
  const GameRecord r = play_game(v12_setup(8), {&a, &b}, true);
  const auto ok = replay_transcript(r.transcript);
  EXPECT_TRUE(ok.verified);
  EXPECT_EQ(ok.line, 0u);
  EXPECT_EQ(ok.record.final_hash, r.final_hash);

  std::vector<std::string> lines;
  std::istringstream in(r.transcript);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::size_t target = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].rfind("= ", 0) == 0 && lines[i].find("health") != std::string::npos) {
      target = i;
      break;
    }
  }
  ASSERT_GT(target, 0u);
  lines[target] += "9";
  std::string tampered;
  for (const auto& l : lines) tampered += l + "\n";
  const auto bad = replay_transcript(tampered);
  EXPECT_FALSE(bad.verified);
  EXPECT_EQ(bad.line, target + 1);
}

TEST(Match, StrictModeRejectsIllegalAction) {
  GameSetup setup = v12_setup(2);
  setup.policy = Policy::Strict;
  Budget b;
  // Scripted replies: 60 draft picks, then an illegal attack from player 0.
  auto script = std::make_shared<ReplyScript>();
  for (int i = 0; i < 60; ++i) script->replies.push_back(TurnReply{MoveStatus::Ok, "PICK 0", std::nullopt, 0});
  script->replies.push_back(TurnReply{MoveStatus::Ok, "ATTACK 999 -1", std::nullopt, 0});
  ScriptedController s0(script);
  ScriptedController s1(script);
  const GameRecord r = play_game(setup, {&s0, &s1}, false);
  EXPECT_EQ(r.winner, Winner::Player1);
  EXPECT_EQ(r.reason, EndReason::InvalidStrict);
}
