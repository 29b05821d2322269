#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace locm {

inline constexpr std::size_t kMiB = 1024 * 1024;

struct Budget {
  int per_turn_ms = 200;
  int first_turn_ms = 4000;
  std::size_t mem_soft_bytes = 256 * kMiB;
  std::size_t mem_hard_bytes = 1024 * kMiB;
  // Extra time granted to the first battle turn, for interpreter warm-up.
  int warmup_grace_ms = 0;
  // When set, RLIMIT_AS is applied to the child as well as RSS sampling.
  bool os_hard_limit = false;
  int sample_period_ms = 50;

  // Empty when valid: first_turn_ms >= per_turn_ms > 0, hard > soft.
  std::string validate() const;
};

enum class AgentStatus { Running, Crashed, TimedOut, Disqualified, Exited };
enum class MemoryCheck { Ok, SoftExceeded, Disqualified };

std::string_view to_string(AgentStatus s);
std::string_view to_string(MemoryCheck m);

class SpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MoveStatus { Ok, Timeout, Crash, Disqualified, NotRunning };
std::string_view to_string(MoveStatus s);

struct MoveResult {
  MoveStatus status = MoveStatus::Ok;
  std::string line;
  // From the last input byte flushed to the reply line completing.
  double elapsed_ms = 0.0;
};

// Root of per-match agent logs: $LOCM_LOG_DIR, else "logs".
std::filesystem::path log_root();

// A child process speaking the protocol over its standard streams. Owns the
// process group; destruction kills and reaps it. Once the status leaves
// Running no further moves are accepted.
class AgentHandle {
 public:
  // Splits `command` shell-style (no substitution), resolves the executable on
  // PATH and starts it in its own process group. Standard error goes to
  // `stderr_log` (parents created) or /dev/null when empty. Throws SpawnError.
  static AgentHandle spawn(const std::string& command, const std::filesystem::path& stderr_log, const Budget& budget);

  AgentHandle(AgentHandle&& other) noexcept;
  AgentHandle& operator=(AgentHandle&& other) noexcept;
  AgentHandle(const AgentHandle&) = delete;
  AgentHandle& operator=(const AgentHandle&) = delete;
  ~AgentHandle();

  // Writes `input` and waits up to `budget_ms` for one complete output line.
  // Input writing and output reading proceed together, so an agent that
  // replies before consuming its input cannot deadlock the exchange.
  MoveResult request_move(std::string_view input, int budget_ms);

  // Samples resident set size against the budget's limits. Disqualified is
  // terminal and kills the process.
  MemoryCheck check_memory();

  // Kills the process group and reaps the child. Idempotent.
  void kill();

  AgentStatus status() const { return status_; }
  pid_t pid() const { return pid_; }
  const std::string& command() const { return command_; }
  int soft_warnings() const { return soft_warnings_; }
  std::size_t peak_rss_bytes() const { return peak_rss_; }
  std::optional<std::size_t> rss_bytes() const;

 private:
  AgentHandle() = default;
  void close_fds();
  void terminate(AgentStatus status);

  std::string command_;
  Budget budget_;
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string read_buffer_;
  AgentStatus status_ = AgentStatus::Exited;
  int soft_warnings_ = 0;
  std::size_t peak_rss_ = 0;
};

// Resident set size of a process in bytes, from /proc.
std::optional<std::size_t> resident_bytes(pid_t pid);

}  // namespace locm
