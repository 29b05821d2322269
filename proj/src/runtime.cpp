#include "locm/runtime.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

namespace locm {

std::string Budget::validate() const {
  if (per_turn_ms <= 0) return "per-turn budget must be positive";
  if (first_turn_ms < per_turn_ms) return "first-turn budget must be at least the per-turn budget";
  if (mem_hard_bytes <= mem_soft_bytes) return "hard memory limit must exceed the soft limit";
  if (sample_period_ms <= 0) return "sample period must be positive";
  return {};
}

std::string_view to_string(AgentStatus s) {
  switch (s) {
    case AgentStatus::Running: return "running";
    case AgentStatus::Crashed: return "crashed";
    case AgentStatus::TimedOut: return "timed-out";
    case AgentStatus::Disqualified: return "disqualified";
    case AgentStatus::Exited: return "exited";
  }
  return "?";
}

std::string_view to_string(MemoryCheck m) {
  switch (m) {
    case MemoryCheck::Ok: return "ok";
    case MemoryCheck::SoftExceeded: return "soft-exceeded";
    case MemoryCheck::Disqualified: return "disqualified";
  }
  return "?";
}

std::string_view to_string(MoveStatus s) {
  switch (s) {
    case MoveStatus::Ok: return "ok";
    case MoveStatus::Timeout: return "timeout";
    case MoveStatus::Crash: return "crash";
    case MoveStatus::Disqualified: return "disqualified";
    case MoveStatus::NotRunning: return "not-running";
  }
  return "?";
}

std::filesystem::path log_root() {
  if (const char* dir = std::getenv("LOCM_LOG_DIR"); dir && *dir) return dir;
  return "logs";
}

std::optional<std::size_t> resident_bytes(pid_t pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/status");
  if (!in) return std::nullopt;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmRSS:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      std::size_t kb = 0;
      if (fields >> kb) return kb * 1024;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::optional<std::string> resolve_executable(const std::string& name) {
  auto runnable = [](const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    if (runnable(name)) return name;
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    const std::string candidate = (dir.empty() ? std::string(".") : dir) + "/" + name;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> split_command(const std::string& command) {
  wordexp_t we{};
  const int rc = ::wordexp(command.c_str(), &we, WRDE_NOCMD | WRDE_UNDEF);
  if (rc != 0) {
    if (rc == WRDE_NOSPACE) ::wordfree(&we);
    throw SpawnError("cannot parse agent command: " + command);
  }
  std::vector<std::string> words(we.we_wordv, we.we_wordv + we.we_wordc);
  ::wordfree(&we);
  if (words.empty()) throw SpawnError("empty agent command");
  return words;
}

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

AgentHandle AgentHandle::spawn(const std::string& command, const std::filesystem::path& stderr_log,
                               const Budget& budget) {
  ignore_sigpipe();
  std::vector<std::string> words = split_command(command);
  const auto exe = resolve_executable(words[0]);
  if (!exe) throw SpawnError("agent executable not found: " + words[0]);

  int err_fd = -1;
  if (!stderr_log.empty()) {
    std::error_code ec;
    if (stderr_log.has_parent_path()) std::filesystem::create_directories(stderr_log.parent_path(), ec);
    err_fd = ::open(stderr_log.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  } else {
    err_fd = ::open("/dev/null", O_WRONLY | O_CLOEXEC);
  }
  if (err_fd < 0) throw SpawnError("cannot open agent log " + stderr_log.string() + ": " + std::strerror(errno));

  int to_child[2];
  int from_child[2];
  int exec_status[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    ::close(err_fd);
    throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(err_fd);
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(exec_status, O_CLOEXEC) != 0) {
    for (int fd : {err_fd, to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }

  std::vector<char*> argv;
  for (auto& w : words) argv.push_back(w.data());
  argv.push_back(nullptr);
  std::string exe_path = *exe;

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {err_fd, to_child[0], to_child[1], from_child[0], from_child[1], exec_status[0], exec_status[1]})
      ::close(fd);
    throw SpawnError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::signal(SIGPIPE, SIG_DFL);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::dup2(err_fd, STDERR_FILENO);
    if (budget.os_hard_limit) {
      struct rlimit lim {};
      lim.rlim_cur = lim.rlim_max = budget.mem_hard_bytes;
      ::setrlimit(RLIMIT_AS, &lim);
    }
    ::execv(exe_path.c_str(), argv.data());
    const int e = errno;
    [[maybe_unused]] auto n = ::write(exec_status[1], &e, sizeof e);
    ::_exit(127);
  }

  ::setpgid(pid, pid);
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(err_fd);
  ::close(exec_status[1]);
  int child_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_status[0], &child_errno, sizeof child_errno);
  } while (got < 0 && errno == EINTR);
  ::close(exec_status[0]);
  if (got > 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::waitpid(pid, nullptr, 0);
    throw SpawnError("cannot execute " + exe_path + ": " + std::strerror(child_errno));
  }

  AgentHandle h;
  h.command_ = command;
  h.budget_ = budget;
  h.pid_ = pid;
  h.in_fd_ = to_child[1];
  h.out_fd_ = from_child[0];
  h.status_ = AgentStatus::Running;
  set_nonblocking(h.in_fd_);
  set_nonblocking(h.out_fd_);
  return h;
}

AgentHandle::AgentHandle(AgentHandle&& o) noexcept { *this = std::move(o); }

AgentHandle& AgentHandle::operator=(AgentHandle&& o) noexcept {
  if (this != &o) {
    kill();
    command_ = std::move(o.command_);
    budget_ = o.budget_;
    pid_ = std::exchange(o.pid_, -1);
    in_fd_ = std::exchange(o.in_fd_, -1);
    out_fd_ = std::exchange(o.out_fd_, -1);
    read_buffer_ = std::move(o.read_buffer_);
    status_ = std::exchange(o.status_, AgentStatus::Exited);
    soft_warnings_ = o.soft_warnings_;
    peak_rss_ = o.peak_rss_;
  }
  return *this;
}

AgentHandle::~AgentHandle() { kill(); }

void AgentHandle::close_fds() {
  if (in_fd_ >= 0) ::close(in_fd_);
  if (out_fd_ >= 0) ::close(out_fd_);
  in_fd_ = out_fd_ = -1;
}

void AgentHandle::kill() {
  close_fds();
  if (pid_ > 0) {
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
    while (::waitpid(pid_, nullptr, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
  if (status_ == AgentStatus::Running) status_ = AgentStatus::Exited;
}

void AgentHandle::terminate(AgentStatus status) {
  status_ = status;
  kill();
}

std::optional<std::size_t> AgentHandle::rss_bytes() const {
  if (pid_ <= 0) return std::nullopt;
  return resident_bytes(pid_);
}

MemoryCheck AgentHandle::check_memory() {
  if (status_ != AgentStatus::Running) return status_ == AgentStatus::Disqualified ? MemoryCheck::Disqualified : MemoryCheck::Ok;
  const auto rss = rss_bytes();
  if (!rss) return MemoryCheck::Ok;
  peak_rss_ = std::max(peak_rss_, *rss);
  if (*rss >= budget_.mem_hard_bytes) {
    terminate(AgentStatus::Disqualified);
    return MemoryCheck::Disqualified;
  }
  if (*rss >= budget_.mem_soft_bytes) {
    ++soft_warnings_;
    return MemoryCheck::SoftExceeded;
  }
  return MemoryCheck::Ok;
}

MoveResult AgentHandle::request_move(std::string_view input, int budget_ms) {
  MoveResult result;
  if (status_ != AgentStatus::Running) {
    result.status = MoveStatus::NotRunning;
    return result;
  }
  std::string pending(input);
  if (pending.empty() || pending.back() != '\n') pending.push_back('\n');
  std::size_t written = 0;

  const auto started = Clock::now();
  // Input that is not fully consumed within this window counts as a timeout too.
  const double write_window_ms = budget_ms + 5000.0;
  std::optional<Clock::time_point> flushed;
  auto last_sample = Clock::now();

  auto take_line = [this]() -> std::optional<std::string> {
    const auto nl = read_buffer_.find('\n');
    if (nl == std::string::npos) return std::nullopt;
    std::string line = read_buffer_.substr(0, nl);
    read_buffer_.erase(0, nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  std::optional<std::string> line = take_line();
  char chunk[65536];
  while (true) {
    if (!flushed && written == pending.size()) flushed = Clock::now();
    if (flushed && line) break;

    double remaining;
    if (flushed) {
      remaining = budget_ms - ms_since(*flushed);
    } else {
      remaining = write_window_ms - ms_since(started);
    }
    if (remaining <= 0) {
      terminate(AgentStatus::TimedOut);
      result.status = MoveStatus::Timeout;
      result.elapsed_ms = flushed ? ms_since(*flushed) : 0.0;
      return result;
    }

    if (ms_since(last_sample) >= budget_.sample_period_ms) {
      last_sample = Clock::now();
      if (check_memory() == MemoryCheck::Disqualified) {
        result.status = MoveStatus::Disqualified;
        return result;
      }
    }

    pollfd fds[2];
    int n = 0;
    fds[n++] = pollfd{out_fd_, POLLIN, 0};
    const bool want_write = written < pending.size();
    if (want_write) fds[n++] = pollfd{in_fd_, POLLOUT, 0};
    const int wait_ms = static_cast<int>(std::min<double>({remaining, static_cast<double>(budget_.sample_period_ms)})) + 1;
    const int rc = ::poll(fds, n, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      terminate(AgentStatus::Crashed);
      result.status = MoveStatus::Crash;
      return result;
    }

    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t got = ::read(out_fd_, chunk, sizeof chunk);
      if (got > 0) {
        read_buffer_.append(chunk, static_cast<std::size_t>(got));
        if (!line) line = take_line();
      } else if (got == 0 || (errno != EAGAIN && errno != EINTR)) {
        terminate(AgentStatus::Crashed);
        result.status = MoveStatus::Crash;
        return result;
      }
    }
    if (want_write && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t put = ::write(in_fd_, pending.data() + written, pending.size() - written);
      if (put > 0) {
        written += static_cast<std::size_t>(put);
      } else if (put < 0 && errno != EAGAIN && errno != EINTR) {
        terminate(AgentStatus::Crashed);
        result.status = MoveStatus::Crash;
        return result;
      }
    }
  }

  result.elapsed_ms = ms_since(*flushed);
  if (check_memory() == MemoryCheck::Disqualified) {
    result.status = MoveStatus::Disqualified;
    return result;
  }
  result.line = std::move(*line);
  return result;
}

}  // namespace locm
