#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace c2hls {

// ---------------------------------------------------------------------------
// strings

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  if (from.empty()) return s;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

inline bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Quote a single argument for /bin/sh.
inline std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out += "'";
  return out;
}

// ---------------------------------------------------------------------------
// files

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spew(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// ---------------------------------------------------------------------------
// stable 64-bit FNV-1a digest, hex encoded; used as a deterministic join key

inline uint64_t fnv1a64(const std::string& data, uint64_t seed = 0xcbf29ce484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string digest_hex(const std::string& data) { return hex64(fnv1a64(data)); }

// ---------------------------------------------------------------------------
// subprocess with timeout; commands are shell strings so configured tools
// like "cc -E" keep their flags

struct CommandResult {
  int exit_code = -1;       // exit status, or 128+signal when killed
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;
  std::string err;

  bool ok() const { return !timed_out && !spawn_failed && exit_code == 0; }
};

// Runs `command arg0 arg1 ...` through /bin/sh -c with args quoted.
inline CommandResult run_command(const std::string& command,
                                 const std::vector<std::string>& args = {},
                                 std::optional<double> timeout_seconds = std::nullopt,
                                 const std::optional<std::filesystem::path>& cwd = std::nullopt) {
  std::string full = command;
  for (const auto& a : args) full += " " + shell_quote(a);

  CommandResult res;
  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    res.spawn_failed = true;
    return res;
  }

  pid_t pid = fork();
  if (pid < 0) {
    res.spawn_failed = true;
    return res;
  }
  if (pid == 0) {
    setpgid(0, 0);
    if (cwd) {
      if (chdir(cwd->c_str()) != 0) _exit(127);
    }
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    execl("/bin/sh", "sh", "-c", full.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::microseconds(static_cast<long long>(
                      timeout_seconds.value_or(3600.0) * 1e6));

  struct pollfd fds[2];
  fds[0] = {out_pipe[0], POLLIN, 0};
  fds[1] = {err_pipe[0], POLLIN, 0};
  bool open0 = true, open1 = true;
  char buf[4096];

  while (open0 || open1) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      res.timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
    wait_ms = std::max(1, std::min(wait_ms, 200));
    fds[0].fd = open0 ? out_pipe[0] : -1;
    fds[1].fd = open1 ? err_pipe[0] : -1;
    int rc = poll(fds, 2, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) continue;
    if (open0 && (fds[0].revents & (POLLIN | POLLHUP))) {
      ssize_t n = read(out_pipe[0], buf, sizeof(buf));
      if (n > 0)
        res.out.append(buf, static_cast<size_t>(n));
      else
        open0 = false;
    }
    if (open1 && (fds[1].revents & (POLLIN | POLLHUP))) {
      ssize_t n = read(err_pipe[0], buf, sizeof(buf));
      if (n > 0)
        res.err.append(buf, static_cast<size_t>(n));
      else
        open1 = false;
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  int status = 0;
  while (true) {
    pid_t r = waitpid(pid, &status, res.timed_out ? WNOHANG : 0);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    if (res.timed_out && r == 0) {
      kill(-pid, SIGKILL);
      usleep(20000);
    }
  }

  if (res.timed_out) {
    res.exit_code = 124;
  } else if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    res.exit_code = 128 + WTERMSIG(status);
  }
  if (!res.timed_out && res.exit_code == 127 && res.out.empty()) {
    // sh reports 127 for command-not-found; callers treat this as spawn failure
    res.spawn_failed = true;
  }
  return res;
}

}  // namespace c2hls
