#pragma once

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace negforge {

// A child process run through /bin/sh -c with its standard input and output
// connected to pipes. Standard error is inherited. I/O is non-blocking and
// driven by read_line()/drain(), so a chatty child can never deadlock us while
// we are still writing.
class Subprocess {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Subprocess(const std::string& command);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // Queues bytes for the child's standard input.
  void write(std::string_view data);
  // Closes standard input once everything queued has been written.
  void close_stdin();

  // Next complete line (without the newline), or nullopt on deadline / EOF.
  std::optional<std::string> read_line(Clock::time_point deadline);
  // Everything the child writes until it closes its output, or nullopt when
  // the deadline passes first.
  std::optional<std::string> drain(Clock::time_point deadline);

  [[nodiscard]] bool output_closed() const noexcept { return out_fd_ < 0; }
  [[nodiscard]] pid_t pid() const noexcept { return pid_; }

  // Terminates the child if still running and returns its wait status.
  int terminate();

 private:
  void pump(int timeout_ms);

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string pending_;
  std::string received_;
  bool close_requested_ = false;
  std::optional<int> status_;
};

}  // namespace negforge
