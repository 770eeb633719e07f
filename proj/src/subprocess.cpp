#include "negforge/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "negforge/error.hpp"

namespace negforge {

namespace {

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

int remaining_ms(Subprocess::Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Subprocess::Clock::now());
  return static_cast<int>(std::clamp<long long>(left.count(), 0, 60'000));
}

}  // namespace

Subprocess::Subprocess(const std::string& command) {
  // A child that exits early must surface as EPIPE, not kill the caller.
  ::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw Error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    // own process group, so terminate() also reaches whatever the shell spawned
    ::setpgid(0, 0);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid_, pid_);
  ::close(to_child[0]);
  ::close(from_child[1]);
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
  ::fcntl(in_fd_, F_SETFD, FD_CLOEXEC);
  ::fcntl(out_fd_, F_SETFD, FD_CLOEXEC);
  set_nonblocking(in_fd_);
  set_nonblocking(out_fd_);
}

Subprocess::~Subprocess() { terminate(); }

void Subprocess::write(std::string_view data) {
  if (in_fd_ < 0) return;
  pending_.append(data);
  pump(0);
}

void Subprocess::close_stdin() {
  close_requested_ = true;
  if (pending_.empty()) close_fd(in_fd_);
}

void Subprocess::pump(int timeout_ms) {
  pollfd fds[2];
  nfds_t n = 0;
  int in_slot = -1;
  int out_slot = -1;
  if (in_fd_ >= 0 && !pending_.empty()) {
    in_slot = static_cast<int>(n);
    fds[n++] = pollfd{in_fd_, POLLOUT, 0};
  }
  if (out_fd_ >= 0) {
    out_slot = static_cast<int>(n);
    fds[n++] = pollfd{out_fd_, POLLIN, 0};
  }
  if (n == 0) return;
  const int ready = ::poll(fds, n, timeout_ms);
  if (ready < 0) {
    if (errno == EINTR) return;
    throw Error(std::string("poll: ") + std::strerror(errno));
  }
  if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
    const ssize_t written = ::write(in_fd_, pending_.data(), pending_.size());
    if (written > 0) {
      pending_.erase(0, static_cast<std::size_t>(written));
    } else if (written < 0 && errno != EAGAIN && errno != EINTR) {
      pending_.clear();
      close_fd(in_fd_);
    }
    if (pending_.empty() && close_requested_) close_fd(in_fd_);
  }
  if (out_slot >= 0 && (fds[out_slot].revents & (POLLIN | POLLHUP | POLLERR)) != 0) {
    char buf[8192];
    const ssize_t got = ::read(out_fd_, buf, sizeof buf);
    if (got > 0) {
      received_.append(buf, static_cast<std::size_t>(got));
    } else if (got == 0 || (errno != EAGAIN && errno != EINTR)) {
      close_fd(out_fd_);
    }
  }
}

std::optional<std::string> Subprocess::read_line(Clock::time_point deadline) {
  while (true) {
    if (const auto nl = received_.find('\n'); nl != std::string::npos) {
      std::string line = received_.substr(0, nl);
      received_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (out_fd_ < 0) {
      if (received_.empty()) return std::nullopt;
      std::string line = std::move(received_);
      received_.clear();
      return line;
    }
    if (Clock::now() >= deadline) return std::nullopt;
    pump(remaining_ms(deadline));
  }
}

std::optional<std::string> Subprocess::drain(Clock::time_point deadline) {
  while (out_fd_ >= 0) {
    if (Clock::now() >= deadline) return std::nullopt;
    pump(remaining_ms(deadline));
  }
  std::string out = std::move(received_);
  received_.clear();
  return out;
}

int Subprocess::terminate() {
  close_fd(in_fd_);
  close_fd(out_fd_);
  if (status_) return *status_;
  if (pid_ <= 0) return 0;
  int status = 0;
  pid_t r = ::waitpid(pid_, &status, WNOHANG);
  if (r == 0) {
    // Give a well-behaved child a moment to exit after its input closes.
    for (int i = 0; i < 20 && r == 0; ++i) {
      ::usleep(5'000);
      r = ::waitpid(pid_, &status, WNOHANG);
    }
    if (r == 0) {
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }
  ::kill(-pid_, SIGKILL);  // stragglers left behind by the shell
  status_ = status;
  return status;
}

}  // namespace negforge
