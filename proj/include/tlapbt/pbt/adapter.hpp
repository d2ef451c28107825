#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/pbt/command.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

namespace tlapbt::pbt {

/// Black-box access to a system under test. One case at a time.
class SutAdapter {
public:
    virtual ~SutAdapter() = default;
    /// Returns the SUT to its initial state before a case.
    virtual void reset() = 0;
    /// Throws SutCrashed when the SUT stops answering and ProtocolError on a
    /// malformed reply.
    virtual Reply execute(const Command& c) = 0;
};

/// Drives an in-process handler through the same JSON messages a subprocess
/// would receive.
class InProcessAdapter : public SutAdapter {
public:
    using Handler = std::function<Json(const Json&)>;

    explicit InProcessAdapter(Handler handler) : handler_(std::move(handler)) {}

    void reset() override
    {
        Reply r = reply_from_json(handler_(Json{{"op", reset_op}}));
        if (!r.ok) {
            throw Error(ErrorCode::ProtocolError, "SUT refused reset: " + r.error);
        }
    }

    Reply execute(const Command& c) override { return reply_from_json(handler_(command_to_json(c))); }

private:
    Handler handler_;
};

/// Runs the SUT as a child process speaking line-delimited JSON on its
/// standard input and output.
class SubprocessAdapter : public SutAdapter {
public:
    struct Options {
        bool restart_per_case = false;
        std::chrono::milliseconds timeout{10'000};
    };

    explicit SubprocessAdapter(std::string command_line) : SubprocessAdapter(std::move(command_line), Options{}) {}

    SubprocessAdapter(std::string command_line, Options options)
        : command_line_(std::move(command_line)), options_(options)
    {
        std::signal(SIGPIPE, SIG_IGN);
        start();
    }

    SubprocessAdapter(const SubprocessAdapter&) = delete;
    SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

    ~SubprocessAdapter() override { stop(); }

    void reset() override
    {
        if (options_.restart_per_case || pid_ < 0) {
            stop();
            start();
            return;
        }
        Reply r = reply_from_json(exchange(Json{{"op", reset_op}}));
        if (!r.ok) {
            throw Error(ErrorCode::ProtocolError, "SUT refused reset: " + r.error);
        }
    }

    Reply execute(const Command& c) override { return reply_from_json(exchange(command_to_json(c))); }

    /// The last request and the raw reply line, for diagnostics.
    [[nodiscard]] const std::string& last_request() const { return last_request_; }
    [[nodiscard]] const std::string& last_reply() const { return last_reply_; }

private:
    void start()
    {
        wordexp_t words{};
        int rc = wordexp(command_line_.c_str(), &words, WRDE_NOCMD);
        if (rc != 0 || words.we_wordc == 0) {
            if (rc == 0) {
                wordfree(&words);
            }
            throw Error(ErrorCode::SpawnError, "cannot split SUT command line '" + command_line_ + "'");
        }
        std::vector<char*> argv(words.we_wordv, words.we_wordv + words.we_wordc);
        argv.push_back(nullptr);

        int to_child[2];
        int from_child[2];
        int exec_status[2];
        if (pipe2(to_child, O_CLOEXEC) != 0) {
            wordfree(&words);
            throw Error(ErrorCode::SpawnError, std::string("pipe: ") + std::strerror(errno));
        }
        if (pipe2(from_child, O_CLOEXEC) != 0) {
            close_pair(to_child);
            wordfree(&words);
            throw Error(ErrorCode::SpawnError, std::string("pipe: ") + std::strerror(errno));
        }
        if (pipe2(exec_status, O_CLOEXEC) != 0) {
            close_pair(to_child);
            close_pair(from_child);
            wordfree(&words);
            throw Error(ErrorCode::SpawnError, std::string("pipe: ") + std::strerror(errno));
        }
        pid_t pid = fork();
        if (pid < 0) {
            close_pair(to_child);
            close_pair(from_child);
            close_pair(exec_status);
            wordfree(&words);
            throw Error(ErrorCode::SpawnError, std::string("fork: ") + std::strerror(errno));
        }
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            execvp(argv[0], argv.data());
            int err = errno;
            [[maybe_unused]] auto n = write(exec_status[1], &err, sizeof err);
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        ::close(exec_status[1]);
        int err = 0;
        ssize_t n = 0;
        do {
            n = read(exec_status[0], &err, sizeof err);
        } while (n < 0 && errno == EINTR);
        ::close(exec_status[0]);
        std::string program = argv[0];
        wordfree(&words);
        if (n > 0) {
            ::close(to_child[1]);
            ::close(from_child[0]);
            waitpid(pid, nullptr, 0);
            throw Error(ErrorCode::SpawnError, "cannot execute '" + program + "': " + std::strerror(err));
        }
        pid_ = pid;
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
        buffer_.clear();
    }

    void stop()
    {
        if (write_fd_ >= 0) {
            ::close(write_fd_);
            write_fd_ = -1;
        }
        if (read_fd_ >= 0) {
            ::close(read_fd_);
            read_fd_ = -1;
        }
        if (pid_ > 0) {
            // Closing stdin asks the child to exit; give it a moment.
            for (int i = 0; i < 50; ++i) {
                if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
                    pid_ = -1;
                    return;
                }
                usleep(2000);
            }
            kill(pid_, SIGKILL);
            waitpid(pid_, nullptr, 0);
        }
        pid_ = -1;
    }

    [[noreturn]] void crashed(const std::string& why)
    {
        stop();
        throw Error(ErrorCode::SutCrashed, why + " (request: " + last_request_ + ")");
    }

    Json exchange(const Json& request)
    {
        if (pid_ < 0) {
            crashed("SUT is not running");
        }
        last_request_ = request.dump();
        last_reply_.clear();
        std::string line = last_request_ + "\n";
        std::size_t off = 0;
        while (off < line.size()) {
            ssize_t n = write(write_fd_, line.data() + off, line.size() - off);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                crashed(std::string("write to SUT failed: ") + std::strerror(errno));
            }
            off += static_cast<std::size_t>(n);
        }
        last_reply_ = read_line();
        try {
            return Json::parse(last_reply_);
        } catch (const Json::parse_error&) {
            throw Error(ErrorCode::ProtocolError, "SUT reply is not JSON: " + last_reply_);
        }
    }

    std::string read_line()
    {
        auto deadline = std::chrono::steady_clock::now() + options_.timeout;
        for (;;) {
            if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0) {
                crashed("SUT did not answer within " + std::to_string(options_.timeout.count()) + " ms");
            }
            pollfd p{read_fd_, POLLIN, 0};
            int rc = poll(&p, 1, static_cast<int>(left.count()));
            if (rc < 0 && errno == EINTR) {
                continue;
            }
            if (rc <= 0) {
                continue;
            }
            char chunk[4096];
            ssize_t n = read(read_fd_, chunk, sizeof chunk);
            if (n < 0 && errno == EINTR) {
                continue;
            }
            if (n <= 0) {
                crashed("SUT closed its output");
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    static void close_pair(int fds[2])
    {
        ::close(fds[0]);
        ::close(fds[1]);
    }

    std::string command_line_;
    Options options_;
    pid_t pid_ = -1;
    int write_fd_ = -1;
    int read_fd_ = -1;
    std::string buffer_;
    std::string last_request_;
    std::string last_reply_;
};

} // namespace tlapbt::pbt
