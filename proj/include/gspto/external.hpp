/********************************************************************************
* Copyright 2026 The gspto Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#pragma once

// Black-box objectives served by a child process over a line protocol on its
// standard streams:
//
//   request   EVAL <d> <x1> ... <xd>\n
//   response  OK <v>\n                    scalar fitness
//             LOGITS <k> <l1> ... <lk>\n  classifier logits
//
// Anything else is an error. One request is in flight per handle, and a
// handle belongs to one trial at a time.

#include "gspto/core.hpp"
#include "gspto/objectives.hpp"

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace gspto {

/// Scalar fitness or a logits vector, exactly as the scorer reported it.
using ScorerResponse = std::variant<double, std::vector<double>>;

namespace detail {

inline std::string format_request(const Vector& x)
{
    std::string line = "EVAL " + std::to_string(x.size());
    char buf[32];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const int n = std::snprintf(buf, sizeof buf, " %.17g", x[i]);
        line.append(buf, static_cast<std::size_t>(n));
    }
    line.push_back('\n');
    return line;
}

inline bool parse_double(std::string_view token, double& out)
{
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

inline std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

} // namespace detail

/// Parses one response line (without the trailing newline).
inline ScorerResponse parse_scorer_response(const std::string& line)
{
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) {
        throw ExternalObjectiveError("empty response from external objective", line);
    }
    if (tokens[0] == "OK") {
        double v = 0.0;
        if (tokens.size() != 2 || !detail::parse_double(tokens[1], v)) {
            throw ExternalObjectiveError("malformed or non-finite OK response", line);
        }
        return v;
    }
    if (tokens[0] == "LOGITS") {
        std::size_t k = 0;
        if (tokens.size() < 2) {
            throw ExternalObjectiveError("LOGITS response without a count", line);
        }
        auto [ptr, ec] = std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), k);
        if (ec != std::errc() || ptr != tokens[1].data() + tokens[1].size() || k == 0 || tokens.size() != k + 2) {
            throw ExternalObjectiveError("LOGITS count does not match the values sent", line);
        }
        std::vector<double> logits(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!detail::parse_double(tokens[i + 2], logits[i])) {
                throw ExternalObjectiveError("malformed or non-finite logit", line);
            }
        }
        return logits;
    }
    throw ExternalObjectiveError("unrecognized response from external objective", line);
}

/**
 * Owns one scorer child process. Move-only; the destructor closes the
 * channel and reaps (or kills) the child.
 */
class ExternalScorer
{
public:
    ExternalScorer(std::vector<std::string> argv, std::chrono::milliseconds timeout = std::chrono::seconds(10))
        : argv_(std::move(argv))
        , timeout_(timeout)
    {
        if (argv_.empty()) {
            throw ConfigError("external objective needs a command");
        }
        int fds[2];
        if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
            throw ExternalObjectiveError(std::string("socketpair failed: ") + std::strerror(errno), "");
        }
        const pid_t pid = ::fork();
        if (pid < 0) {
            ::close(fds[0]);
            ::close(fds[1]);
            throw ExternalObjectiveError(std::string("fork failed: ") + std::strerror(errno), "");
        }
        if (pid == 0) {
            ::close(fds[0]);
            ::dup2(fds[1], STDIN_FILENO);
            ::dup2(fds[1], STDOUT_FILENO);
            if (fds[1] != STDIN_FILENO && fds[1] != STDOUT_FILENO) {
                ::close(fds[1]);
            }
            std::vector<char*> args;
            for (auto& a : argv_) {
                args.push_back(a.data());
            }
            args.push_back(nullptr);
            ::execvp(args[0], args.data());
            std::_Exit(127);
        }
        ::close(fds[1]);
        fd_ = fds[0];
        pid_ = pid;
    }

    ExternalScorer(const ExternalScorer&) = delete;
    ExternalScorer& operator=(const ExternalScorer&) = delete;

    ExternalScorer(ExternalScorer&& other) noexcept { *this = std::move(other); }

    ExternalScorer& operator=(ExternalScorer&& other) noexcept
    {
        if (this != &other) {
            shutdown();
            argv_ = std::move(other.argv_);
            timeout_ = other.timeout_;
            fd_ = std::exchange(other.fd_, -1);
            pid_ = std::exchange(other.pid_, -1);
            buffer_ = std::move(other.buffer_);
        }
        return *this;
    }

    ~ExternalScorer() { shutdown(); }

    const std::vector<std::string>& command() const noexcept { return argv_; }

    /// Sends one EVAL request and returns the parsed response.
    ScorerResponse evaluate(const Vector& x)
    {
        if (!all_finite(x)) {
            throw InvalidInput("external objective: non-finite input");
        }
        send_all(detail::format_request(x));
        return parse_scorer_response(read_line());
    }

private:
    void send_all(const std::string& data)
    {
        if (fd_ < 0) {
            throw ExternalObjectiveError("external objective channel is closed", "");
        }
        std::size_t sent = 0;
        while (sent < data.size()) {
            const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ExternalObjectiveError(std::string("write to external objective failed: ") + std::strerror(errno),
                                             "");
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    std::string read_line()
    {
        const auto deadline = std::chrono::steady_clock::now() + timeout_;
        while (true) {
            const auto newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                std::string line = buffer_.substr(0, newline);
                buffer_.erase(0, newline + 1);
                return line;
            }
            const auto remaining =
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            if (remaining.count() <= 0) {
                throw ExternalObjectiveError("external objective timed out", buffer_);
            }
            pollfd pfd{fd_, POLLIN, 0};
            const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
            if (ready < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ExternalObjectiveError(std::string("poll failed: ") + std::strerror(errno), buffer_);
            }
            if (ready == 0) {
                continue;
            }
            char chunk[4096];
            const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw ExternalObjectiveError(std::string("read from external objective failed: ") + std::strerror(errno),
                                             buffer_);
            }
            if (n == 0) {
                throw ExternalObjectiveError("external objective closed its output", buffer_);
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    void shutdown() noexcept
    {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
        if (pid_ > 0) {
            // Give a well-behaved scorer a moment to exit on EOF.
            for (int i = 0; i < 50; ++i) {
                int status = 0;
                const pid_t r = ::waitpid(pid_, &status, WNOHANG);
                if (r == pid_ || r < 0) {
                    pid_ = -1;
                    return;
                }
                ::usleep(2000);
            }
            ::kill(pid_, SIGKILL);
            int status = 0;
            ::waitpid(pid_, &status, 0);
            pid_ = -1;
        }
    }

    std::vector<std::string> argv_;
    std::chrono::milliseconds timeout_{10000};
    int fd_ = -1;
    pid_t pid_ = -1;
    std::string buffer_;
};

inline ScorerResponse eval_external(const Vector& x, ExternalScorer& handle) { return handle.evaluate(x); }

/// Scalar objective backed by a scorer that answers OK <v>.
inline Objective external_objective(std::shared_ptr<ExternalScorer> scorer, std::size_t dimension,
                                    double box_half_width = std::numeric_limits<double>::infinity())
{
    return Objective(
        "external", dimension,
        [scorer = std::move(scorer)](const Vector& x) {
            const ScorerResponse r = scorer->evaluate(x);
            if (const double* v = std::get_if<double>(&r)) {
                return *v;
            }
            throw ExternalObjectiveError("expected a scalar OK response, got LOGITS", "");
        },
        box_half_width);
}

/// Classifier backed by a scorer that answers LOGITS.
inline Classifier external_classifier(std::shared_ptr<ExternalScorer> scorer)
{
    return [scorer = std::move(scorer)](const Vector& input) {
        ScorerResponse r = scorer->evaluate(input);
        if (auto* logits = std::get_if<std::vector<double>>(&r)) {
            return std::move(*logits);
        }
        throw ExternalObjectiveError("expected a LOGITS response, got a scalar", "");
    };
}

} // namespace gspto
