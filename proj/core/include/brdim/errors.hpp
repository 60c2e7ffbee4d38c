#pragma once

#include <stdexcept>
#include <string>

namespace brdim {

// Malformed text input (CSV rows, config values). line() is 1-based and 0
// when the location is unknown.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, long line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

// Bad model name or parameter set.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure: eigensolver breakdown, degenerate panel, diverging run.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The Euler state became non-finite; names the offending step.
class DivergenceError : public NumericError {
public:
    DivergenceError(long step, double time)
        : NumericError("non-finite state at step " + std::to_string(step) +
                       " (t = " + std::to_string(time) + ")"),
          step_(step),
          time_(time) {}

    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

}  // namespace brdim
