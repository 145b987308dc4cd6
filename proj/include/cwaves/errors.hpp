#pragma once

#include <stdexcept>
#include <string>

namespace cwaves {

/// Raised when a run configuration fails to parse or validate.
class config_error : public std::runtime_error {
public:
    config_error(std::string msg, int line = -1, int col = -1)
        : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col) {
        if (line < 0) return msg;
        return "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg;
    }
    int line_;
    int col_;
};

/// Raised when a solver fails: non-convergence, blow-up guard, singular system.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cwaves
