#pragma once

#include <stdexcept>
#include <string>

namespace adbdiff {

// Bad argument or precondition violation (out-of-range count, relative URL,
// empty dataset, ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input data. Carries an optional 1-based row/line number so CSV
// and ARFF errors can name the offending row.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_ = 0;
};

// A remote service answered with a non-success status code.
class RemoteStatusError : public std::runtime_error {
public:
    explicit RemoteStatusError(const std::string& code)
        : std::runtime_error("remote status: " + code), code_(code) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adbdiff
