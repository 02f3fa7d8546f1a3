// Error hierarchy shared across the toolkit.
//
// UsageError  -> bad invocation (CLI maps it to exit code 1)
// DataError   -> malformed or inconsistent input data (CLI maps it to exit 2)

#ifndef PARSEMBLE_ERRORS_HPP
#define PARSEMBLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parsemble {

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by tree readers; carries the 1-based line number of the offence.
class TreeParseError : public DataError {
public:
    TreeParseError(int line, const std::string& msg)
        : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace parsemble

#endif  // PARSEMBLE_ERRORS_HPP
