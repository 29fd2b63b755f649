#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pfar {

// Failure classes map one-to-one onto CLI exit codes.
enum class ErrorKind { usage = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    // Stable machine-readable tag, e.g. "not-positive-definite".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

[[noreturn]] inline void fail_usage(std::string code, const std::string& msg) {
    throw Error(ErrorKind::usage, std::move(code), msg);
}
[[noreturn]] inline void fail_data(std::string code, const std::string& msg) {
    throw Error(ErrorKind::data, std::move(code), msg);
}
[[noreturn]] inline void fail_numerical(std::string code, const std::string& msg) {
    throw Error(ErrorKind::numerical, std::move(code), msg);
}

}  // namespace pfar
