#pragma once

#include <stdexcept>
#include <string>

namespace anisomhd {

/// Invalid or inconsistent configuration (bad grid, mismatched fields,
/// unsupported variant, malformed config file).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation's precondition (non-monotone time, bad support).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Non-finite coefficients or runaway H^4 size during time stepping.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double time, const std::string& what)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// File-system failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace anisomhd
