#pragma once

#include <stdexcept>
#include <string>

namespace suprec {

/// Invalid parameters or malformed inputs. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation was refused because its estimated work or size exceeds the
/// configured cap. Carries the estimate so callers can report it. Maps to
/// CLI exit code 3.
class WorkCapError : public std::runtime_error {
public:
    WorkCapError(const std::string& what, double estimated, double cap)
        : std::runtime_error(what), estimated_(estimated), cap_(cap) {}

    double estimated() const { return estimated_; }
    double cap() const { return cap_; }

private:
    double estimated_;
    double cap_;
};

} // namespace suprec
