#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pns {

// Error kinds used across the library. The CLI maps Error subclasses to
// exit code 1 (execution error); verdict failures are exit code 2 and are
// not exceptions.
enum class ErrorKind {
    ShapeMismatch,
    GridMismatch,
    BadArgument,
    UnsupportedNorm,
    BlockOutOfRange,
    EmptyTrajectory,
    WindowExceeded,
    GridTooSmall,
    VacuumBreach,
    CflViolation,
    NonFinite,
    Uncertified,
    MissingProbe,
    ConfigInvalid,
    IoFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Config parsing reports every violation, not just the first.
class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(ErrorKind::ConfigInvalid, join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += "; ";
            out += v[i];
        }
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace pns
