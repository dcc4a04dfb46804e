#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stylecast {

// Exit codes used by the CLI; library errors map onto them.
enum class ExitCode : int {
    ok = 0,
    usage = 1,
    stage = 2,
    provider = 3,
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
  public:
    using Error::Error;
};

// Failure of an external model/service call. `retryable` marks transient
// conditions (timeouts, 5xx, malformed output) worth another attempt.
class ProviderError : public Error {
  public:
    explicit ProviderError(const std::string& what, bool retryable = false)
        : Error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

  private:
    bool retryable_;
};

// Pipeline stage failure carrying the stage tag, e.g. "classify: empty index".
class StageError : public Error {
  public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

}  // namespace stylecast
