#ifndef COUNTQA_ERRORS_H_
#define COUNTQA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace countqa {

// Raised when a caller violates an operation's precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (datasets, prediction files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model-backed provider could not produce an output. Never used to signal
// "no answer": providers return an empty optional for that.
class ProviderError : public std::runtime_error {
 public:
  enum class Reason { kTransport, kTimeout, kBadResponse, kReplayMiss, kUnbound };

  ProviderError(Reason reason, const std::string &what)
      : std::runtime_error(what), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

}  // namespace countqa

#endif  // COUNTQA_ERRORS_H_
