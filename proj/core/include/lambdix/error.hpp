#ifndef LAMBDIX_ERROR_HPP
#define LAMBDIX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace lambdix {

enum class ErrorCategory {
  syntax,
  analysis,
  unbound,
  type,
  arity,
  arithmetic,
  cyclic,
  internal,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

enum class LimitKind { steps, depth };

// Raised when a step or recursion-depth budget runs out.  Deliberately not an
// Error: callers report it as its own outcome.
class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(LimitKind kind)
      : std::runtime_error(kind == LimitKind::steps ? "step limit exceeded" : "recursion depth limit exceeded"),
        kind_(kind) {}

  LimitKind kind() const { return kind_; }

 private:
  LimitKind kind_;
};

}  // namespace lambdix

#endif  // LAMBDIX_ERROR_HPP
