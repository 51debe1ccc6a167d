#pragma once

#include <stdexcept>
#include <string>

namespace ordpat {

// Error taxonomy mirrored by the CLI exit codes: usage=1, data=3, numerical=4.
enum class ErrorCategory { usage, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void throw_data_error(const std::string& msg) {
  throw Error(ErrorCategory::data, msg);
}

[[noreturn]] inline void throw_numerical_error(const std::string& msg) {
  throw Error(ErrorCategory::numerical, msg);
}

[[noreturn]] inline void throw_usage_error(const std::string& msg) {
  throw Error(ErrorCategory::usage, msg);
}

}  // namespace ordpat
