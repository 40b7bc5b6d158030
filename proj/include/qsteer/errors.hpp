#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsteer {

// Bad user-supplied value: wrong dimensions, broken invariants, out-of-range
// parameters. The CLI maps this to exit code 2.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction that only exists for certain dimensions (e.g. prime d).
class unsupported_dimension_error : public invalid_input_error {
 public:
  using invalid_input_error::invalid_input_error;
};

// A computation that would exceed a configured enumeration/resource cap.
// The CLI maps this to exit code 3.
class capacity_error : public std::runtime_error {
 public:
  capacity_error(const std::string& msg, std::uint64_t required, std::uint64_t limit)
      : std::runtime_error(msg), required_(required), limit_(limit) {}

  // Size the rejected computation would have needed (saturated at UINT64_MAX).
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t required_;
  std::uint64_t limit_;
};

}  // namespace qsteer
