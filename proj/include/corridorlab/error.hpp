#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corridorlab {

/// Base of every domain error thrown by the library. `code()` is a stable
/// machine-readable identifier used by the command-line front end.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Malformed input: unknown letter, bad file, rank mismatch.
class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error("input", message) {}
};

/// A word grew past the configured length cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& message, std::size_t cap)
      : Error("capacity", message + " (cap " + std::to_string(cap) + ")"),
        cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// An operation that needs a conditioned automorphism was handed one that is not.
class NotConditionedError : public Error {
 public:
  explicit NotConditionedError(const std::string& message)
      : Error("not-conditioned", message) {}
};

/// Default word-length cap, overridable per call and via CORRIDORLAB_CAP_LEN.
inline constexpr std::size_t kDefaultLengthCap = 10'000'000;

}  // namespace corridorlab
