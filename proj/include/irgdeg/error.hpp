#pragma once

#include <stdexcept>
#include <string>

namespace irgdeg {

/// Input that violates a documented precondition (bad kernel, bad vertex, ...).
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// An oracle-backed check whose inequality or identity did not hold.
class VerificationError : public std::runtime_error {
public:
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

} // namespace irgdeg
