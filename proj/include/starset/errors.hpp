#pragma once

#include <stdexcept>
#include <string>

namespace starset {

// Every failure mode the library reports deliberately.  Anything else
// escaping a starset call is a bug.
enum class errc {
  non_prime,
  size_cap_exceeded,
  zero_element,
  zero_scalar,
  not_a_divisor,
  zero_polynomial,
  constant_polynomial,
  not_coprime,
  not_a_unit,
  degenerate,
  hypothesis_violated,
  precondition_violated,
  empty_construction,
  no_valid_b0,
  config_invalid,
  assertion_failed,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_prime: return "non_prime";
    case errc::size_cap_exceeded: return "size_cap_exceeded";
    case errc::zero_element: return "zero_element";
    case errc::zero_scalar: return "zero_scalar";
    case errc::not_a_divisor: return "not_a_divisor";
    case errc::zero_polynomial: return "zero_polynomial";
    case errc::constant_polynomial: return "constant_polynomial";
    case errc::not_coprime: return "not_coprime";
    case errc::not_a_unit: return "not_a_unit";
    case errc::degenerate: return "degenerate";
    case errc::hypothesis_violated: return "hypothesis_violated";
    case errc::precondition_violated: return "precondition_violated";
    case errc::empty_construction: return "empty_construction";
    case errc::no_valid_b0: return "no_valid_b0";
    case errc::config_invalid: return "config_invalid";
    case errc::assertion_failed: return "assertion_failed";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

inline void require(bool cond, errc c, const std::string& msg) {
  if (!cond) fail(c, msg);
}

// Internal consistency checks (verified postconditions).  These throw
// errc::assertion_failed so a silent wrong answer is impossible.
inline void check(bool cond, const std::string& msg) {
  if (!cond) fail(errc::assertion_failed, msg);
}

}  // namespace starset
