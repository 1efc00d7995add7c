#pragma once

#include <stdexcept>
#include <string>

namespace sevencubes {

// A downward prime search ran below 2 without a hit.
struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CRT input with incompatible (or non-coprime) moduli.
struct Inconsistent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The auxiliary-prime interval holds no admissible prime. Only expected
// below 10^18; callers fall back to the enumerative search.
struct NoPrimeInInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// N is one of 212, 364, 420, 428.
struct ExceptionalInput : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotMultipleOfFour : std::domain_error {
  using std::domain_error::domain_error;
};

// The fallback search gave up. For 4 | N outside the exceptions this
// means the search budget was too small; every such N has a representation.
struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A chain build hit its sanity step cap.
struct StepCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant. Never caused by valid input.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

}  // namespace sevencubes
