#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "sevencubes/errors.hpp"
#include "sevencubes/factor.hpp"
#include "sevencubes/integer.hpp"

namespace sevencubes {

// q = 2*x1^2 + 2*x2^2 + 3*x3^2 with 0 <= x1 <= x2, x3 >= 0.
struct TernaryRep {
  Integer x1, x2, x3;

  Integer value() const { return 2 * x1 * x1 + 2 * x2 * x2 + 3 * x3 * x3; }
};

// 2x^2 + 2y^2 + 3z^2 is alone in its genus, so it represents exactly the
// q >= 0 that survive the local conditions: q != 1 (mod 8), and q is not
// 9^t (9m + 6).
inline bool is_representable(const Integer& q) {
  if (sgn(q) < 0) return false;
  if (mod_small(q, 8) == 1) return false;
  if (sgn(q) == 0) return true;
  Integer rest = q;
  while (mod_small(rest, 9) == 0) rest /= 9;
  return mod_small(rest, 9) != 6;
}

struct RepresentOptions {
  std::uint64_t deterministic_attempts = 10'000;
  std::uint64_t random_attempts = 100'000;
  std::uint64_t seed = 0x5eed'c0be;
  // Rho iterations allowed per two-squares attempt before that x3 is skipped.
  std::uint64_t factoring_budget = 200'000;
};

namespace detail {

inline std::optional<TernaryRep> try_x3(const Integer& q, const Integer& x3, std::uint64_t budget) {
  Integer rest = q - 3 * x3 * x3;
  if (sgn(rest) < 0 || mpz_odd_p(rest.get_mpz_t())) return std::nullopt;
  rest /= 2;
  auto result = try_two_squares(rest, budget);
  if (result.status != TwoSquaresStatus::found) return std::nullopt;
  return TernaryRep{result.pair.first, result.pair.second, x3};
}

}  // namespace detail

// Searches x3 upward from the parity-forced minimum, then samples x3 at
// random, asking two_squares for the rest. Does not consult
// is_representable, so it doubles as a check on that criterion.
inline std::optional<TernaryRep> represent(const Integer& q, const RepresentOptions& options = {}) {
  if (sgn(q) < 0) return std::nullopt;
  const Integer x3_max = isqrt(q / 3);
  const unsigned long parity = mod_small(q, 2);

  Integer x3 = parity;
  for (std::uint64_t attempt = 0; attempt < options.deterministic_attempts && x3 <= x3_max; ++attempt, x3 += 2) {
    if (auto rep = detail::try_x3(q, x3, options.factoring_budget)) return rep;
  }
  if (x3 > x3_max) return std::nullopt;  // every x3 was tried

  std::mt19937_64 rng(options.seed);
  gmp_randclass gmp_rng(gmp_randinit_mt);
  gmp_rng.seed(static_cast<unsigned long>(rng()));
  const Integer span = x3_max / 2 + 1;
  for (std::uint64_t attempt = 0; attempt < options.random_attempts; ++attempt) {
    Integer candidate = 2 * gmp_rng.get_z_range(span) + parity;
    if (candidate > x3_max) continue;
    if (auto rep = detail::try_x3(q, candidate, options.factoring_budget)) return rep;
  }
  return std::nullopt;
}

// For q known to be representable; failure is an internal error.
inline TernaryRep must_represent(const Integer& q, const RepresentOptions& options = {}) {
  ensure(is_representable(q), "must_represent: " + q.get_str() + " is excluded by the local conditions");
  auto rep = represent(q, options);
  ensure(rep.has_value(), "must_represent: search failed for representable " + q.get_str());
  return *rep;
}

}  // namespace sevencubes
