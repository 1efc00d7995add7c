#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"
#include "sevencubes/primes.hpp"

namespace sevencubes {

struct PrimePower {
  Integer prime;
  unsigned long exponent = 0;
};

// Primes strictly increasing, exponents positive.
struct Factorization {
  std::vector<PrimePower> factors;

  Integer value() const {
    Integer v = 1;
    for (const auto& f : factors) v *= pow_int(f.prime, f.exponent);
    return v;
  }
};

inline constexpr std::uint32_t kTrialDivisionLimit = 1'000'000;
inline constexpr std::uint64_t kDefaultRhoBudget = 50'000'000;

namespace detail {

// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
// composite n, or nullopt once `budget` iterations are spent.
inline std::optional<Integer> rho_split(const Integer& n, std::uint64_t& budget) {
  for (unsigned long c = 1; budget > 0; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 128;
    auto f = [&](const Integer& v) { return Integer((v * v + c) % n); };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        std::uint64_t steps = std::min(m, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += steps;
        budget = budget > steps ? budget - steps : 0;
      } while (k < r && g == 1 && budget > 0);
      r *= 2;
    } while (g == 1 && budget > 0);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return std::nullopt;
}

inline Factorization to_factorization(const std::map<Integer, unsigned long>& counts) {
  Factorization out;
  for (const auto& [p, e] : counts) out.factors.push_back({p, e});
  return out;
}

}  // namespace detail

// Trial division below 10^6, then Brent-rho on what remains. Gives up
// (nullopt) once rho has spent `rho_budget` iterations in total.
inline std::optional<Factorization> try_factorize(const Integer& n, std::uint64_t rho_budget = kDefaultRhoBudget) {
  if (sgn(n) <= 0) throw std::invalid_argument("factorize: n must be >= 1");
  std::map<Integer, unsigned long> counts;
  Integer rest = n;

  if (fits_u64(rest)) {
    std::uint64_t r = to_u64(rest);
    std::size_t checked = 0;
    for (std::uint32_t p : small_primes()) {
      if (std::uint64_t{p} * p > r) break;
      if (r % p == 0) {
        unsigned long e = 0;
        while (r % p == 0) {
          r /= p;
          ++e;
        }
        counts[Integer(p)] += e;
      }
      // Cheap early exit once the cofactor is prime.
      if (++checked % 512 == 0 && is_prime(r)) break;
    }
    rest = from_u64(r);
  } else {
    for (std::uint32_t p : small_primes()) {
      if (Integer(p) * p > rest) break;
      if (mod_small(rest, p) == 0) {
        unsigned long e = 0;
        while (mod_small(rest, p) == 0) {
          rest /= p;
          ++e;
        }
        counts[Integer(p)] += e;
      }
    }
  }

  std::vector<Integer> pending;
  if (rest > 1) pending.push_back(rest);
  while (!pending.empty()) {
    Integer m = pending.back();
    pending.pop_back();
    if (is_prime(m)) {
      counts[m] += 1;
      continue;
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      Integer s = isqrt(m);
      pending.push_back(s);
      pending.push_back(s);
      continue;
    }
    if (mpz_even_p(m.get_mpz_t())) {
      pending.push_back(2);
      pending.push_back(m / 2);
      continue;
    }
    auto d = detail::rho_split(m, rho_budget);
    if (!d) return std::nullopt;
    pending.push_back(*d);
    pending.push_back(m / *d);
  }
  return detail::to_factorization(counts);
}

inline Factorization factorize(const Integer& n) {
  auto f = try_factorize(n, UINT64_MAX);
  ensure(f.has_value(), "factorize: unbounded rho gave up");
  return *f;
}

using SquarePair = std::pair<Integer, Integer>;

// a^2 + b^2 = q for a prime q = 1 (mod 4), via a square root of -1 and
// the Euclidean descent (Hermite-Serret / Cornacchia).
inline SquarePair prime_two_squares(const Integer& q) {
  if (q == 2) return {Integer(1), Integer(1)};
  const Integer exponent = (q - 1) / 4;
  Integer root;
  for (unsigned long c = 2;; ++c) {
    root = mod_pow(Integer(c), exponent, q);
    if (root * root % q == q - 1) break;
    ensure(c < 100000, "prime_two_squares: no square root of -1 found; is q prime and 1 mod 4?");
  }
  Integer a = q, b = root;
  const Integer limit = isqrt(q);
  while (b > limit) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  Integer other_sq = q - b * b;
  Integer other = isqrt(other_sq);
  ensure(other * other == other_sq, "prime_two_squares: descent did not produce a square");
  return b <= other ? SquarePair{b, other} : SquarePair{other, b};
}

enum class TwoSquaresStatus { found, impossible, gave_up };

struct TwoSquaresResult {
  TwoSquaresStatus status = TwoSquaresStatus::impossible;
  SquarePair pair;
};

// Budgeted form used by the ternary solver.
inline TwoSquaresResult try_two_squares(const Integer& r, std::uint64_t rho_budget) {
  if (sgn(r) < 0) return {};
  if (sgn(r) == 0) return {TwoSquaresStatus::found, {Integer(0), Integer(0)}};
  Integer odd = r;
  unsigned long twos = mpz_scan1(odd.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), twos);
  if (mod_small(odd, 4) == 3) return {};

  auto factorization = try_factorize(odd, rho_budget);
  if (!factorization) return {TwoSquaresStatus::gave_up, {}};

  // Gaussian integer x + yi, multiplied up factor by factor.
  Integer x = 1, y = 0;
  auto multiply = [&](const Integer& a, const Integer& b) {
    Integer nx = x * a - y * b;
    Integer ny = x * b + y * a;
    x = nx;
    y = ny;
  };
  for (unsigned long i = 0; i < twos; ++i) multiply(1, 1);
  for (const auto& [q, e] : factorization->factors) {
    if (mod_small(q, 4) == 3) {
      if (e % 2 != 0) return {};
      Integer s = pow_int(q, e / 2);
      x *= s;
      y *= s;
      continue;
    }
    auto [a, b] = prime_two_squares(q);
    for (unsigned long i = 0; i < e; ++i) multiply(a, b);
  }
  x = abs(x);
  y = abs(y);
  if (x > y) std::swap(x, y);
  ensure(x * x + y * y == r, "two_squares: composed pair does not square-sum to r");
  return {TwoSquaresStatus::found, {x, y}};
}

// (a, b) with a^2 + b^2 = r and 0 <= a <= b, or nullopt when some prime
// 3 mod 4 divides r to an odd power.
inline std::optional<SquarePair> two_squares(const Integer& r) {
  auto result = try_two_squares(r, UINT64_MAX);
  ensure(result.status != TwoSquaresStatus::gave_up, "two_squares: unbounded factoring gave up");
  if (result.status == TwoSquaresStatus::impossible) return std::nullopt;
  return result.pair;
}

}  // namespace sevencubes
