#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"

namespace sevencubes {

// Primality
// ---------
// n < 2^64: Miller-Rabin with the first twelve prime bases, which is
//   deterministic up to 3.18e23.
// n < 3317044064679887385961981 (~3.3e24): Miller-Rabin with the first
//   thirteen prime bases, deterministic over this whole range.
// Above that: Baillie-PSW (strong base-2 test plus strong Lucas test with
//   Selfridge parameters). No BPSW pseudoprime is known; none exists
//   below 2^64.

inline constexpr std::array<unsigned, 13> kMillerRabinBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

inline const Integer& deterministic_mr_limit() {
  static const Integer limit("3317044064679887385961981", 10);
  return limit;
}

// Primes below 10^6.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t limit = 1'000'000;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

namespace detail {

inline bool strong_probable_prime(std::uint64_t n, std::uint64_t base) {
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = pow_mod(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool strong_probable_prime(const Integer& n, const Integer& base) {
  Integer d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Integer x = mod_pow(base, d, n);
  const Integer n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

// (x / 2) mod n for odd n and 0 <= x < n.
inline Integer half_mod(Integer x, const Integer& n) {
  if (mpz_odd_p(x.get_mpz_t())) x += n;
  mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
  return x;
}

// Strong Lucas probable-prime test, Selfridge method A (P = 1).
inline bool strong_lucas_probable_prime(const Integer& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  long d_value = 5;
  for (;;) {
    Integer d_int(d_value);
    int j = mpz_jacobi(d_int.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0) {
      Integer abs_d = d_value < 0 ? Integer(-d_value) : d_int;
      if (abs_d != n) return false;
    }
    d_value = d_value > 0 ? -(d_value + 2) : -d_value + 2;
  }
  const Integer d_mod = floor_mod(Integer(d_value), n);
  const Integer q = floor_mod(Integer((1 - d_value) / 4), n);

  // n + 1 = d * 2^s
  Integer d = n + 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  Integer u = 1, v = 1, qk = q;  // index 1, P = 1
  for (long bit = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
    u = u * v % n;
    v = floor_mod(v * v - 2 * qk, n);
    qk = qk * qk % n;
    if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
      Integer u_next = half_mod(floor_mod(u + v, n), n);
      Integer v_next = half_mod(floor_mod(d_mod * u + v, n), n);
      u = u_next;
      v = v_next;
      qk = qk * q % n;
    }
  }
  if (u == 0 || v == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    v = floor_mod(v * v - 2 * qk, n);
    qk = qk * qk % n;
    if (v == 0) return true;
  }
  return false;
}

inline bool has_small_factor(std::uint64_t n, bool& decided) {
  decided = true;
  for (unsigned p : kMillerRabinBases) {
    if (n == p) return false;
    if (n % p == 0) return true;
  }
  decided = n < 43 * 43;
  return false;
}

}  // namespace detail

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  bool decided = false;
  if (detail::has_small_factor(n, decided)) return false;
  if (decided) return true;
  for (std::size_t i = 0; i < 12; ++i) {
    if (!detail::strong_probable_prime(n, kMillerRabinBases[i])) return false;
  }
  return true;
}

inline bool is_prime(const Integer& n) {
  if (sgn(n) <= 0) return false;
  if (fits_u64(n)) return is_prime(to_u64(n));
  for (unsigned p : kMillerRabinBases) {
    if (mod_small(n, p) == 0) return false;
  }
  if (n < deterministic_mr_limit()) {
    for (unsigned b : kMillerRabinBases) {
      if (!detail::strong_probable_prime(n, Integer(b))) return false;
    }
    return true;
  }
  return detail::strong_probable_prime(n, Integer(2)) && detail::strong_lucas_probable_prime(n);
}

enum class Direction { up, down };

// Nearest prime p = residue (mod modulus) strictly above (up) or below
// (down) start.
inline std::uint64_t next_prime_in_class(std::uint64_t start, std::uint64_t residue, std::uint64_t modulus,
                                         Direction direction) {
  if (modulus == 0) throw std::invalid_argument("next_prime_in_class: modulus must be >= 1");
  residue %= modulus;
  if (std::gcd(residue, modulus) != 1) {
    throw std::invalid_argument("next_prime_in_class: residue is not coprime to the modulus");
  }
  if (direction == Direction::up) {
    std::uint64_t candidate = start + 1;
    candidate += (residue + modulus - candidate % modulus) % modulus;
    for (;; candidate += modulus) {
      if (candidate < start) throw std::overflow_error("next_prime_in_class: 64-bit overflow");
      if (is_prime(candidate)) return candidate;
    }
  }
  if (start <= 2) throw NotFound("no prime below " + std::to_string(start));
  std::uint64_t candidate = start - 1;
  candidate -= (candidate % modulus + modulus - residue) % modulus;
  for (;;) {
    if (candidate > start || candidate < 2) break;  // wrapped below zero or too small
    if (is_prime(candidate)) return candidate;
    if (candidate < modulus) break;
    candidate -= modulus;
  }
  throw NotFound("no prime congruent to " + std::to_string(residue) + " mod " + std::to_string(modulus) +
                 " below " + std::to_string(start));
}

inline Integer next_prime_in_class(const Integer& start, const Integer& residue, const Integer& modulus,
                                   Direction direction) {
  if (sgn(modulus) <= 0) throw std::invalid_argument("next_prime_in_class: modulus must be >= 1");
  if (gcd(residue, modulus) != 1) {
    throw std::invalid_argument("next_prime_in_class: residue is not coprime to the modulus");
  }
  const Integer step_back = modulus;
  const Integer r = floor_mod(residue, modulus);
  if (direction == Direction::up) {
    Integer first = start + 1;
    if (sgn(first) < 0) first = 0;
    first += floor_mod(r - first, modulus);
    if (sgn(first) > 0 && fits_u64(first + modulus * 1000) && fits_u64(modulus)) {
      return from_u64(next_prime_in_class(to_u64(first) - 1, to_u64(r), to_u64(modulus), Direction::up));
    }
    for (Integer c = first;; c += modulus) {
      if (is_prime(c)) return c;
    }
  }
  if (start <= 2) throw NotFound("no prime below " + start.get_str());
  if (fits_u64(start) && fits_u64(modulus)) {
    return from_u64(next_prime_in_class(to_u64(start), to_u64(r), to_u64(modulus), Direction::down));
  }
  Integer c = start - 1;
  c -= floor_mod(c - r, modulus);
  for (; c >= 2; c -= step_back) {
    if (is_prime(c)) return c;
  }
  throw NotFound("no prime congruent to " + r.get_str() + " mod " + modulus.get_str() + " below " + start.get_str());
}

}  // namespace sevencubes
