#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sevencubes/errors.hpp"

namespace sevencubes {

using Integer = mpz_class;
using Rational = mpq_class;

static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long required for the u64 fast paths");

inline bool fits_u64(const Integer& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Integer& n) {
  if (!fits_u64(n)) throw std::out_of_range("integer does not fit in 64 bits: " + n.get_str());
  return mpz_get_ui(n.get_mpz_t());
}

inline Integer from_u64(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

inline Integer pow_int(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

inline Integer cube(const Integer& x) { return x * x * x; }

// Least nonnegative residue, for any sign of a.
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline unsigned long mod_small(const Integer& a, unsigned long m) {
  return mpz_fdiv_ui(a.get_mpz_t(), m);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Floor cube root; r^3 <= n < (r+1)^3.
inline Integer icbrt(const Integer& n) {
  if (sgn(n) < 0) throw std::invalid_argument("icbrt of a negative integer");
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
  return r;
}

inline Integer isqrt(const Integer& n) {
  if (sgn(n) < 0) throw std::invalid_argument("isqrt of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_cube(const Integer& n) {
  return sgn(n) >= 0 && cube(icbrt(n)) == n;
}

// base^exponent mod modulus, result in [0, modulus).
inline Integer mod_pow(const Integer& base, const Integer& exponent, const Integer& modulus) {
  if (sgn(modulus) <= 0) throw std::invalid_argument("mod_pow: modulus must be >= 1");
  if (sgn(exponent) < 0) throw std::invalid_argument("mod_pow: negative exponent");
  Integer r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exponent) {
    if (exponent & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

struct Congruence {
  Integer residue;
  Integer modulus;
};

// Chinese remaindering over pairwise coprime moduli. Non-coprime moduli
// are rejected even when their residues happen to agree; callers reduce
// such systems first.
inline Congruence crt(const std::vector<Congruence>& pairs) {
  Congruence acc{Integer(0), Integer(1)};
  for (const auto& [residue, modulus] : pairs) {
    if (sgn(modulus) <= 0) throw std::invalid_argument("crt: modulus must be >= 1");
    if (gcd(acc.modulus, modulus) != 1) {
      throw Inconsistent("crt: modulus " + modulus.get_str() + " is not coprime to " +
                         acc.modulus.get_str());
    }
    Integer inv;
    mpz_invert(inv.get_mpz_t(), acc.modulus.get_mpz_t(), modulus.get_mpz_t());
    if (modulus == 1) inv = 0;
    // acc.residue + acc.modulus * k == residue (mod modulus)
    Integer k = floor_mod((residue - acc.residue) * inv, modulus);
    acc.residue += acc.modulus * k;
    acc.modulus *= modulus;
    acc.residue = floor_mod(acc.residue, acc.modulus);
  }
  return acc;
}

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("not a nonnegative decimal integer: '" + s + "'");
  }
  return Integer(s, 10);
}

// Parses "123", "0.01", "1e10", "2.5e3" into an exact rational.
// num/den in lowest terms; gmp compares unreduced fractions incorrectly.
inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_decimal(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return ParseError("not a decimal number: '" + s + "'"); };
  if (s.empty()) throw bad();
  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string exp_text = s.substr(e + 1);
    if (exp_text.empty() || exp_text.find_first_not_of("+-0123456789") != std::string::npos) throw bad();
    try {
      exponent = std::stol(exp_text);
    } catch (const std::exception&) {
      throw bad();
    }
  }
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw bad();
  if (exponent > 1000 || exponent < -1000) throw bad();
  Rational value(Integer(digits, 10));
  Integer scale = pow_int(Integer(10), static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    value *= scale;
  } else {
    value /= scale;
  }
  value.canonicalize();
  return value;
}

}  // namespace sevencubes
