#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"
#include "sevencubes/oracle.hpp"
#include "sevencubes/primes.hpp"
#include "sevencubes/ternary_form.hpp"

// Seven cubes for N = 0 (mod 4).
//
// With c = (4b, 4b, 6b), C = c1^3 + c2^3 + c3^3 = 344 b^3 and a prime
// p = 2 (mod 3), the identity
//
//   sum_i (c_i p + X_i)^3 + (c_i p - X_i)^3 = 2 C p^3 + 6 p sum_i c_i X_i^2
//
// turns N - x0^3 = 688 (b p)^3 + 12 b p Q1 into six cubes as soon as
// Q1 = 2 X1^2 + 2 X2^2 + 3 X3^2. Choosing b in {1, 5} and p modulo 8 and 9
// keeps Q1 out of the two residue families that form misses. Positivity of
// all seven cubes follows from 904 b^3 p^3 < N < 1072 b^3 p^3.

namespace sevencubes {

// free_mod9: b alone keeps 3 from dividing Q1. pinned_mod9: p is fixed
// mod 9 so that Q1 = 3 (mod 9).
enum class Branch { free_mod9, pinned_mod9 };

inline constexpr std::array<unsigned, 4> kExceptionalMultiplesOfFour = {212, 364, 420, 428};

struct Parameters {
  Integer n;
  unsigned beta = 1;
  Branch branch = Branch::free_mod9;
  std::array<Integer, 3> c;  // (4b, 4b, 6b)
  Integer big_c;             // 344 b^3
  Integer lower_coeff;       // p > A N^(1/3)  <=>  lower_coeff * p^3 > N, lower_coeff = 1072 b^3
  Integer upper_coeff;       // p < B N^(1/3)  <=>  upper_coeff * p^3 < N, upper_coeff = 904 b^3
};

// b in {1, 5}. N = 4, 5 (mod 9) forces pinned_mod9; elsewhere b = 1
// unless N + 4 lands in {0, +-1} mod 9.
inline std::pair<unsigned, Branch> select_beta(const Integer& n) {
  ensure(mod_small(n, 4) == 0, "select_beta: N must be a multiple of 4");
  const unsigned long r = mod_small(n, 9);
  if (r == 4) return {5u, Branch::pinned_mod9};
  if (r == 5) return {1u, Branch::pinned_mod9};
  auto passes = [r](unsigned beta) {
    // 4 b^3 = 4 (mod 9) for b = 1 and -4 for b = 5
    unsigned long t = (r + (beta == 1 ? 4 : 5)) % 9;
    return t != 0 && t != 1 && t != 8;
  };
  if (passes(1)) return {1u, Branch::free_mod9};
  ensure(passes(5), "select_beta: neither beta passes the mod-9 test");
  return {5u, Branch::free_mod9};
}

inline Parameters make_parameters(const Integer& n) {
  if (sgn(n) <= 0 || mod_small(n, 4) != 0) throw NotMultipleOfFour("N must be a positive multiple of 4");
  Parameters params;
  params.n = n;
  std::tie(params.beta, params.branch) = select_beta(n);
  const Integer b = params.beta;
  params.c = {4 * b, 4 * b, 6 * b};
  params.big_c = cube(params.c[0]) + cube(params.c[1]) + cube(params.c[2]);
  ensure(params.big_c == 344 * cube(b), "C != 344 b^3");
  params.lower_coeff = 1072 * cube(b);  // 2C + 6 c1^3
  params.upper_coeff = 904 * cube(b);   // 2C + 216 b^3
  return params;
}

struct ResidueCondition {
  unsigned modulus = 1;
  unsigned residue = 0;
  friend bool operator==(const ResidueCondition&, const ResidueCondition&) = default;
};

// Conditions on the auxiliary prime p; `combined` is their CRT merge with
// redundant moduli (3 under 9, 2 under 8) dropped first.
struct ResidueConstraint {
  std::vector<ResidueCondition> pairs;
  ResidueCondition combined;

  bool admits(const Integer& p) const {
    for (const auto& c : pairs) {
      if (mod_small(p, c.modulus) != c.residue) return false;
    }
    return true;
  }
};

inline unsigned inverse_mod(unsigned a, unsigned m) {
  for (unsigned x = 1; x < m; ++x) {
    if ((a * x) % m == 1) return x;
  }
  throw InvariantViolation("inverse_mod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
}

inline ResidueConstraint prime_constraints(const Integer& n, unsigned beta, Branch branch) {
  ensure(mod_small(n, 4) == 0, "prime_constraints: N must be a multiple of 4");
  ensure(beta == 1 || beta == 5, "prime_constraints: beta must be 1 or 5");
  ResidueConstraint out;
  out.pairs.push_back({3, 2});

  if (mod_small(n, 8) == 0) {
    // Q1 is then even, so never 1 mod 8.
    out.pairs.push_back({2, 1});
  } else {
    // 3 b p = N/4 (mod 8)
    const unsigned quarter = static_cast<unsigned>(mod_small(n, 32) / 4);
    out.pairs.push_back({8, inverse_mod((3 * beta) % 8, 8) * quarter % 8});
  }

  if (branch == Branch::pinned_mod9) {
    // b p = 3b + (N -+ 13)/3 +- 1 (mod 9): 9 | N -+ 13, and the +-1 is -b mod 3.
    const unsigned long r27 = mod_small(n, 27);
    unsigned long shifted;  // (N -+ 13) mod 27
    if ((r27 + 27 - 13) % 9 == 0) {
      shifted = (r27 + 27 - 13) % 27;
    } else {
      ensure((r27 + 13) % 9 == 0, "prime_constraints: neither N - 13 nor N + 13 is divisible by 9");
      shifted = (r27 + 13) % 27;
    }
    const int unit = beta == 5 ? 1 : -1;
    const int bp = static_cast<int>((3 * beta + shifted / 3 + 9 + unit) % 9);
    const unsigned residue = inverse_mod(beta, 9) * static_cast<unsigned>(bp) % 9;
    ensure(residue % 3 == 2, "prime_constraints: mod-9 class disagrees with p = 2 (mod 3)");
    out.pairs.push_back({9, residue});
  }

  std::vector<Congruence> reduced;
  const bool has9 = branch == Branch::pinned_mod9;
  const bool has8 = mod_small(n, 8) != 0;
  for (const auto& c : out.pairs) {
    if ((c.modulus == 3 && has9) || (c.modulus == 2 && has8)) continue;
    reduced.push_back({Integer(c.residue), Integer(c.modulus)});
  }
  const Congruence merged = crt(reduced);
  out.combined = {static_cast<unsigned>(merged.modulus.get_ui()), static_cast<unsigned>(merged.residue.get_ui())};
  ensure(std::gcd(out.combined.residue, out.combined.modulus) == 1, "prime_constraints: combined class not coprime");
  for (const auto& c : out.pairs) {
    ensure(out.combined.residue % c.modulus == c.residue, "prime_constraints: CRT merge lost a condition");
  }
  return out;
}

// Integer endpoints of the open interval (A N^(1/3), B N^(1/3)).
struct PrimeInterval {
  Integer lo;  // least p with lower_coeff * p^3 > N
  Integer hi;  // greatest p with upper_coeff * p^3 < N

  Integer width() const { return hi - lo; }
};

inline PrimeInterval prime_interval(const Parameters& params) {
  PrimeInterval out;
  out.lo = icbrt(params.n / params.lower_coeff);
  while (params.lower_coeff * cube(out.lo) <= params.n) ++out.lo;
  out.hi = icbrt(params.n / params.upper_coeff);
  while (sgn(out.hi) > 0 && params.upper_coeff * cube(out.hi) >= params.n) --out.hi;
  while (params.upper_coeff * cube(out.hi + 1) < params.n) ++out.hi;
  return out;
}

inline bool in_prime_interval(const Parameters& params, const Integer& p) {
  const Integer p3 = cube(p);
  return params.upper_coeff * p3 < params.n && params.n < params.lower_coeff * p3;
}

// Least admissible prime in the interval. Stepping through the merged
// class visits every admissible class mod 72 in ascending order.
inline Integer find_prime(const Parameters& params, const ResidueConstraint& constraint) {
  const PrimeInterval interval = prime_interval(params);
  const Integer modulus = constraint.combined.modulus;
  Integer p = interval.lo + floor_mod(Integer(constraint.combined.residue) - interval.lo, modulus);
  const unsigned long forbidden = 6ul * params.beta;
  for (; p <= interval.hi; p += modulus) {
    if (forbidden % 5 == 0 && p == 5) continue;  // p must not divide 6b
    if (is_prime(p)) {
      ensure(in_prime_interval(params, p) && constraint.admits(p), "find_prime: candidate escaped the constraints");
      return p;
    }
  }
  throw NoPrimeInInterval("no admissible prime in [" + interval.lo.get_str() + ", " + interval.hi.get_str() +
                          "] for N = " + params.n.get_str());
}

// Least x0 in [1, 6bp] with x0^3 = t (mod 6bp). Cubing is a bijection mod
// 2, 3, 5 and mod p = 2 (mod 3); the inverse maps are x, x, x^3 and
// x^((2p-1)/3).
inline Integer cube_root_mod(const Integer& t, unsigned beta, const Integer& p) {
  ensure(beta == 1 || beta == 5, "cube_root_mod: beta must be 1 or 5");
  ensure(mod_small(p, 3) == 2, "cube_root_mod: p must be 2 mod 3");
  ensure(gcd(p, Integer(6 * beta)) == 1, "cube_root_mod: p must not divide 6b");
  std::vector<Congruence> parts;
  parts.push_back({floor_mod(t, 2), Integer(2)});
  parts.push_back({floor_mod(t, 3), Integer(3)});
  if (beta == 5) parts.push_back({mod_pow(t, 3, 5), Integer(5)});
  parts.push_back({mod_pow(t, (2 * p - 1) / 3, p), p});
  Integer x0 = crt(parts).residue;
  const Integer modulus = 6 * beta * p;
  if (sgn(x0) == 0) x0 = modulus;
  return x0;
}

// Q1 = (N - x0^3 - 688 (b p)^3) / (12 b p), with the congruence
// postconditions the prime constraints are meant to guarantee.
inline Integer compute_q1(const Parameters& params, const Integer& x0, const Integer& p) {
  const Integer bp = params.beta * p;
  const Integer numerator = params.n - cube(x0) - 688 * cube(bp);
  const Integer denominator = 12 * bp;
  ensure(numerator % denominator == 0, "compute_q1: 12bp does not divide N - x0^3 - 688(bp)^3");
  const Integer q1 = numerator / denominator;
  ensure(sgn(q1) > 0, "compute_q1: Q1 is not positive");
  ensure(mod_small(q1, 8) != 1, "compute_q1: Q1 = 1 (mod 8)");
  ensure(is_representable(q1), "compute_q1: Q1 has the form 9^t(9m+6)");
  if (params.branch == Branch::pinned_mod9) ensure(mod_small(q1, 9) == 3, "compute_q1: Q1 != 3 (mod 9)");
  return q1;
}

enum class Path { constructive, fallback };

using oracle::FallbackMode;

struct Witness {
  unsigned beta = 1;
  Integer p, x0, q1;
  std::array<Integer, 3> x;
};

// Seven cube bases summing (as cubes) to n. Constructive certificates also
// carry the witness that produced them; cubes are then
// (x0, c1 p + X1, c1 p - X1, c2 p + X2, c2 p - X2, c3 p + X3, c3 p - X3).
struct Certificate {
  Integer n;
  std::optional<Witness> witness;
  FallbackMode mode = FallbackMode::seven_positive;
  std::array<Integer, 7> cubes;

  Path path() const { return witness ? Path::constructive : Path::fallback; }
};

inline std::array<Integer, 7> cube_layout(unsigned beta, const Integer& p, const Integer& x0,
                                          const std::array<Integer, 3>& x) {
  const Integer b = beta;
  const std::array<Integer, 3> c = {4 * b, 4 * b, 6 * b};
  std::array<Integer, 7> out;
  out[0] = x0;
  for (std::size_t i = 0; i < 3; ++i) {
    out[1 + 2 * i] = c[i] * p + x[i];
    out[2 + 2 * i] = c[i] * p - x[i];
  }
  return out;
}

inline Certificate assemble(const Parameters& params, const Integer& p, const Integer& x0, const TernaryRep& rep) {
  const Integer q1 = rep.value();
  ensure(sgn(q1) > 0, "assemble: Q1 must be positive");
  const std::array<Integer, 3> x = {rep.x1, rep.x2, rep.x3};
  for (std::size_t i = 0; i < 3; ++i) {
    ensure(abs(x[i]) < params.c[i] * p, "assemble: |X" + std::to_string(i + 1) + "| >= c p");
  }
  Certificate cert;
  cert.n = params.n;
  cert.witness = Witness{params.beta, p, x0, q1, x};
  cert.mode = FallbackMode::seven_positive;
  cert.cubes = cube_layout(params.beta, p, x0, x);
  Integer sum = 0;
  for (const auto& c : cert.cubes) {
    ensure(sgn(c) > 0, "assemble: nonpositive cube base");
    sum += cube(c);
  }
  ensure(sum == params.n, "assemble: cubes do not sum to N");
  return cert;
}

struct DecomposeOptions {
  bool force_fallback = false;
  std::uint64_t seed = RepresentOptions{}.seed;
  oracle::FallbackOptions fallback;
};

inline bool is_exceptional_multiple_of_four(const Integer& n) {
  for (unsigned e : kExceptionalMultiplesOfFour) {
    if (n == e) return true;
  }
  return false;
}

// Worth trying the constructive path only when every class mod 72 has a
// candidate in the interval.
inline bool constructive_interval_wide_enough(const Parameters& params) {
  return prime_interval(params).width() >= 72;
}

inline Certificate decompose_constructive(const Parameters& params, const DecomposeOptions& options = {}) {
  const ResidueConstraint constraint = prime_constraints(params.n, params.beta, params.branch);
  const Integer p = find_prime(params, constraint);
  const Integer bp = params.beta * p;
  const Integer x0 = cube_root_mod(params.n - 688 * cube(bp), params.beta, p);
  ensure(x0 <= 6 * bp, "x0 exceeds 6bp");
  const Integer q1 = compute_q1(params, x0, p);
  RepresentOptions represent_options;
  represent_options.seed = options.seed;
  return assemble(params, p, x0, must_represent(q1, represent_options));
}

inline Certificate decompose(const Integer& n, const DecomposeOptions& options = {}) {
  if (sgn(n) <= 0 || mod_small(n, 4) != 0) throw NotMultipleOfFour(n.get_str() + " is not a positive multiple of 4");
  if (is_exceptional_multiple_of_four(n)) {
    throw ExceptionalInput(n.get_str() + " is not a sum of seven nonnegative cubes");
  }
  const Parameters params = make_parameters(n);
  if (!options.force_fallback && constructive_interval_wide_enough(params)) {
    try {
      return decompose_constructive(params, options);
    } catch (const NoPrimeInInterval&) {
      // fall through to the enumerative search
    }
  }
  auto found = oracle::fallback_decompose(n, options.fallback);
  Certificate cert;
  cert.n = n;
  cert.mode = found.mode;
  cert.cubes = found.cubes;
  return cert;
}

// First violated certificate invariant, recomputed from the stored fields
// alone; nullopt when the certificate is valid.
inline std::optional<std::string> find_violation(const Certificate& cert) {
  if (sgn(cert.n) <= 0) return "n_positive";
  Integer sum = 0;
  for (const auto& c : cert.cubes) {
    if (sgn(c) < 0) return "cubes_nonnegative";
    if (cert.mode == FallbackMode::seven_positive && sgn(c) == 0) return "cubes_positive";
    sum += c * c * c;
  }
  if (sum != cert.n) return "cube_sum";
  if (!cert.witness) return std::nullopt;

  const Witness& w = *cert.witness;
  if (cert.mode != FallbackMode::seven_positive) return "mode";
  if (mod_small(cert.n, 4) != 0) return "n_multiple_of_4";
  if (w.beta != 1 && w.beta != 5) return "beta";
  if (!is_prime(w.p)) return "p_prime";
  if (mod_small(w.p, 3) != 2) return "p_mod_3";
  if (gcd(w.p, Integer(6 * w.beta)) != 1) return "p_coprime_6beta";
  const Integer b3 = Integer(w.beta) * w.beta * w.beta;
  const Integer p3 = w.p * w.p * w.p;
  if (!(904 * b3 * p3 < cert.n && cert.n < 1072 * b3 * p3)) return "prime_interval";
  const Integer bp = w.beta * w.p;
  if (w.x0 < 1 || w.x0 > 6 * bp) return "x0_range";
  if (12 * bp * w.q1 + w.x0 * w.x0 * w.x0 + 688 * bp * bp * bp != cert.n) return "q1_identity";
  if (sgn(w.q1) <= 0) return "q1_positive";
  if (2 * w.x[0] * w.x[0] + 2 * w.x[1] * w.x[1] + 3 * w.x[2] * w.x[2] != w.q1) return "form_value";
  const std::array<unsigned, 3> c = {4 * w.beta, 4 * w.beta, 6 * w.beta};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(abs(w.x[i]) < c[i] * w.p)) return "x_bound";
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (cert.cubes[1 + 2 * i] != c[i] * w.p + w.x[i] || cert.cubes[2 + 2 * i] != c[i] * w.p - w.x[i]) {
      return "cube_layout";
    }
  }
  if (cert.cubes[0] != w.x0) return "cube_layout";
  return std::nullopt;
}

inline bool verify(const Certificate& cert) { return !find_violation(cert).has_value(); }

}  // namespace sevencubes
