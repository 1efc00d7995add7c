#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sevencubes/chains.hpp"
#include "sevencubes/cubes.hpp"
#include "sevencubes/integer.hpp"
#include "sevencubes/oracle.hpp"

namespace sevencubes {

// Reference values the fast checks compare against. Tests perturb these to
// make sure the checks can fail.
struct ReferenceValues {
  std::vector<std::uint64_t> exceptional_set = {15,  22,  23,  50,  114, 167, 175, 186, 212,
                                                231, 238, 239, 303, 364, 420, 428, 454};
  std::vector<std::uint64_t> exceptional_multiples_of_four = {212, 364, 420, 428};
  std::vector<std::vector<std::uint64_t>> catalogue_2408 = {
      {1, 4, 7, 10, 10}, {2, 2, 3, 5, 8, 12}, {2, 5, 6, 6, 8, 11}, {4, 4, 4, 6, 10, 10}};
  Rational ratio_bound = make_rational(10584, 10000);
  Rational epsilon = make_rational(13, 1000);
  Rational epsilon_ratio_bound = make_rational(1027, 1000);
  std::uint64_t seed_bound = 19541;
  unsigned beta_max = 5;
  Integer n0 = pow_int(Integer(10), 18);
  std::uint64_t pair_low = 16493;
  std::uint64_t pair_high = 17573;
  Rational pair_bound = make_rational(10655, 10000);
  std::uint64_t max_ratio_num = 21101;
  std::uint64_t max_ratio_den = 19949;
  unsigned max_ratio_class = 5;
  std::size_t max_ratio_step = 2;  // class 5 chain starts 19373, 19661, 19949, 21101
  std::size_t chain_steps_bound = 1250;
};

// Log-uniform N in [10^lo_exp, 10^hi_exp], rounded down to a multiple of 4.
inline Integer log_uniform_multiple_of_four(std::mt19937_64& rng, unsigned lo_exp, unsigned hi_exp) {
  if (lo_exp < 15 || hi_exp < lo_exp) throw std::invalid_argument("log_uniform_multiple_of_four: bad exponent range");
  std::uniform_real_distribution<double> exponent(lo_exp, hi_exp);
  const double e = exponent(rng);
  const auto whole = static_cast<unsigned long>(std::floor(e));
  const auto leading = static_cast<unsigned long>(std::pow(10.0, e - static_cast<double>(whole)) * 1e14);
  const Integer scale = pow_int(Integer(10), whole - 14);
  gmp_randclass low_digits(gmp_randinit_mt);
  low_digits.seed(static_cast<unsigned long>(rng()));
  Integer n = Integer(leading) * scale + low_digits.get_z_range(scale);
  n -= floor_mod(n, 4);
  const Integer lo = pow_int(Integer(10), lo_exp), hi = pow_int(Integer(10), hi_exp);
  if (n < lo) n = lo;
  if (n > hi) n = hi;
  return n;
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline CheckResult run_check(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    return {name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace detail

// The fast slice of the acceptance checks; needs no files or environment.
inline std::vector<CheckResult> run_selftest(const ReferenceValues& ref = {}, std::vector<std::uint64_t> seeds = {1, 2, 3}) {
  std::vector<CheckResult> out;

  out.push_back(detail::run_check("exceptional set up to 500", [&]() -> std::string {
    if (oracle::scan_exceptional(500) != ref.exceptional_set) return "scan(500) differs from the reference set";
    std::vector<std::uint64_t> fours;
    std::copy_if(ref.exceptional_set.begin(), ref.exceptional_set.end(), std::back_inserter(fours),
                 [](std::uint64_t n) { return n % 4 == 0; });
    if (oracle::scan_exceptional(500, 4) != ref.exceptional_multiples_of_four || fours != ref.exceptional_multiples_of_four) {
      return "multiples of 4 differ";
    }
    return "";
  }));

  out.push_back(detail::run_check("2408 catalogue", [&]() -> std::string {
    auto found = oracle::enumerate_up_to(2408, 7, oracle::CubeMode::positive);
    std::vector<std::vector<std::uint64_t>> parts;
    for (auto& m : found) parts.push_back(m.parts);
    auto expected = ref.catalogue_2408;
    std::sort(parts.begin(), parts.end());
    std::sort(expected.begin(), expected.end());
    return parts == expected ? "" : "found " + std::to_string(parts.size()) + " multisets";
  }));

  out.push_back(detail::run_check("consecutive primes 5 mod 72", [&]() -> std::string {
    auto r = chains::check_consecutive_pair(ref.pair_low, ref.pair_high, 5, ref.pair_bound);
    if (!r.consecutive) return "not consecutive primes in the class";
    if (!r.below_bound) return "gap ratio not below the bound";
    return "";
  }));

  out.push_back(detail::run_check("constant audit", [&]() -> std::string {
    if (!chains::below_interval_ratio(ref.ratio_bound)) return "ratio bound^3 >= 134/113";
    const Rational rr = chains::eps_ratio(ref.epsilon);
    if (!(rr < ref.epsilon_ratio_bound)) return "(1+eps)/(1-eps) >= reference bound";
    if (!(ref.epsilon_ratio_bound < ref.ratio_bound)) return "eps ratio bound >= chain ratio bound";
    if (!(chains::derive_n0(ref.seed_bound, ref.beta_max) < ref.n0)) return "1072 (b seed)^3 >= N0";
    return "";
  }));

  out.push_back(detail::run_check("class 5 chain", [&]() -> std::string {
    auto chain = chains::build_chain(5, chains::default_delta(), chains::kDefaultUpper, ref.seed_bound);
    auto report = chains::verify_chain(chain, ref.ratio_bound);
    if (!report.ok) return "verify_chain: " + report.failure;
    if (chain.steps() >= ref.chain_steps_bound) return "chain too long";
    if (ref.max_ratio_class == 5) {
      const Rational expected = make_rational(from_u64(ref.max_ratio_num), from_u64(ref.max_ratio_den));
      if (report.max_ratio != expected || report.max_index != ref.max_ratio_step) {
        return "max ratio " + report.max_ratio.get_str() + " at " + std::to_string(report.max_index);
      }
    }
    return "";
  }));

  out.push_back(detail::run_check("cube roots mod 6bp", []() -> std::string {
    for (unsigned p = 5; p < 60; ++p) {
      if (p % 3 != 2 || !is_prime(std::uint64_t{p})) continue;
      for (unsigned beta : {1u, 5u}) {
        if (beta == 5 && p == 5) continue;
        const unsigned m = 6 * beta * p;
        for (unsigned t = 0; t < m; ++t) {
          const Integer x0 = cube_root_mod(Integer(t), beta, Integer(p));
          if (x0 < 1 || x0 > m || floor_mod(cube(x0), m) != t) {
            return "p=" + std::to_string(p) + " beta=" + std::to_string(beta) + " t=" + std::to_string(t);
          }
        }
      }
    }
    return "";
  }));

  for (std::uint64_t seed : seeds) {
    out.push_back(detail::run_check("constructive decomposition, seed " + std::to_string(seed), [seed]() -> std::string {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < 5; ++i) {
        const Integer n = log_uniform_multiple_of_four(rng, 18, 24);
        const Certificate cert = decompose(n);
        if (cert.path() != Path::constructive) return "fallback taken for " + n.get_str();
        if (auto v = find_violation(cert)) return *v + " for " + n.get_str();
      }
      return "";
    }));
  }

  out.push_back(detail::run_check("small N fallback", []() -> std::string {
    for (unsigned n : {4u, 8u, 2408u, 454u * 4u, 9996u}) {
      const Certificate cert = decompose(Integer(n));
      if (auto v = find_violation(cert)) return *v + " for " + std::to_string(n);
    }
    return "";
  }));

  return out;
}

}  // namespace sevencubes
