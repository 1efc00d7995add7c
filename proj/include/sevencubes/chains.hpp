#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"
#include "sevencubes/primes.hpp"

// Prime chains in the classes mod 72. A chain p0 < p1 < ... < pM in one
// class, starting below the seed bound and ending above `upper`, with every
// ratio p_{i+1}/p_i < 1.0584 shows that each interval (x, 1.0584 x) with
// seed_bound < x < upper contains a prime of that class.

namespace sevencubes::chains {

inline constexpr std::uint64_t kModulus = 72;
inline constexpr std::uint64_t kDefaultSeedBound = 19541;
inline constexpr std::uint64_t kDefaultUpper = 10'000'000'000ull;
inline constexpr std::uint64_t kDefaultStepCap = 100'000;

inline const Rational& default_delta() {
  static const Rational delta = make_rational(1, 100);
  return delta;
}

// B/A for the auxiliary-prime interval is (134/113)^(1/3) > 1.0584.
inline const Rational& default_ratio_bound() {
  static const Rational bound = make_rational(10584, 10000);
  return bound;
}

struct Chain {
  unsigned residue = 0;
  Rational delta;
  std::uint64_t seed_bound = kDefaultSeedBound;
  std::uint64_t upper = kDefaultUpper;
  std::vector<std::uint64_t> primes;

  // M_l: index of the last prime.
  std::size_t steps() const { return primes.empty() ? 0 : primes.size() - 1; }

  Rational ratio(std::size_t i) const {
    return make_rational(from_u64(primes.at(i + 1)), from_u64(primes.at(i)));
  }
};

// Index i maximizing p_{i+1}/p_i (first one on ties).
inline std::size_t max_ratio_index(const Chain& chain) {
  if (chain.primes.size() < 2) throw std::invalid_argument("max_ratio_index: chain has fewer than two primes");
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < chain.primes.size(); ++i) {
    // p[i+1]/p[i] > p[best+1]/p[best]
    const unsigned __int128 lhs = static_cast<unsigned __int128>(chain.primes[i + 1]) * chain.primes[best];
    const unsigned __int128 rhs = static_cast<unsigned __int128>(chain.primes[best + 1]) * chain.primes[i];
    if (lhs > rhs) best = i;
  }
  return best;
}

inline std::vector<unsigned> all_classes() {
  std::vector<unsigned> out;
  for (unsigned l = 1; l < kModulus; ++l) {
    if (std::gcd(l, 72u) == 1) out.push_back(l);
  }
  return out;
}

// Odd classes l = 2 (mod 3): the ones the auxiliary prime can occupy.
inline std::vector<unsigned> auxiliary_prime_classes() {
  std::vector<unsigned> out;
  for (unsigned l : all_classes()) {
    if (l % 3 == 2) out.push_back(l);
  }
  return out;
}

namespace detail {

// floor(p * (1 + delta)) for delta = num/den.
inline std::uint64_t stretched(std::uint64_t p, const Rational& delta) {
  const Integer num = delta.get_num();
  const Integer den = delta.get_den();
  return to_u64(Integer(from_u64(p) * (den + num) / den));
}

inline void check_arguments(unsigned residue, const Rational& delta, std::uint64_t upper) {
  if (std::gcd(residue, 72u) != 1 || residue >= kModulus) {
    throw std::invalid_argument("chain class " + std::to_string(residue) + " is not a unit mod 72");
  }
  if (sgn(delta) <= 0) throw std::invalid_argument("chain delta must be positive");
  if (upper > (std::uint64_t{1} << 56)) throw std::invalid_argument("chain upper bound must be below 2^56");
}

}  // namespace detail

// p0 = largest prime below seed_bound in the class; p_{i+1} = least prime
// in the class above (1 + delta) p_i; stop once p_i > upper.
inline Chain build_chain(unsigned residue, const Rational& delta = default_delta(), std::uint64_t upper = kDefaultUpper,
                         std::uint64_t seed_bound = kDefaultSeedBound, std::uint64_t step_cap = kDefaultStepCap) {
  detail::check_arguments(residue, delta, upper);
  Chain chain;
  chain.residue = residue;
  chain.delta = delta;
  chain.seed_bound = seed_bound;
  chain.upper = upper;
  chain.primes.push_back(next_prime_in_class(seed_bound, residue, kModulus, Direction::down));
  while (chain.primes.back() <= upper) {
    if (chain.primes.size() > step_cap) {
      throw StepCapExceeded("chain for class " + std::to_string(residue) + " exceeded " + std::to_string(step_cap) +
                            " steps");
    }
    const std::uint64_t floor_target = detail::stretched(chain.primes.back(), delta);
    chain.primes.push_back(next_prime_in_class(floor_target, residue, kModulus, Direction::up));
  }
  return chain;
}

struct ChainReport {
  bool ok = false;
  std::string failure;  // first violated invariant, empty when ok
  Rational max_ratio;
  std::size_t max_index = 0;
};

// Rechecks every chain invariant from the stored primes, then the ratio
// bound by cross-multiplication.
inline ChainReport verify_chain(const Chain& chain, const Rational& ratio_bound = default_ratio_bound()) {
  ChainReport report;
  auto fail = [&](std::string what) {
    report.ok = false;
    report.failure = std::move(what);
    return report;
  };
  if (std::gcd(chain.residue, 72u) != 1 || chain.residue >= kModulus) return fail("class_unit_mod_72");
  if (sgn(chain.delta) <= 0) return fail("delta_positive");
  if (chain.primes.size() < 2) return fail("chain_length");
  const auto& p = chain.primes;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!is_prime(p[i])) return fail("prime at index " + std::to_string(i));
    if (p[i] % kModulus != chain.residue) return fail("class at index " + std::to_string(i));
    if (i > 0 && p[i] <= p[i - 1]) return fail("increasing at index " + std::to_string(i));
  }
  if (p.front() >= chain.seed_bound) return fail("p0_below_seed_bound");
  if (next_prime_in_class(chain.seed_bound, chain.residue, kModulus, Direction::down) != p.front()) {
    return fail("p0_largest_below_seed_bound");
  }
  if (p.back() <= chain.upper) return fail("last_above_upper");
  if (p[p.size() - 2] > chain.upper) return fail("second_to_last_at_most_upper");
  for (std::size_t i = 1; i < p.size(); ++i) {
    const std::uint64_t floor_target = detail::stretched(p[i - 1], chain.delta);
    if (p[i] <= floor_target) return fail("step_exceeds_delta at index " + std::to_string(i));
    if (next_prime_in_class(floor_target, chain.residue, kModulus, Direction::up) != p[i]) {
      return fail("least_prime_step at index " + std::to_string(i));
    }
  }
  report.max_index = max_ratio_index(chain);
  report.max_ratio = chain.ratio(report.max_index);
  // p_{i+1} / p_i < num/den  <=>  p_{i+1} * den < num * p_i
  const Integer lhs = from_u64(p[report.max_index + 1]) * ratio_bound.get_den();
  const Integer rhs = ratio_bound.get_num() * from_u64(p[report.max_index]);
  if (!(lhs < rhs)) return fail("ratio_bound at index " + std::to_string(report.max_index));
  report.ok = true;
  return report;
}

struct ClassResult {
  Chain chain;
  ChainReport report;
};

struct ChainRunReport {
  std::vector<ClassResult> classes;
  bool all_verified = false;
  Rational global_max;
  unsigned argmax_class = 0;
  std::size_t argmax_step = 0;
  std::size_t max_steps = 0;     // max over classes of M_l
  std::size_t total_primes = 0;  // sum over classes of M_l + 1
};

inline ChainRunReport summarize(std::vector<ClassResult> results) {
  ChainRunReport out;
  out.classes = std::move(results);
  out.all_verified = !out.classes.empty();
  bool first = true;
  for (const auto& r : out.classes) {
    out.all_verified = out.all_verified && r.report.ok;
    out.max_steps = std::max(out.max_steps, r.chain.steps());
    out.total_primes += r.chain.primes.size();
    if (r.chain.primes.size() < 2) continue;
    const std::size_t i = max_ratio_index(r.chain);
    const Rational ratio = r.chain.ratio(i);
    if (first || ratio > out.global_max) {
      out.global_max = ratio;
      out.argmax_class = r.chain.residue;
      out.argmax_step = i;
      first = false;
    }
  }
  return out;
}

struct ChainRunOptions {
  Rational delta = default_delta();
  std::vector<unsigned> classes = all_classes();
  std::uint64_t upper = kDefaultUpper;
  std::uint64_t seed_bound = kDefaultSeedBound;
  Rational ratio_bound = default_ratio_bound();
  unsigned threads = 1;
};

// Builds and verifies one chain per class; classes run on up to
// `threads` workers, results keep the input class order.
inline ChainRunReport run_chains(const ChainRunOptions& options = {}) {
  std::vector<ClassResult> results(options.classes.size());
  std::vector<std::exception_ptr> errors(options.classes.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < options.classes.size(); i += stride) {
      try {
        results[i].chain = build_chain(options.classes[i], options.delta, options.upper, options.seed_bound);
        results[i].report = verify_chain(results[i].chain, options.ratio_bound);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, options.classes.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w, workers);
    work(0, workers);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return summarize(std::move(results));
}

struct ConsecutivePairReport {
  bool consecutive = false;
  bool below_bound = false;

  bool ok() const { return consecutive && below_bound; }
};

// `low` and `high` are consecutive primes in `residue` mod 72, and
// high/low < bound.
inline ConsecutivePairReport check_consecutive_pair(std::uint64_t low = 16493, std::uint64_t high = 17573, unsigned residue = 5,
                                 const Rational& bound = make_rational(10655, 10000)) {
  ConsecutivePairReport report;
  report.consecutive = is_prime(low) && is_prime(high) && low % kModulus == residue && high % kModulus == residue &&
                       next_prime_in_class(low, residue, kModulus, Direction::up) == high;
  report.below_bound = from_u64(high) * bound.get_den() < bound.get_num() * from_u64(low);
  return report;
}

// 1072 (b_max * seed_bound)^3: above this N, the least admissible prime
// above A N^(1/3) already exceeds the seed bound.
inline Integer derive_n0(std::uint64_t seed_bound = kDefaultSeedBound, unsigned beta_max = 5) {
  return 1072 * cube(Integer(beta_max) * from_u64(seed_bound));
}

inline const Integer& n0() {
  static const Integer value = pow_int(Integer(10), 18);
  return value;
}

// (1 + eps) / (1 - eps); eps_72 < 0.013 is taken as given.
inline Rational eps_ratio(const Rational& eps = make_rational(13, 1000)) {
  Rational r = (1 + eps) / (1 - eps);
  r.canonicalize();
  return r;
}

// rho^3 < 134/113, i.e. rho < B/A.
inline bool below_interval_ratio(const Rational& rho) {
  return cube(rho.get_num()) * 113 < 134 * cube(rho.get_den());
}

// Chain certificate file
// ----------------------
//   # sevencubes prime-chain certificate v1
//   # class <l> delta <num>/<den> seed_bound <s> upper <u> max_ratio <num>/<den> at <i> count <n> primes <p0> ... <p_{n-1}>
//   class 5 delta 1/100 seed_bound 19541 upper 10000000000 max_ratio 21101/19949 at 2 count ... primes 19373 19661 19949 21101 ...
//
// One record per line; '#' lines and blank lines are ignored. max_ratio
// is p_{i+1}/p_i written unreduced from the two primes.

inline constexpr const char* kChainFileHeader = "# sevencubes prime-chain certificate v1";

inline void write_chain(std::ostream& out, const Chain& chain) {
  const std::size_t i = max_ratio_index(chain);
  out << "class " << chain.residue << " delta " << chain.delta.get_num().get_str() << '/'
      << chain.delta.get_den().get_str() << " seed_bound " << chain.seed_bound << " upper " << chain.upper
      << " max_ratio " << chain.primes[i + 1] << '/' << chain.primes[i] << " at " << i << " count "
      << chain.primes.size() << " primes";
  for (auto p : chain.primes) out << ' ' << p;
  out << '\n';
}

inline void write_chains(std::ostream& out, const std::vector<Chain>& chains) {
  out << kChainFileHeader << '\n';
  out << "# class <l> delta <num>/<den> seed_bound <s> upper <u> max_ratio <num>/<den> at <i> count <n> primes <p0> ...\n";
  for (const auto& c : chains) write_chain(out, c);
}

namespace detail {

inline void expect_word(std::istringstream& in, const char* word, std::size_t line) {
  std::string got;
  if (!(in >> got) || got != word) {
    throw ParseError("chain file line " + std::to_string(line) + ": expected '" + word + "'");
  }
}

inline std::uint64_t read_u64(std::istringstream& in, std::size_t line) {
  std::string token;
  if (!(in >> token)) throw ParseError("chain file line " + std::to_string(line) + ": missing number");
  try {
    return to_u64(parse_integer(token));
  } catch (const std::exception&) {
    throw ParseError("chain file line " + std::to_string(line) + ": bad number '" + token + "'");
  }
}

inline std::pair<std::uint64_t, std::uint64_t> read_fraction(std::istringstream& in, std::size_t line) {
  std::string token;
  in >> token;
  auto slash = token.find('/');
  if (slash == std::string::npos) throw ParseError("chain file line " + std::to_string(line) + ": bad fraction");
  std::istringstream a(token.substr(0, slash)), b(token.substr(slash + 1));
  return {read_u64(a, line), read_u64(b, line)};
}

}  // namespace detail

// Parses a chain file. The stored max ratio and count are checked against
// the prime list; chain invariants are left to verify_chain.
inline std::vector<Chain> read_chains(std::istream& in) {
  std::vector<Chain> out;
  std::string text;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    if (text[0] == '#') {
      if (text == kChainFileHeader) saw_header = true;
      continue;
    }
    std::istringstream line(text);
    Chain chain;
    detail::expect_word(line, "class", line_no);
    chain.residue = static_cast<unsigned>(detail::read_u64(line, line_no));
    detail::expect_word(line, "delta", line_no);
    auto [dn, dd] = detail::read_fraction(line, line_no);
    if (dd == 0) throw ParseError("chain file line " + std::to_string(line_no) + ": zero delta denominator");
    chain.delta = make_rational(from_u64(dn), from_u64(dd));
    detail::expect_word(line, "seed_bound", line_no);
    chain.seed_bound = detail::read_u64(line, line_no);
    detail::expect_word(line, "upper", line_no);
    chain.upper = detail::read_u64(line, line_no);
    detail::expect_word(line, "max_ratio", line_no);
    auto [rn, rd] = detail::read_fraction(line, line_no);
    detail::expect_word(line, "at", line_no);
    const std::uint64_t at = detail::read_u64(line, line_no);
    detail::expect_word(line, "count", line_no);
    const std::uint64_t count = detail::read_u64(line, line_no);
    detail::expect_word(line, "primes", line_no);
    std::string token;
    while (line >> token) {
      std::istringstream t(token);
      chain.primes.push_back(detail::read_u64(t, line_no));
    }
    if (chain.primes.size() != count) throw ParseError("chain file line " + std::to_string(line_no) + ": count mismatch");
    if (chain.primes.size() < 2 || at + 1 >= chain.primes.size() || chain.primes[at + 1] != rn ||
        chain.primes[at] != rd || max_ratio_index(chain) != at) {
      throw ParseError("chain file line " + std::to_string(line_no) + ": stored max_ratio disagrees with the primes");
    }
    out.push_back(std::move(chain));
  }
  if (!saw_header) throw ParseError("chain file: missing header line");
  return out;
}

}  // namespace sevencubes::chains
