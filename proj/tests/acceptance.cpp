// Acceptance criteria, one per number. Usage: acceptance [criterion...]
// Prints one "PASS criterion N: ..." or "FAIL criterion N: ..." line each;
// exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "sevencubes/sevencubes.hpp"

namespace {

using namespace sevencubes;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail(const std::string& what) {
    if (!passed) detail << "; ";
    passed = false;
    detail << what;
  }
  void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

void exceptional_set(Outcome& o) {
  const std::vector<std::uint64_t> expected = {15,  22,  23,  50,  114, 167, 175, 186, 212,
                                               231, 238, 239, 303, 364, 420, 428, 454};
  const auto all = oracle::scan_exceptional(500);
  const auto fours = oracle::scan_exceptional(500, 4);
  o.require(all == expected, "scan(500) = {" + join(all) + "}");
  o.require(fours == std::vector<std::uint64_t>{212, 364, 420, 428}, "multiples of 4 = {" + join(fours) + "}");
  if (o.passed) o.detail << "17 values, multiples of 4 = {212,364,420,428}";
}

void catalogue_2408(Outcome& o) {
  std::vector<std::vector<std::uint64_t>> expected = {
      {1, 4, 7, 10, 10}, {2, 2, 3, 5, 8, 12}, {2, 5, 6, 6, 8, 11}, {4, 4, 4, 6, 10, 10}};
  std::vector<std::vector<std::uint64_t>> found;
  for (const auto& m : oracle::enumerate_up_to(2408, 7, oracle::CubeMode::positive)) found.push_back(m.parts);
  std::sort(found.begin(), found.end());
  std::sort(expected.begin(), expected.end());
  o.require(found == expected, "found " + std::to_string(found.size()) + " multisets");
  if (o.passed) o.detail << "4 multisets, none with seven parts";
}

void chain_run(Outcome& o) {
  chains::ChainRunOptions options;
  options.delta = make_rational(1, 100);
  options.classes = chains::all_classes();
  options.threads = 4;
  const auto r = chains::run_chains(options);
  const Rational expected = make_rational(21101, 19949);
  o.require(r.classes.size() == 24, "class count " + std::to_string(r.classes.size()));
  o.require(r.all_verified, "a chain failed verification");
  o.require(r.max_steps < 1250, "max M = " + std::to_string(r.max_steps));
  o.require(r.global_max == expected, "global max " + r.global_max.get_str());
  o.require(r.global_max < make_rational(10584, 10000), "global max not below 1.0584");
  o.require(r.argmax_class == 5, "argmax class " + std::to_string(r.argmax_class));
  o.require(r.argmax_step == 1, "argmax step i = " + std::to_string(r.argmax_step) + ", expected 1");
  o.detail << " [24 chains, all verified = " << r.all_verified << ", max M = " << r.max_steps << ", global max "
           << r.global_max.get_str() << " at class " << r.argmax_class << " step " << r.argmax_step << "]";
}

void consecutive_pair(Outcome& o) {
  const auto r = chains::check_consecutive_pair(16493, 17573, 5, make_rational(10655, 10000));
  o.require(r.consecutive, "not consecutive in the class");
  o.require(r.below_bound, "ratio not below 1.0655");
  // independent: trial division over the whole gap
  o.require(brute::is_prime(16493) && brute::is_prime(17573), "endpoint not prime");
  for (std::uint64_t q = 16493 + 72; q < 17573; q += 72) o.require(!brute::is_prime(q), std::to_string(q) + " is prime");
  o.require(17573ull * 10000 < 10655ull * 16493, "cross-multiplication");
  if (o.passed) o.detail << "17573/16493 < 1.0655, no class-5 prime between";
}

void constants(Outcome& o) {
  const Integer ten = 10;
  o.require(113 * cube(Integer(10584)) < 134 * pow_int(ten, 12), "1.0584^3 >= 134/113");
  o.require(Integer(1013) * 1000 < Integer(1027) * 987, "1013/987 >= 1.027");
  o.require(1072 * cube(Integer(5 * 19541)) < pow_int(ten, 18), "1072 (5 * 19541)^3 >= 10^18");
  // and the library's own versions agree
  o.require(chains::below_interval_ratio(make_rational(10584, 10000)), "below_interval_ratio");
  o.require(chains::eps_ratio() == make_rational(1013, 987), "eps_ratio");
  o.require(chains::derive_n0() < chains::n0(), "derive_n0");
  if (o.passed) o.detail << "three cross-multiplications hold";
}

// Invariants recomputed here from the witness, without find_violation.
std::string constructive_problem(const Certificate& cert) {
  if (cert.path() != Path::constructive) return "fallback path";
  if (!verify(cert)) return "verify: " + *find_violation(cert);
  const Witness& w = *cert.witness;
  const Integer b = w.beta, bp = b * w.p, b3 = b * b * b, p3 = w.p * w.p * w.p;
  const auto [beta, branch] = select_beta(cert.n);
  if (w.beta != beta) return "beta";
  if (!(w.x0 >= 1 && w.x0 <= 6 * bp)) return "x0 > 6bp";
  if (!(904 * b3 * p3 < cert.n && cert.n < 1072 * b3 * p3)) return "p outside interval";
  const std::array<Integer, 3> c = {4 * b, 4 * b, 6 * b};
  Integer sum = 0;
  for (int i = 0; i < 3; ++i) {
    if (!(abs(w.x[i]) < c[i] * w.p)) return "|X| >= cp";
  }
  for (const auto& x : cert.cubes) {
    if (sgn(x) <= 0) return "nonpositive cube";
    sum += x * x * x;
  }
  if (sum != cert.n) return "cube sum";
  if (12 * bp * w.q1 != cert.n - w.x0 * w.x0 * w.x0 - 688 * bp * bp * bp) return "Q1 identity";
  if (mod_small(w.q1, 8) == 1) return "Q1 = 1 mod 8";
  if (mod_small(cert.n, 8) == 0 && mod_small(w.q1, 2) != 0) return "Q1 odd with 8 | N";
  if (branch == Branch::free_mod9 && mod_small(w.q1, 3) == 0) return "3 | Q1 with p free mod 9";
  if (branch == Branch::pinned_mod9 && mod_small(w.q1, 9) != 3) return "Q1 != 3 mod 9 with p pinned mod 9";
  return "";
}

void constructive(Outcome& o) {
  std::mt19937_64 rng(20080601);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const Integer n = log_uniform_multiple_of_four(rng, 18, 24);
    std::string problem;
    try {
      problem = constructive_problem(decompose(n));
    } catch (const std::exception& e) {
      problem = e.what();
    }
    if (problem.empty()) {
      ++ok;
    } else if (o.passed) {
      o.fail("N = " + n.get_str() + ": " + problem);
    }
  }
  o.detail << (o.passed ? "" : " ") << ok << "/1000 constructive and verified";
}

void small_n(Outcome& o) {
  constexpr std::uint64_t kLimit = 10000;
  const auto counts = brute::seven_cube_counts(kLimit, false);
  int done = 0;
  for (std::uint64_t n = 4; n <= kLimit; n += 4) {
    const bool excluded = n == 212 || n == 364 || n == 420 || n == 428;
    if (oracle::is_sum_of_seven_nonneg(n) != (counts[n] > 0)) o.fail("oracle disagrees at " + std::to_string(n));
    if (excluded) {
      if (counts[n] != 0) o.fail(std::to_string(n) + " is representable");
      continue;
    }
    try {
      const Certificate cert = decompose(Integer(static_cast<unsigned long>(n)));
      Integer sum = 0;
      bool nonneg = true;
      for (const auto& x : cert.cubes) {
        nonneg = nonneg && sgn(x) >= 0;
        sum += x * x * x;
      }
      if (!nonneg || sum != n || !verify(cert)) o.fail("bad certificate for " + std::to_string(n));
      if (cert.path() != Path::fallback) o.fail("constructive path at " + std::to_string(n));
      ++done;
    } catch (const std::exception& e) {
      o.fail(std::to_string(n) + ": " + e.what());
    }
  }
  if (o.passed) o.detail << done << " values verified, 4 exceptions skipped";
}

void component_oracles(Outcome& o) {
  const auto primes = brute::prime_table(200);
  int roots = 0;
  for (std::uint64_t p = 5; p < 200; ++p) {
    if (!primes[p] || p % 3 != 2) continue;
    for (unsigned beta : {1u, 5u}) {
      if (beta == 5 && p == 5) continue;
      const std::uint64_t m = 6 * beta * p;
      const auto table = brute::cube_root_table(m);
      for (std::uint64_t t = 0; t < m; ++t, ++roots) {
        if (cube_root_mod(Integer(static_cast<unsigned long>(t)), beta, Integer(static_cast<unsigned long>(p))) != table[t]) {
          o.fail("cube root p=" + std::to_string(p) + " beta=" + std::to_string(beta) + " t=" + std::to_string(t));
        }
      }
    }
  }
  constexpr std::uint64_t kLimit = 100000;
  const auto ternary = brute::ternary_table(kLimit);
  for (std::uint64_t q = 0; q <= kLimit; ++q) {
    const Integer big(static_cast<unsigned long>(q));
    const auto rep = represent(big);
    if (is_representable(big) != ternary[q] || rep.has_value() != ternary[q] || (rep && rep->value() != big)) {
      o.fail("ternary form at " + std::to_string(q));
    }
  }
  for (std::uint64_t r = 0; r <= kLimit; ++r) {
    const auto sq = two_squares(Integer(static_cast<unsigned long>(r)));
    if (sq.has_value() != brute::is_two_squares(r) ||
        (sq && sq->first * sq->first + sq->second * sq->second != Integer(static_cast<unsigned long>(r)))) {
      o.fail("two squares at " + std::to_string(r));
    }
  }
  if (o.passed) o.detail << roots << " cube roots, ternary form and two squares to 10^5";
}

const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<void(Outcome&)>>> table = {
      {1, {"exceptional set up to 500", exceptional_set}},
      {2, {"2408 catalogue", catalogue_2408}},
      {3, {"prime chains mod 72, delta 0.01", chain_run}},
      {4, {"consecutive class-5 primes 16493, 17573", consecutive_pair}},
      {5, {"constant audit", constants}},
      {6, {"constructive soundness, 1000 N in [10^18, 10^24]", constructive}},
      {7, {"every multiple of 4 up to 10^4", small_n}},
      {8, {"component oracles", component_oracles}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, _] : criteria()) selected.push_back(k);
  }
  bool all = true;
  for (int k : selected) {
    const auto it = criteria().find(k);
    if (it == criteria().end()) {
      std::cout << "FAIL criterion " << k << ": no such criterion\n";
      all = false;
      continue;
    }
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      it->second.second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << k << " (" << it->second.first << "): "
              << o.detail.str() << " [" << seconds << " s]" << std::endl;
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
