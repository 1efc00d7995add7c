#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "sevencubes/chains.hpp"
#include "sevencubes/cubes.hpp"
#include "sevencubes/selftest.hpp"

namespace sevencubes::chains {
namespace {

const Chain& class5() {
  static const Chain chain = build_chain(5);
  return chain;
}

TEST(Classes, UnitsMod72) {
  const auto all = all_classes();
  EXPECT_EQ(all.size(), 24u);
  for (unsigned l : all) EXPECT_EQ(std::gcd(l, 72u), 1u);
  const auto aux = auxiliary_prime_classes();
  EXPECT_EQ(aux.size(), 12u);
  for (unsigned l : aux) EXPECT_EQ(l % 3, 2u);
}

TEST(BuildChain, Class5Start) {
  const Chain& c = class5();
  ASSERT_GE(c.primes.size(), 4u);
  EXPECT_EQ(c.primes[0], 19373u);
  EXPECT_EQ(c.primes[1], 19661u);
  EXPECT_EQ(c.primes[2], 19949u);
  EXPECT_EQ(c.primes[3], 21101u);
  EXPECT_EQ(c.ratio(2), make_rational(21101, 19949));
  EXPECT_EQ(max_ratio_index(c), 2u);
  EXPECT_LT(c.steps(), 1250u);
  EXPECT_GT(c.primes.back(), kDefaultUpper);
  EXPECT_LE(c.primes[c.primes.size() - 2], kDefaultUpper);
}

TEST(BuildChain, StepsAgainstBruteForceBelowTenMillion) {
  const Chain& c = class5();
  for (std::size_t i = 1; i < c.primes.size() && c.primes[i] < 10'000'000; ++i) {
    const std::uint64_t floor_target = c.primes[i - 1] * 101 / 100;
    ASSERT_GT(c.primes[i], floor_target);
    ASSERT_TRUE(brute::is_prime(c.primes[i]));
    ASSERT_EQ(c.primes[i] % 72, 5u);
    for (std::uint64_t q = floor_target + 1; q < c.primes[i]; ++q) {
      if (q % 72 == 5) { ASSERT_FALSE(brute::is_prime(q)) << q; }
    }
  }
}

TEST(BuildChain, LargerDeltaGivesShorterChain) {
  const Chain wide = build_chain(5, make_rational(5, 100));
  EXPECT_LT(wide.steps(), class5().steps());
  EXPECT_TRUE(verify_chain(wide, make_rational(11, 10)).ok);
}

TEST(BuildChain, Errors) {
  EXPECT_THROW(build_chain(6), std::invalid_argument);
  EXPECT_THROW(build_chain(5, Rational(0)), std::invalid_argument);
  EXPECT_THROW(build_chain(5, default_delta(), (std::uint64_t{1} << 57)), std::invalid_argument);
  EXPECT_THROW(build_chain(5, default_delta(), kDefaultUpper, kDefaultSeedBound, 10), StepCapExceeded);
}

TEST(VerifyChain, AcceptsAndRejects) {
  const ChainReport good = verify_chain(class5());
  EXPECT_TRUE(good.ok) << good.failure;
  EXPECT_EQ(good.max_ratio, make_rational(21101, 19949));

  Chain gap = class5();
  gap.primes.erase(gap.primes.begin() + 10);
  EXPECT_FALSE(verify_chain(gap).ok);

  const ChainReport tight = verify_chain(class5(), make_rational(105, 100));
  EXPECT_FALSE(tight.ok);

  Chain short_chain = class5();
  short_chain.primes.pop_back();
  EXPECT_EQ(verify_chain(short_chain).failure, "last_above_upper");

  Chain late_seed = class5();
  late_seed.primes.erase(late_seed.primes.begin());
  EXPECT_FALSE(verify_chain(late_seed).ok);
}

TEST(FullRun, AllClasses) {
  ChainRunOptions options;
  options.threads = 4;
  const ChainRunReport r = run_chains(options);
  EXPECT_TRUE(r.all_verified);
  EXPECT_EQ(r.classes.size(), 24u);
  EXPECT_EQ(r.global_max, make_rational(21101, 19949));
  EXPECT_EQ(r.argmax_class, 5u);
  EXPECT_LT(r.max_steps, 1250u);
  EXPECT_LT(r.total_primes, 30000u);
  for (const auto& c : r.classes) EXPECT_LT(c.report.max_ratio, default_ratio_bound()) << c.chain.residue;
}

TEST(FullRun, ThreadCountDoesNotChangeResults) {
  ChainRunOptions options;
  options.classes = {1, 5, 7, 11};
  options.upper = 100'000'000;
  const auto one = run_chains(options);
  options.threads = 3;
  const auto three = run_chains(options);
  ASSERT_EQ(one.classes.size(), three.classes.size());
  for (std::size_t i = 0; i < one.classes.size(); ++i) EXPECT_EQ(one.classes[i].chain.primes, three.classes[i].chain.primes);
}

TEST(ChainsCoverIntervals, RandomLargeN) {
  // Every admissible class has a chain prime inside the constructive
  // interval for both b.
  std::vector<Chain> chains;
  for (unsigned l : auxiliary_prime_classes()) chains.push_back(build_chain(l));
  std::mt19937_64 rng(72);
  for (int i = 0; i < 100; ++i) {
    const Integer n = log_uniform_multiple_of_four(rng, 18, 28);
    for (unsigned beta : {1u, 5u}) {
      Parameters params = make_parameters(n);
      params.beta = beta;
      params.lower_coeff = 1072 * beta * beta * beta;
      params.upper_coeff = 904 * beta * beta * beta;
      const PrimeInterval iv = prime_interval(params);
      for (const auto& c : chains) {
        const bool hit = std::any_of(c.primes.begin(), c.primes.end(), [&](std::uint64_t p) {
          return from_u64(p) >= iv.lo && from_u64(p) <= iv.hi;
        });
        EXPECT_TRUE(hit) << "N=" << n.get_str() << " beta=" << beta << " class=" << c.residue;
      }
    }
  }
}

TEST(ConsecutivePair, ConsecutiveAndBelowBound) {
  EXPECT_TRUE(check_consecutive_pair().ok());
  for (std::uint64_t q = 16494; q < 17573; ++q) {
    if (q % 72 == 5) { ASSERT_FALSE(brute::is_prime(q)) << q; }
  }
  EXPECT_TRUE(brute::is_prime(16493));
  EXPECT_TRUE(brute::is_prime(17573));
  EXPECT_FALSE(check_consecutive_pair(16493, 17573, 5, make_rational(1065, 1000)).below_bound);
  EXPECT_FALSE(check_consecutive_pair(16493, 19373).consecutive);
}

TEST(Constants, N0AndRatios) {
  EXPECT_EQ(derive_n0(), 1072 * pow_int(Integer(5 * 19541), 3));
  EXPECT_LT(derive_n0(), n0());
  EXPECT_GT(derive_n0(100000), n0());
  EXPECT_EQ(derive_n0(kDefaultSeedBound, 5), 125 * derive_n0(kDefaultSeedBound, 1));

  EXPECT_EQ(eps_ratio(), make_rational(1013, 987));
  EXPECT_LT(eps_ratio(), make_rational(1027, 1000));
  EXPECT_EQ(eps_ratio(Rational(0)), 1);

  EXPECT_TRUE(below_interval_ratio(default_ratio_bound()));
  EXPECT_TRUE(below_interval_ratio(eps_ratio()));
  EXPECT_FALSE(below_interval_ratio(make_rational(106, 100)));
}

TEST(ChainFile, RoundTrip) {
  std::vector<Chain> chains = {class5(), build_chain(7, default_delta(), 1'000'000)};
  std::stringstream buffer;
  write_chains(buffer, chains);
  const auto back = read_chains(buffer);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].residue, chains[i].residue);
    EXPECT_EQ(back[i].delta, chains[i].delta);
    EXPECT_EQ(back[i].seed_bound, chains[i].seed_bound);
    EXPECT_EQ(back[i].upper, chains[i].upper);
    EXPECT_EQ(back[i].primes, chains[i].primes);
    EXPECT_TRUE(verify_chain(back[i]).ok);
  }
}

TEST(ChainFile, ParseErrors) {
  const Chain small = build_chain(5, default_delta(), 100000);
  std::stringstream good;
  write_chains(good, {small});
  const std::string text = good.str();

  std::istringstream no_header(text.substr(text.rfind("class ")));
  EXPECT_THROW(read_chains(no_header), ParseError);

  std::string bad_count = text;
  bad_count.replace(bad_count.rfind(" count ") + 7, 1, "9");
  std::istringstream bad_count_in(bad_count);
  EXPECT_THROW(read_chains(bad_count_in), ParseError);

  std::string bad_ratio = text;
  const std::size_t at = bad_ratio.rfind("max_ratio ") + 10;
  bad_ratio.replace(at, bad_ratio.find(' ', at) - at, "19949/19661");
  std::istringstream bad_ratio_in(bad_ratio);
  EXPECT_THROW(read_chains(bad_ratio_in), ParseError);

  std::istringstream garbage(std::string(kChainFileHeader) + "\nclass five\n");
  EXPECT_THROW(read_chains(garbage), ParseError);
}

}  // namespace
}  // namespace sevencubes::chains
