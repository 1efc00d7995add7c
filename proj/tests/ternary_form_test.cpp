#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "sevencubes/ternary_form.hpp"

namespace sevencubes {
namespace {

TEST(IsRepresentable, ExcludedFamilies) {
  EXPECT_FALSE(is_representable(Integer(1)));
  EXPECT_FALSE(is_representable(Integer(6)));
  EXPECT_FALSE(is_representable(Integer(54)));  // 9 * 6
  EXPECT_FALSE(is_representable(Integer(9)));   // 1 mod 8
  EXPECT_FALSE(is_representable(Integer(15)));  // 9 * 1 + 6
  EXPECT_TRUE(is_representable(Integer(0)));
  EXPECT_TRUE(is_representable(Integer(7)));
  EXPECT_TRUE(is_representable(Integer(12)));
}

TEST(Represent, Examples) {
  auto rep = represent(Integer(7));
  ASSERT_TRUE(rep);
  EXPECT_EQ(rep->x1, 1);
  EXPECT_EQ(rep->x2, 1);
  EXPECT_EQ(rep->x3, 1);

  rep = represent(Integer(0));
  ASSERT_TRUE(rep);
  EXPECT_EQ(rep->value(), 0);

  // x3 = 0 would need 6 = a^2 + b^2
  rep = represent(Integer(12));
  ASSERT_TRUE(rep);
  EXPECT_EQ(rep->x1, 0);
  EXPECT_EQ(rep->x2, 0);
  EXPECT_EQ(rep->x3, 2);

  EXPECT_FALSE(represent(Integer(54)));
  EXPECT_FALSE(represent(Integer(-3)));
}

TEST(Represent, AgreesWithTripleLoopUpToOneHundredThousand) {
  constexpr std::uint64_t kLimit = 100000;
  const auto table = brute::ternary_table(kLimit);
  for (std::uint64_t q = 0; q <= kLimit; ++q) {
    const Integer big(static_cast<unsigned long>(q));
    ASSERT_EQ(is_representable(big), table[q]) << q;
    const auto rep = represent(big);
    ASSERT_EQ(rep.has_value(), table[q]) << q;
    if (rep) {
      ASSERT_EQ(rep->value(), big);
      ASSERT_LE(rep->x1, rep->x2);
      ASSERT_GE(rep->x1, 0);
      ASSERT_GE(rep->x3, 0);
    }
  }
}

TEST(Represent, LargeValuesAcrossResidues) {
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(5);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Integer q = rng.get_z_bits(40 + i % 60);
    if (!is_representable(q)) continue;
    const TernaryRep rep = must_represent(q);
    ASSERT_EQ(rep.value(), q);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(Represent, SeedOnlyAffectsTheRandomPhase) {
  RepresentOptions a, b;
  a.seed = 1;
  b.seed = 2;
  a.deterministic_attempts = b.deterministic_attempts = 0;
  const Integer q("123456789012345679", 10);
  ASSERT_TRUE(is_representable(q));
  auto ra = represent(q, a), rb = represent(q, b), ra2 = represent(q, a);
  ASSERT_TRUE(ra && rb && ra2);
  EXPECT_EQ(ra->value(), q);
  EXPECT_EQ(rb->value(), q);
  EXPECT_EQ(ra->x3, ra2->x3);  // reproducible per seed
}

TEST(MustRepresent, RejectsExcludedValues) {
  EXPECT_THROW(must_represent(Integer(6)), InvariantViolation);
  EXPECT_THROW(must_represent(Integer(17)), InvariantViolation);
}

}  // namespace
}  // namespace sevencubes
