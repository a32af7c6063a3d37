#include "amqlab/analytic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "amqlab/errors.hpp"
#include "brute_force.hpp"

using namespace amqlab;

namespace {

ExactRational ratio(const brute::Count& c) {
  return ExactRational(static_cast<std::int64_t>(c.hits), static_cast<std::int64_t>(c.total));
}

}  // namespace

TEST(BloomBitSetProb, Values) {
  EXPECT_EQ(bloom_bit_set_prob({5, 3}, 0), ExactRational(0));
  EXPECT_EQ(bloom_bit_set_prob({1, 1}, 1), ExactRational(1));
  EXPECT_EQ(bloom_bit_set_prob({2, 1}, 1), ExactRational(1, 2));
  EXPECT_EQ(bloom_bit_set_prob({2, 1}, 1), ratio(brute::bloom_bit_set(2, 1, 1, 0)));
}

TEST(BloomFalsePositive, HandCheckedValues) {
  EXPECT_EQ(bloom_false_positive({2, 1}, 1), ExactRational(1, 2));
  EXPECT_EQ(bloom_false_positive({2, 1}, 1), ratio(brute::bloom_fp(2, 1, 1)));
  EXPECT_EQ(bloom_false_positive({2, 2}, 1), ExactRational(5, 8));
  EXPECT_EQ(bloom_false_positive({2, 2}, 1), ratio(brute::bloom_fp(2, 2, 1)));
  for (std::uint64_t m = 1; m <= 6; ++m) {
    for (std::uint64_t k = 1; k <= 4; ++k) EXPECT_EQ(bloom_false_positive({m, k}, 0), ExactRational(0));
  }
}

TEST(BloomFalsePositive, MatchesDirectTupleCount) {
  for (std::uint64_t m = 1; m <= 4; ++m) {
    for (std::uint64_t k = 1; k <= 3; ++k) {
      for (std::uint64_t l = 0; l <= 2; ++l) {
        EXPECT_EQ(bloom_false_positive({m, k}, l), ratio(brute::bloom_fp(m, k, l))) << m << k << l;
      }
    }
  }
}

TEST(BloomFalsePositive, MonotoneAndBoundedOnGrid) {
  for (std::uint64_t m = 1; m <= 16; ++m) {
    for (std::uint64_t k = 1; k <= 4; ++k) {
      ExactRational prev(0);
      for (std::uint64_t l = 0; l <= 16; ++l) {
        const auto fp = bloom_false_positive({m, k}, l);
        EXPECT_TRUE(fp.is_probability());
        EXPECT_GE(fp, prev) << m << "," << k << "," << l;
        EXPECT_TRUE(bloom_bit_set_prob({m, k}, l).is_probability());
        EXPECT_TRUE(bloom_classic_bound({m, k}, l).is_probability());
        prev = fp;
      }
    }
  }
}

TEST(BloomFalsePositive, SingleHashEqualsBitSetProbability) {
  for (std::uint64_t m = 1; m <= 16; ++m) {
    for (std::uint64_t l = 0; l <= 16; ++l) {
      EXPECT_EQ(bloom_false_positive({m, 1}, l), bloom_bit_set_prob({m, 1}, l));
    }
  }
}

TEST(BloomFalsePositive, FeasibilityGuard) {
  EXPECT_THROW(bloom_false_positive({513, 1}, 1), InfeasibleExact);
  EXPECT_THROW(bloom_false_positive({64, 4}, 1025), InfeasibleExact);
  EXPECT_NO_THROW(bloom_false_positive({512, 4}, 1));
  EXPECT_FALSE(bloom_exact_feasible({1024, 3}, 10));
}

TEST(BloomFalsePositiveFloat, AgreesWithExactMode) {
  // Both routes round the same rational once, so the doubles are identical.
  for (std::uint64_t m : {1, 2, 3, 7, 64, 300, 512}) {
    for (std::uint64_t k : {1, 2, 3, 7}) {
      for (std::uint64_t l : {0, 1, 2, 5, 40, 300}) {
        const double exact = to_float(bloom_false_positive({m, k}, l));
        EXPECT_EQ(bloom_false_positive_float({m, k}, l), exact) << m << " " << k << " " << l;
      }
    }
  }
}

TEST(BloomFalsePositiveFloat, LargeParametersStayFinite) {
  const double fp = bloom_false_positive_float({1024, 3}, 100);
  // Close to the classic approximation in this regime.
  const double classic = std::pow(1.0 - std::pow(1.0 - 1.0 / 1024, 300), 3);
  EXPECT_TRUE(std::isfinite(fp));
  EXPECT_NEAR(fp, classic, 1e-3);
  const double big = bloom_false_positive_float({1000000, 7}, 100000);
  EXPECT_GT(big, 0.0);
  EXPECT_LT(big, 1.0);
  EXPECT_THROW(bloom_false_positive_float({1000000, 7}, 1000000000), InfeasibleExact);
}

TEST(BloomClassicBound, Values) {
  EXPECT_EQ(bloom_classic_bound({2, 2}, 1), ExactRational(9, 16));
  EXPECT_NE(bloom_classic_bound({2, 2}, 1), bloom_false_positive({2, 2}, 1));
  EXPECT_EQ(bloom_classic_bound({9, 4}, 0), ExactRational(0));
}

TEST(QuotientFalsePositive, Values) {
  EXPECT_EQ(quotient_false_positive({0, 3}, 0), ExactRational(0));
  EXPECT_EQ(quotient_false_positive({0, 1}, 1), ExactRational(1, 2));
  EXPECT_EQ(quotient_false_positive({1, 1}, 2), ExactRational(7, 16));
  for (unsigned p = 1; p <= 3; ++p) {
    for (std::uint64_t l = 0; l <= 4; ++l) {
      EXPECT_EQ(quotient_false_positive({p / 2, p - p / 2}, l), ratio(brute::quotient_fp(p, l)));
    }
  }
  EXPECT_THROW(quotient_false_positive({0, 0}, 1), InvalidParameter);
}

TEST(BlockedFalsePositive, Values) {
  auto inner = [](std::uint64_t i) { return bloom_false_positive({2, 1}, i); };
  EXPECT_EQ(blocked_false_positive(1, 3, inner), inner(3));
  EXPECT_EQ(blocked_false_positive(5, 0, inner), inner(0));
  EXPECT_EQ(blocked_false_positive(2, 1, inner), ExactRational(1, 4));
  EXPECT_EQ(blocked_false_positive(2, 2, inner), ratio(brute::blocked_bloom_fp(2, 2, 1, 2)));
  EXPECT_THROW(blocked_false_positive(0, 1, inner), InvalidParameter);
}

TEST(Params, Validation) {
  EXPECT_THROW(bloom_bit_set_prob({0, 1}, 1), InvalidParameter);
  EXPECT_THROW(bloom_false_positive({4, 0}, 1), InvalidParameter);
}
