#include "amqlab/exactmath.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "brute_force.hpp"

using namespace amqlab;

namespace {

// Repeated multiplication, independent of mpz_fac_ui.
BigNat product_upto(std::uint64_t n) {
  BigNat out(1);
  for (std::uint64_t i = 2; i <= n; ++i) out *= BigNat(i);
  return out;
}

// Pascal's triangle row n.
std::vector<BigNat> pascal_row(std::uint64_t n) {
  std::vector<BigNat> row{BigNat(1)};
  for (std::uint64_t i = 1; i <= n; ++i) {
    std::vector<BigNat> next(i + 1, BigNat(1));
    for (std::uint64_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return row;
}

}  // namespace

TEST(Factorial, SmallValues) {
  EXPECT_EQ(factorial(0), BigNat(1));
  EXPECT_EQ(factorial(1), BigNat(1));
  EXPECT_EQ(factorial(5), BigNat(120));
  for (std::uint64_t n = 0; n <= 40; ++n) EXPECT_EQ(factorial(n), product_upto(n)) << n;
}

TEST(Binomial, MatchesPascal) {
  EXPECT_EQ(binomial(7, 0), BigNat(1));
  EXPECT_EQ(binomial(4, 2), BigNat(6));
  EXPECT_EQ(binomial(3, 5), BigNat(0));
  for (std::uint64_t n = 0; n <= 30; ++n) {
    const auto row = pascal_row(n);
    for (std::uint64_t k = 0; k <= n; ++k) {
      EXPECT_EQ(binomial(n, k), row[k]);
      EXPECT_EQ(binomial(n, k), binomial(n, n - k));
    }
  }
}

TEST(Stirling2, NamedValues) {
  for (std::uint64_t n = 0; n <= 12; ++n) EXPECT_EQ(stirling2(n, n), BigNat(1));
  for (std::uint64_t n = 1; n <= 12; ++n) EXPECT_EQ(stirling2(n, 1), BigNat(1));
  EXPECT_EQ(stirling2(4, 2), BigNat(7));
  EXPECT_EQ(stirling2(3, 2), BigNat(3));
  EXPECT_EQ(stirling2(6, 3), BigNat(90));
  EXPECT_EQ(stirling2(3, 7), BigNat(0));
  EXPECT_EQ(stirling2(5, 0), BigNat(0));
}

TEST(Stirling2Recurrence, BaseCasesAndValues) {
  EXPECT_EQ(stirling2_recurrence(0, 0), BigNat(1));
  EXPECT_EQ(stirling2_recurrence(4, 0), BigNat(0));
  EXPECT_EQ(stirling2_recurrence(0, 3), BigNat(0));
  EXPECT_EQ(stirling2_recurrence(3, 2), BigNat(3));
  EXPECT_EQ(stirling2_recurrence(6, 3), BigNat(90));
}

TEST(Stirling2, BothRoutesMatchPartitionCount) {
  for (std::uint64_t n = 0; n <= 9; ++n) {
    for (std::uint64_t t = 0; t <= n; ++t) {
      const BigNat expected(brute::partitions(n, t));
      EXPECT_EQ(stirling2(n, t), expected) << n << "," << t;
      EXPECT_EQ(stirling2_recurrence(n, t), expected) << n << "," << t;
    }
  }
}

TEST(Stirling2, ClosedFormEqualsRecurrenceUpTo30) {
  for (std::uint64_t n = 0; n <= 30; ++n) {
    const auto row = stirling2_row(n, 30);
    for (std::uint64_t t = 0; t <= 30; ++t) {
      EXPECT_EQ(stirling2(n, t), stirling2_recurrence(n, t)) << n << "," << t;
      EXPECT_EQ(row[t], stirling2(n, t));
    }
  }
}

TEST(Stirling2, SurjectionIdentity) {
  // Σ_t S(n,t)·m^(t falling) = m^n
  for (std::uint64_t m = 0; m <= 8; ++m) {
    for (std::uint64_t n = 0; n <= 10; ++n) {
      BigNat sum(0);
      for (std::uint64_t t = 0; t <= n; ++t) sum += stirling2(n, t) * falling_factorial(m, t);
      EXPECT_EQ(sum, pow_nat(m, n)) << m << "," << n;
    }
  }
}

TEST(Stirling2, RejectsOversizedArguments) {
  EXPECT_THROW(stirling2(kMaxSmallArg + 1, 2), std::invalid_argument);
  EXPECT_THROW(factorial(kMaxSmallArg + 1), std::invalid_argument);
}

TEST(PowRat, Values) {
  EXPECT_EQ(pow_rat(ExactRational(1, 2), 0), ExactRational(1));
  EXPECT_EQ(pow_rat(ExactRational(1, 2), 3), ExactRational(1, 8));
  EXPECT_EQ(pow_rat(ExactRational(2, 3), 2), ExactRational(2, 3) * ExactRational(2, 3));
  EXPECT_EQ(pow_rat(ExactRational(2, 3), 2), ExactRational(4, 9));
}

TEST(ExactRational, LowestTermsAndFormatting) {
  EXPECT_EQ(ExactRational(6, 8).to_string(), "3/4");
  EXPECT_EQ(ExactRational(0).to_string(), "0/1");
  EXPECT_EQ(ExactRational(3, -6).to_string(), "-1/2");
  EXPECT_EQ(ExactRational::parse("10/4"), ExactRational(5, 2));
  EXPECT_THROW(ExactRational(1, 0), std::domain_error);
  EXPECT_THROW(ExactRational(1) / ExactRational(0), std::domain_error);
  EXPECT_THROW(ExactRational::parse("1/0"), std::invalid_argument);
}

TEST(ExactRational, FieldLawsOnRandomOperands) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::int64_t> num(-1000, 1000);
  std::uniform_int_distribution<std::int64_t> den(1, 1000);
  auto pick = [&] { return ExactRational(num(gen), den(gen)); };
  auto lowest = [](const ExactRational& x) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.numerator().get_mpz_t(), x.denominator().get_mpz_t());
    return g == 1 && x.denominator() > 0;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = pick();
    const auto b = pick();
    const auto c = pick();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE(lowest(a + b));
    EXPECT_TRUE(lowest(a - c));
    EXPECT_TRUE(lowest(a * b));
    if (!(c == ExactRational(0))) EXPECT_TRUE(lowest(a / c));
  }
}

TEST(BigNat, SubtractionNeverGoesNegative) {
  EXPECT_THROW(BigNat(3) - BigNat(4), std::domain_error);
  EXPECT_EQ(BigNat(4) - BigNat(3), BigNat(1));
  EXPECT_THROW(exact_div(BigNat(7), BigNat(2)), std::domain_error);
  EXPECT_EQ(exact_div(BigNat(8), BigNat(2)), BigNat(4));
}

TEST(ToFloat, ExactlyRepresentable) {
  EXPECT_EQ(to_float(ExactRational(1, 2)), 0.5);
  EXPECT_EQ(to_float(ExactRational(0)), 0.0);
  EXPECT_EQ(to_float(ExactRational(5, 8)), 0.625);
  EXPECT_EQ(to_float(ExactRational(-3, 4)), -0.75);
}

TEST(ToFloat, RoundsToNearest) {
  // 1/3, 2/3, 1/10 round exactly as the compiler's decimal/double conversion does.
  EXPECT_EQ(to_float(ExactRational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(to_float(ExactRational(2, 3)), 2.0 / 3.0);
  EXPECT_EQ(to_float(ExactRational(1, 10)), 0.1);
  // Tie: 1 + 2^-53 is halfway between 1 and 1 + 2^-52; even mantissa wins.
  const BigNat two53 = pow_nat(2, 53);
  EXPECT_EQ(to_float(ExactRational(two53 + BigNat(1), two53)), 1.0);
  // 1 + 3·2^-53 is halfway between 1 + 2^-52 and 1 + 2^-51; rounds up to even.
  EXPECT_EQ(to_float(ExactRational(two53 + BigNat(3), two53)), 1.0 + std::ldexp(1.0, -51));
  // Subnormal range.
  EXPECT_EQ(to_float(ExactRational(BigNat(1), pow_nat(2, 1074))), std::ldexp(1.0, -1074));
  EXPECT_EQ(to_float(ExactRational(BigNat(1), pow_nat(2, 1076))), 0.0);
  EXPECT_EQ(to_float(ExactRational(BigNat(3), pow_nat(2, 1076))), std::ldexp(1.0, -1074));
}

TEST(ToFloat, RandomRationalsAgreeWithDivision) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::int64_t> dist(1, 1 << 20);
  for (int i = 0; i < 5000; ++i) {
    const auto n = dist(gen);
    const auto d = dist(gen);
    // Both operands are exact doubles, so IEEE division is correctly rounded.
    EXPECT_EQ(to_float(ExactRational(n, d)), static_cast<double>(n) / static_cast<double>(d));
  }
}
