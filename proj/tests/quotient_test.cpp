#include "amqlab/quotient.hpp"

#include <gtest/gtest.h>

#include "amqlab/errors.hpp"
#include "amqlab/harness.hpp"
#include "brute_force.hpp"

using namespace amqlab;

TEST(QuotientSplit, Examples) {
  EXPECT_EQ(quotient_split(3, 1, 1), (QuotientSplit{1, 1}));
  EXPECT_EQ(quotient_split(2, 1, 1), (QuotientSplit{1, 0}));
  for (HashOutput o = 0; o < 8; ++o) EXPECT_EQ(quotient_split(o, 0, 3).quotient, 0u);
  EXPECT_THROW(quotient_split(4, 1, 1), IndexOutOfRange);
}

TEST(QuotientSplit, RecombinesExhaustively) {
  for (unsigned q = 0; q <= 4; ++q) {
    for (unsigned r = 0; r <= 4; ++r) {
      if (q + r == 0) continue;
      for (HashOutput o = 0; o < (HashOutput{1} << (q + r)); ++o) {
        const auto s = quotient_split(o, q, r);
        EXPECT_LT(s.quotient, HashOutput{1} << q);
        EXPECT_LT(s.remainder, HashOutput{1} << r);
        EXPECT_EQ((s.quotient << r) + s.remainder, o);
      }
    }
  }
}

TEST(QuotientState, NewAndAdd) {
  const auto s = qf_new(1, 1);
  EXPECT_EQ(s.bucket_count(), 2u);
  EXPECT_EQ(s.stored(), 0u);
  EXPECT_THROW(qf_new(0, 0), InvalidParameter);

  const auto one = qf_add_int(s, 2);
  EXPECT_TRUE(one.bucket(0).empty());
  ASSERT_EQ(one.bucket(1).size(), 1u);
  EXPECT_EQ(one.bucket(1)[0], 0u);

  const auto two = qf_add_int(one, 2);
  EXPECT_EQ(two.bucket(1).size(), 2u);
  EXPECT_TRUE(qf_query_int(two, 2));
  EXPECT_THROW(qf_add_int(s, 4), IndexOutOfRange);
}

TEST(QuotientState, QueryNeedsFullCollision) {
  const auto s = qf_add_int(qf_new(2, 2), 0b0110);
  EXPECT_TRUE(qf_query_int(s, 0b0110));
  EXPECT_FALSE(qf_query_int(s, 0b0111));  // same quotient
  EXPECT_FALSE(qf_query_int(s, 0b1010));  // same remainder
  for (HashOutput o = 0; o < 16; ++o) EXPECT_FALSE(qf_query_int(qf_new(2, 2), o));
}

TEST(QuotientState, QueryIsMembershipOfInsertedOutputs) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = Rng::stream(13, t);
    const unsigned q = static_cast<unsigned>(rng.uniform(4));
    const unsigned r = 1 + static_cast<unsigned>(rng.uniform(3));
    const HashOutput domain = HashOutput{1} << (q + r);
    auto s = qf_new(q, r);
    std::vector<HashOutput> inserted(rng.uniform(10));
    for (auto& o : inserted) {
      o = rng.uniform(domain);
      s = qf_add_int(std::move(s), o);
    }
    EXPECT_EQ(s.stored(), inserted.size());
    for (HashOutput o = 0; o < domain; ++o) {
      const bool member = std::find(inserted.begin(), inserted.end(), o) != inserted.end();
      EXPECT_EQ(qf_query_int(s, o), member);
    }
  }
}

TEST(QuotientFilter, FalsePositiveByEnumeration) {
  for (unsigned p = 1; p <= 3; ++p) {
    for (std::uint64_t l = 0; l <= 3; ++l) {
      const auto c = brute::quotient_fp(p, l);
      const ExactRational expected(BigNat(c.hits), BigNat(c.total));
      for (unsigned q = 0; q <= p; ++q) {
        EXPECT_EQ(oracle_false_positive(QuotientFilter(q, p - q), l), expected) << p << " " << l;
      }
    }
  }
}

TEST(QuotientCodec, LayoutAndRoundTrip) {
  auto s = qf_new(1, 2);
  s = qf_add_int(std::move(s), 0b101);
  s = qf_add_int(std::move(s), 0b100);
  const Bytes expected{'A', 'M', 'Q', 'Q', '1', 1, 2,
                       0, 0, 0, 0,
                       2, 0, 0, 0,
                       0, 0, 0, 0, 0, 0, 0, 0,
                       1, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(serialize(s), expected);
  EXPECT_EQ(deserialize_quotient(expected), s);

  auto bad = expected;
  bad[23] = 9;  // remainder 9 does not fit in 2 bits
  EXPECT_THROW(deserialize_quotient(bad), FormatError);
  auto unsorted = expected;
  unsorted[15] = 3;  // 3 then 1
  EXPECT_THROW(deserialize_quotient(unsorted), FormatError);
  auto truncated = expected;
  truncated.pop_back();
  EXPECT_THROW(deserialize_quotient(truncated), FormatError);
}
