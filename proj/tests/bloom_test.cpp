#include "amqlab/bloom.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "amqlab/errors.hpp"
#include "amqlab/harness.hpp"
#include "brute_force.hpp"

using namespace amqlab;
using Idx = std::vector<HashOutput>;

namespace {

BloomState bits(std::initializer_list<int> raised, std::uint64_t m) {
  BloomState s(m);
  for (int i : raised) s.set(static_cast<std::uint64_t>(i));
  return s;
}

}  // namespace

TEST(BloomState, NewIsAllClear) {
  const auto s = bf_new(4);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.popcount(), 0u);
  for (std::uint64_t i = 0; i < 4; ++i) EXPECT_FALSE(bf_get_int(s, i));
  EXPECT_THROW(bf_new(0), InvalidParameter);
}

TEST(BloomState, AddSetsExactlyTheIndices) {
  EXPECT_EQ(bf_add_int(bf_new(4), Idx{1, 3}), bits({1, 3}, 4));
  EXPECT_EQ(bf_add_int(bf_new(4), Idx{1, 1}), bf_add_int(bf_new(4), Idx{1}));
  const auto s = bits({2}, 4);
  EXPECT_EQ(bf_add_int(s, Idx{}), s);
  EXPECT_THROW(bf_add_int(bf_new(4), Idx{4}), IndexOutOfRange);
}

TEST(BloomState, QueryIsConjunction) {
  const auto s = bits({1, 3}, 4);
  EXPECT_TRUE(bf_query_int(s, Idx{1, 3}));
  EXPECT_FALSE(bf_query_int(s, Idx{0, 1}));
  EXPECT_TRUE(bf_query_int(s, Idx{}));
  EXPECT_TRUE(bf_query_int(bf_add_int(bf_new(9), Idx{0, 8}), Idx{8, 0}));
  EXPECT_THROW(bf_query_int(s, Idx{7}), IndexOutOfRange);
}

TEST(BloomState, GetBounds) {
  EXPECT_TRUE(bf_get_int(bf_add_int(bf_new(4), Idx{2}), 2));
  EXPECT_THROW(bf_get_int(bf_new(4), 4), IndexOutOfRange);
}

TEST(BloomState, AddIsMonotone) {
  for (std::uint64_t t = 0; t < 500; ++t) {
    Rng rng = Rng::stream(11, t);
    const std::uint64_t m = 1 + rng.uniform(150);
    BloomState s(m);
    for (int step = 0; step < 10; ++step) {
      Idx idx(rng.uniform(4));
      for (auto& i : idx) i = rng.uniform(m);
      auto next = bf_add_int(s, idx);
      EXPECT_TRUE(bits_subset(s, next));
      EXPECT_TRUE(bf_query_int(next, idx));
      s = std::move(next);
    }
  }
}

TEST(BloomFilter, WrapperExamples) {
  const BloomFilter bf(2, 1);
  // Record key 5 at index 1 first, then add it through the wrapper.
  struct Ones final : DrawSource {
    std::uint64_t uniform(std::uint64_t bound) override { return 1 % bound; }
  } ones;
  AmqPair<BloomFilter> filter{hash_vec(5, HashVector(1, 2), ones).first, bf.new_state()};
  Rng rng(0);
  auto after = amq_add(bf, 5, filter, rng);
  EXPECT_EQ(after.state, bits({1}, 2));
  EXPECT_EQ(after.hash, filter.hash);
  EXPECT_THROW(BloomFilter(0, 1), InvalidParameter);
  EXPECT_THROW(BloomFilter(4, 0), InvalidParameter);
}

TEST(BloomFilter, BitFlipMatchesCounting) {
  for (std::uint64_t m = 1; m <= 3; ++m) {
    for (std::uint64_t k = 1; k <= 2; ++k) {
      for (std::uint64_t l = 0; l <= 2; ++l) {
        for (std::uint64_t i = 0; i < m; ++i) {
          const auto c = brute::bloom_bit_set(m, k, l, i);
          EXPECT_EQ(oracle_bit_set(BloomFilter(m, k), l, i),
                    ExactRational(BigNat(c.hits), BigNat(c.total)));
        }
      }
    }
  }
}

TEST(BloomCodec, BitExactLayout) {
  const auto s = bits({0, 3, 8, 9}, 10);
  const Bytes expected{'A', 'M', 'Q', 'B', '1', 10, 0, 0, 0, 0x09, 0x03};
  EXPECT_EQ(serialize(s), expected);
  EXPECT_EQ(deserialize_bloom(expected), s);
}

TEST(BloomCodec, RoundTripRandomStates) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(3, t);
    BloomState s(1 + rng.uniform(300));
    for (int j = 0; j < 20; ++j) s.set(rng.uniform(s.size()));
    EXPECT_EQ(deserialize_bloom(serialize(s)), s);
  }
}

TEST(BloomCodec, RejectsMalformedInput) {
  auto good = serialize(bits({1}, 10));
  auto padded = good;
  padded.back() |= 0x80;  // bit 15 lies past m = 10
  EXPECT_THROW(deserialize_bloom(padded), FormatError);
  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW(deserialize_bloom(truncated), FormatError);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(deserialize_bloom(trailing), FormatError);
  const Bytes zero_m{'A', 'M', 'Q', 'B', '1', 0, 0, 0, 0};
  EXPECT_THROW(deserialize_bloom(zero_m), FormatError);
}

TEST(BloomFilter, BitSetFrequencyWithinFourSigma) {
  const BloomFilter bf(64, 3);
  const std::vector<Key> keys{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::uint64_t trials = 100000;
  const auto counts = run_trials(trials, [&](std::uint64_t t) -> std::optional<bool> {
    Rng rng = Rng::stream(42, t);
    return bf_get_int(amq_addm(bf, keys, amq_new(bf), rng).state, t % 64);
  });
  const double p = to_float(bloom_bit_set_prob({64, 3}, 10));
  const double sigma = std::sqrt(trials * p * (1 - p));
  EXPECT_LT(std::fabs(static_cast<double>(counts.successes) - trials * p), 4 * sigma);
}
