#include "amqlab/counting_bloom.hpp"

#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "amqlab/errors.hpp"

namespace amqlab {

namespace {

std::map<HashOutput, std::uint64_t> multiplicities(const CountingState& state,
                                                   std::span<const HashOutput> indices) {
  std::map<HashOutput, std::uint64_t> counts;
  for (auto i : indices) {
    if (i >= state.size()) {
      throw IndexOutOfRange("counter index " + std::to_string(i) + " outside [0, " +
                            std::to_string(state.size()) + ")");
    }
    ++counts[i];
  }
  return counts;
}

}  // namespace

CountingState::CountingState(std::uint64_t m, std::uint32_t bound) : counters_(m, 0), bound_(bound) {
  if (m < 1) throw InvalidParameter("counting: m must be at least 1");
  if (bound < 1) throw InvalidParameter("counting: counter bound must be at least 1");
}

CountingState cf_new(std::uint64_t m, std::uint32_t bound) { return CountingState(m, bound); }

CountingState cf_add_int(CountingState state, std::span<const HashOutput> indices) {
  const auto counts = multiplicities(state, indices);
  for (const auto& [i, n] : counts) {
    if (state.counters_[i] + n > state.bound_) {
      throw CounterSaturation("counter " + std::to_string(i) + " would exceed bound " +
                              std::to_string(state.bound_));
    }
  }
  for (const auto& [i, n] : counts) state.counters_[i] += static_cast<std::uint32_t>(n);
  return state;
}

bool cf_query_int(const CountingState& state, std::span<const HashOutput> indices) {
  bool all = true;
  for (auto i : indices) {
    if (i >= state.size()) throw IndexOutOfRange("counter index " + std::to_string(i) + " out of range");
    all = all && state[i] > 0;
  }
  return all;
}

CountingState cf_remove_int(CountingState state, std::span<const HashOutput> indices) {
  const auto counts = multiplicities(state, indices);
  for (const auto& [i, n] : counts) {
    if (state.counters_[i] < n) {
      throw UnderflowRemoval("counter " + std::to_string(i) + " would drop below zero");
    }
  }
  for (const auto& [i, n] : counts) state.counters_[i] -= static_cast<std::uint32_t>(n);
  return state;
}

bool cf_available_capacity(const CountingState& state, std::uint64_t k, std::uint64_t n) {
  if (n == 0) return true;
  if (k != 0 && n > state.bound() / k) return false;
  const std::uint64_t limit = state.bound() - k * n;
  for (auto c : state.counters()) {
    if (c > limit) return false;
  }
  return true;
}

std::uint64_t cf_counter_sum(const CountingState& state) {
  return std::accumulate(state.counters().begin(), state.counters().end(), std::uint64_t{0});
}

BloomState cf_to_bloom(const CountingState& state) {
  BloomState bits(state.size());
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    if (state[i] > 0) bits.set(i);
  }
  return bits;
}

unsigned counter_width(std::uint32_t bound) { return static_cast<unsigned>(std::bit_width(bound)); }

Bytes serialize(const CountingState& state) {
  ByteWriter w;
  w.magic("AMQC1");
  w.u32(static_cast<std::uint32_t>(state.size()));
  w.u32(state.bound());
  const unsigned width = counter_width(state.bound());
  Bytes packed((state.size() * width + 7) / 8, 0);
  std::uint64_t bitpos = 0;
  for (auto c : state.counters()) {
    for (unsigned b = 0; b < width; ++b, ++bitpos) {
      if ((c >> b) & 1U) packed[bitpos / 8] |= static_cast<std::uint8_t>(1U << (bitpos % 8));
    }
  }
  w.raw(packed);
  return std::move(w).take();
}

CountingState read_counting(ByteReader& r) {
  r.expect_magic("AMQC1");
  const std::uint32_t m = r.u32();
  const std::uint32_t bound = r.u32();
  if (m < 1 || bound < 1) throw FormatError("counting: m and bound must be at least 1");
  CountingState state(m, bound);
  const unsigned width = counter_width(bound);
  const auto packed = r.raw((static_cast<std::uint64_t>(m) * width + 7) / 8);
  std::uint64_t bitpos = 0;
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint32_t c = 0;
    for (unsigned b = 0; b < width; ++b, ++bitpos) {
      if ((packed[bitpos / 8] >> (bitpos % 8)) & 1U) c |= 1U << b;
    }
    if (c > bound) throw FormatError("counting: counter exceeds bound");
    state.counters_[i] = c;
  }
  return state;
}

CountingState deserialize_counting(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto state = read_counting(r);
  r.expect_end();
  return state;
}

CountingBloomFilter::CountingBloomFilter(std::uint64_t m_bits, std::uint64_t k_hashes,
                                         std::uint32_t counter_bound)
    : m(m_bits), k(k_hashes), bound(counter_bound) {
  if (m < 1) throw InvalidParameter("counting: m must be at least 1");
  if (k < 1) throw InvalidParameter("counting: k must be at least 1");
  if (bound < 1) throw InvalidParameter("counting: counter bound must be at least 1");
  if (m > std::numeric_limits<std::uint32_t>::max()) throw InvalidParameter("counting: m too large");
}

namespace {

std::vector<Key> prefix_keys(Rng& rng, std::uint64_t max_prefix, Key first) {
  std::vector<Key> keys(rng.uniform(max_prefix + 1));
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = first + i;
  return keys;
}

}  // namespace

AmqPair<CountingBloomFilter> cf_remove(const CountingBloomFilter& cf, Key key, AmqPair<CountingBloomFilter> in,
                                       DrawSource& src) {
  auto [hash, value] = cf.hash(key, std::move(in.hash), src);
  return {std::move(hash), cf_remove_int(std::move(in.state), value)};
}

LawReport check_removal_law(const CountingBloomFilter& cf, std::uint64_t scenarios, std::uint64_t seed,
                            std::uint64_t max_prefix) {
  LawReport report{"counting removal"};
  constexpr Key kRemoved = 0;
  constexpr Key kKept = 1;
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng rng = Rng::stream(seed, t);
    const auto prefix = prefix_keys(rng, max_prefix, 2);
    auto filter = amq_new(cf);
    if (!cf.available_capacity(filter.state, prefix.size() + 2)) {
      ++report.rejected;
      continue;
    }
    ++report.checked;
    filter = amq_addm(cf, prefix, std::move(filter), rng);
    filter = amq_add(cf, kRemoved, std::move(filter), rng);
    filter = amq_add(cf, kKept, std::move(filter), rng);
    filter = cf_remove(cf, kRemoved, std::move(filter), rng);
    if (!amq_query(cf, kKept, std::move(filter.hash), filter.state, rng).second) {
      report.fail("scenario " + std::to_string(t) + " (prefix " + std::to_string(prefix.size()) +
                  "): kept key queries false after removal");
    }
  }
  report.finish();
  return report;
}

LawReport check_counter_increment_law(const CountingBloomFilter& cf, std::uint64_t scenarios, std::uint64_t seed,
                                      std::uint64_t max_prefix) {
  LawReport report{"counter increment"};
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng rng = Rng::stream(seed, t);
    const auto prefix = prefix_keys(rng, max_prefix, 1);
    auto filter = amq_new(cf);
    if (!cf.available_capacity(filter.state, prefix.size() + 1)) {
      ++report.rejected;
      continue;
    }
    ++report.checked;
    filter = amq_addm(cf, prefix, std::move(filter), rng);
    const auto before = cf_counter_sum(filter.state);
    filter = amq_add(cf, 0, std::move(filter), rng);
    const auto after = cf_counter_sum(filter.state);
    if (after != before + cf.k) {
      report.fail("scenario " + std::to_string(t) + ": counter sum " + std::to_string(before) + " -> " +
                  std::to_string(after) + ", expected +" + std::to_string(cf.k));
    }
  }
  report.finish();
  return report;
}

AmqMapWitness<CountingBloomFilter, BloomFilter> counting_to_bloom(const CountingBloomFilter& cf,
                                                                  const BloomFilter& bf) {
  return {cf, bf, [](const CountingState& s) { return cf_to_bloom(s); }};
}

}  // namespace amqlab
