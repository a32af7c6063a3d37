#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amqlab/amq_core.hpp"
#include "amqlab/bloom.hpp"
#include "amqlab/codec.hpp"
#include "amqlab/hashing.hpp"

namespace amqlab {

/// m counters, each in [0, bound].
class CountingState {
 public:
  CountingState(std::uint64_t m, std::uint32_t bound);

  std::uint64_t size() const { return counters_.size(); }
  std::uint32_t bound() const { return bound_; }
  std::uint32_t operator[](std::size_t i) const { return counters_[i]; }
  std::span<const std::uint32_t> counters() const { return counters_; }

  friend bool operator==(const CountingState&, const CountingState&) = default;

 private:
  friend CountingState cf_add_int(CountingState, std::span<const HashOutput>);
  friend CountingState cf_remove_int(CountingState, std::span<const HashOutput>);
  friend CountingState read_counting(ByteReader&);

  std::vector<std::uint32_t> counters_;
  std::uint32_t bound_;
};

CountingState cf_new(std::uint64_t m, std::uint32_t bound);
/// Increments once per occurrence; CounterSaturation if any counter would
/// pass the bound (the state is never clamped).
CountingState cf_add_int(CountingState state, std::span<const HashOutput> indices);
/// True iff every indexed counter is positive.
bool cf_query_int(const CountingState& state, std::span<const HashOutput> indices);
/// Decrements once per occurrence; UnderflowRemoval if a counter would go
/// below zero. The caller asserts the indices were previously inserted.
CountingState cf_remove_int(CountingState state, std::span<const HashOutput> indices);
/// True iff every counter ≤ bound − k·n.
bool cf_available_capacity(const CountingState& state, std::uint64_t k, std::uint64_t n);
std::uint64_t cf_counter_sum(const CountingState& state);
/// Bit i raised iff counter i > 0.
BloomState cf_to_bloom(const CountingState& state);

/// Bits per packed counter: ⌈log2(bound + 1)⌉.
unsigned counter_width(std::uint32_t bound);

/// "AMQC1" | m u32 | bound u32 | counters packed at counter_width bits,
/// LSB-first, zero-padded to a whole byte.
Bytes serialize(const CountingState& state);
CountingState deserialize_counting(std::span<const std::uint8_t> bytes);
CountingState read_counting(ByteReader& r);

struct CountingBloomFilter {
  using State = CountingState;
  using Value = std::vector<HashOutput>;
  using HashLayer = HashVector;

  std::uint64_t m = 1;
  std::uint64_t k = 1;
  std::uint32_t bound = 1;

  CountingBloomFilter(std::uint64_t m, std::uint64_t k, std::uint32_t bound);

  State new_state() const { return cf_new(m, bound); }
  HashLayer new_hash() const { return HashVector(k, m); }
  State add_internal(State s, const Value& v) const { return cf_add_int(std::move(s), v); }
  bool query_internal(const State& s, const Value& v) const { return cf_query_int(s, v); }
  bool available_capacity(const State& s, std::uint64_t n) const {
    return cf_available_capacity(s, k, n);
  }
  std::pair<HashLayer, Value> hash(Key key, HashLayer h, DrawSource& src) const {
    return hash_vec(key, std::move(h), src);
  }
};

/// Hashes `key` (a previously inserted key, so its outputs are already
/// recorded) and decrements its counters. Not part of the generic contract.
AmqPair<CountingBloomFilter> cf_remove(const CountingBloomFilter& cf, Key key,
                                       AmqPair<CountingBloomFilter> in, DrawSource& src);

/// Per scenario: a random prefix of inserts, then add x'; add x; remove x';
/// query x must be true. Scenarios without capacity are rejected.
LawReport check_removal_law(const CountingBloomFilter& cf, std::uint64_t scenarios, std::uint64_t seed,
                            std::uint64_t max_prefix = 8);

/// Per scenario: after a random prefix, inserting an unseen key raises
/// cf_counter_sum by exactly k.
LawReport check_counter_increment_law(const CountingBloomFilter& cf, std::uint64_t scenarios,
                                      std::uint64_t seed, std::uint64_t max_prefix = 8);

/// Counting → Bloom witness (counter > 0 ⇔ bit raised).
AmqMapWitness<CountingBloomFilter, BloomFilter> counting_to_bloom(const CountingBloomFilter& cf,
                                                                  const BloomFilter& bf);

}  // namespace amqlab
