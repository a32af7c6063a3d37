#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amqlab/codec.hpp"
#include "amqlab/hashing.hpp"

namespace amqlab {

/// Fixed-length bit sequence, packed into 64-bit words (bit i lives in word
/// i / 64 at position i % 64).
class BloomState {
 public:
  explicit BloomState(std::uint64_t m);

  std::uint64_t size() const { return m_; }
  bool get(std::uint64_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::uint64_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::uint64_t popcount() const;

  friend bool operator==(const BloomState&, const BloomState&) = default;

 private:
  std::uint64_t m_;
  std::vector<std::uint64_t> words_;
};

/// All bits cleared; InvalidParameter for m = 0.
BloomState bf_new(std::uint64_t m);
BloomState bf_add_int(BloomState state, std::span<const HashOutput> indices);
/// Conjunction over indices; true for an empty sequence.
bool bf_query_int(const BloomState& state, std::span<const HashOutput> indices);
bool bf_get_int(const BloomState& state, std::uint64_t i);

/// True iff every raised bit of `a` is raised in `b`.
bool bits_subset(const BloomState& a, const BloomState& b);

/// "AMQB1" | m u32 | ⌈m/8⌉ bytes, bit i at byte i/8, position i%8.
Bytes serialize(const BloomState& state);
BloomState deserialize_bloom(std::span<const std::uint8_t> bytes);
BloomState read_bloom(ByteReader& r);

/// Bloom filter over a k-hash vector of m-bit outputs.
struct BloomFilter {
  using State = BloomState;
  using Value = std::vector<HashOutput>;
  using HashLayer = HashVector;

  std::uint64_t m = 1;
  std::uint64_t k = 1;

  BloomFilter(std::uint64_t m, std::uint64_t k);

  State new_state() const { return bf_new(m); }
  HashLayer new_hash() const { return HashVector(k, m); }
  State add_internal(State s, const Value& v) const { return bf_add_int(std::move(s), v); }
  bool query_internal(const State& s, const Value& v) const { return bf_query_int(s, v); }
  bool available_capacity(const State&, std::uint64_t) const { return true; }
  std::pair<HashLayer, Value> hash(Key key, HashLayer h, DrawSource& src) const {
    return hash_vec(key, std::move(h), src);
  }
};

}  // namespace amqlab
