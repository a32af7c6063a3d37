#pragma once

// Random-oracle hashing: a hash state remembers every key it has seen and
// answers with the recorded output; unseen keys get a fresh uniform draw
// which is recorded before being returned.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "amqlab/codec.hpp"
#include "amqlab/errors.hpp"

namespace amqlab {

using Key = std::uint64_t;
using HashOutput = std::uint64_t;

/// Source of uniform draws over [0, bound). Implemented by Rng for seeded
/// execution and by the enumeration oracle for exhaustive replay.
class DrawSource {
 public:
  virtual ~DrawSource() = default;
  virtual std::uint64_t uniform(std::uint64_t bound) = 0;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: draw i is mix64(seed + (i + 1)·φ). Streams for
/// parallel trials are derived with stream(), so results do not depend on
/// scheduling.
class Rng final : public DrawSource {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL)));
  }

  std::uint64_t next() {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Unbiased: rejects the low (2^64 mod bound) values. A single-outcome
  /// draw consumes nothing.
  std::uint64_t uniform(std::uint64_t bound) override {
    if (bound == 0) throw InvalidParameter("uniform: bound must be positive");
    if (bound == 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Finite map Key → HashOutput over the domain [0, domain_size).
class HashState {
 public:
  using Entry = std::pair<Key, HashOutput>;

  explicit HashState(std::uint64_t domain_size);

  std::uint64_t domain_size() const { return domain_; }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  std::optional<HashOutput> find(Key key) const;
  /// Records key → output. Throws IndexOutOfRange if output ≥ domain_size and
  /// InvalidParameter if key already maps elsewhere.
  void put(Key key, HashOutput output);

  friend bool operator==(const HashState&, const HashState&) = default;

 private:
  std::uint64_t domain_;
  std::vector<Entry> entries_;  // sorted by key
};

bool contains(const HashState& state, Key key, HashOutput output);
bool unseen(const HashState& state, Key key);

/// Returns the stored output for a seen key without drawing; otherwise draws
/// uniformly from [0, d), records and returns it.
std::pair<HashState, HashOutput> hash(Key key, HashState state, DrawSource& src);

/// "AMQH1" | domain u64 | count u64 | count × (key u64, output u64), little-endian.
Bytes serialize(const HashState& state);
HashState deserialize_hash_state(std::span<const std::uint8_t> bytes);

/// k independent hash states sharing one domain size.
class HashVector {
 public:
  HashVector(std::uint64_t k, std::uint64_t domain_size);

  std::uint64_t k() const { return states_.size(); }
  std::uint64_t domain_size() const { return states_.front().domain_size(); }
  const HashState& operator[](std::size_t i) const { return states_[i]; }
  std::span<const HashState> states() const { return states_; }

  friend bool operator==(const HashVector&, const HashVector&) = default;
  friend std::pair<HashVector, std::vector<HashOutput>> hash_vec(Key key, HashVector hv,
                                                                  DrawSource& src);

 private:
  std::vector<HashState> states_;
};

std::pair<HashVector, std::vector<HashOutput>> hash_vec(Key key, HashVector hv, DrawSource& src);
bool contains(const HashVector& hv, Key key, std::span<const HashOutput> outputs);
bool unseen(const HashVector& hv, Key key);

/// Output of a multiplexed hash: the selected block and the inner output.
template <class V>
struct Routed {
  HashOutput block = 0;
  V inner{};
  friend bool operator==(const Routed&, const Routed&) = default;
};

/// Meta hash over the blocks plus one inner hash layer per block.
template <class InnerHash>
struct MultiplexedHash {
  HashState meta;
  std::vector<InnerHash> inner;

  MultiplexedHash(std::uint64_t blocks, const InnerHash& fresh_inner)
      : meta(blocks), inner(blocks, fresh_inner) {
    if (blocks < 1) throw InvalidParameter("multiplexed hash needs at least one block");
  }

  std::uint64_t blocks() const { return meta.domain_size(); }
  friend bool operator==(const MultiplexedHash&, const MultiplexedHash&) = default;
};

/// Selects a block via the meta hash, then hashes the key again with that
/// block's inner layer through `inner_hash(key, InnerHash, DrawSource&)`.
/// Only the selected block's inner state can change.
template <class InnerHash, class InnerFn>
auto multiplexed_hash(Key key, MultiplexedHash<InnerHash> mh, DrawSource& src, InnerFn&& inner_hash) {
  auto [meta, block] = hash(key, std::move(mh.meta), src);
  mh.meta = std::move(meta);
  auto [next_inner, out] = inner_hash(key, std::move(mh.inner[block]), src);
  mh.inner[block] = std::move(next_inner);
  using V = std::decay_t<decltype(out)>;
  return std::pair<MultiplexedHash<InnerHash>, Routed<V>>{std::move(mh), Routed<V>{block, std::move(out)}};
}

template <class InnerHash>
bool unseen(const MultiplexedHash<InnerHash>& mh, Key key) {
  return unseen(mh.meta, key) &&
         std::all_of(mh.inner.begin(), mh.inner.end(), [&](const InnerHash& h) { return unseen(h, key); });
}

}  // namespace amqlab
