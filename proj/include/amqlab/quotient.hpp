#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "amqlab/codec.hpp"
#include "amqlab/hashing.hpp"

namespace amqlab {

struct QuotientSplit {
  std::uint64_t quotient = 0;
  std::uint64_t remainder = 0;
  friend bool operator==(const QuotientSplit&, const QuotientSplit&) = default;
};

/// Upper q bits select the bucket, lower r bits are the stored remainder.
QuotientSplit quotient_split(HashOutput output, unsigned q, unsigned r);

/// 2^q buckets, each a multiset of r-bit remainders (kept sorted).
class QuotientState {
 public:
  QuotientState(unsigned q, unsigned r);

  unsigned q() const { return q_; }
  unsigned r() const { return r_; }
  std::uint64_t bucket_count() const { return buckets_.size(); }
  std::span<const std::uint64_t> bucket(std::uint64_t i) const { return buckets_[i]; }
  std::uint64_t stored() const;

  friend bool operator==(const QuotientState&, const QuotientState&) = default;

 private:
  friend QuotientState qf_add_int(QuotientState, HashOutput);
  friend QuotientState read_quotient(ByteReader&);

  unsigned q_;
  unsigned r_;
  std::vector<std::vector<std::uint64_t>> buckets_;
};

QuotientState qf_new(unsigned q, unsigned r);
QuotientState qf_add_int(QuotientState state, HashOutput output);
bool qf_query_int(const QuotientState& state, HashOutput output);

/// "AMQQ1" | q u8 | r u8 | per bucket: length u32, then sorted remainders as u64.
Bytes serialize(const QuotientState& state);
QuotientState deserialize_quotient(std::span<const std::uint8_t> bytes);
QuotientState read_quotient(ByteReader& r);

/// Quotient filter over a single hash of q + r bits.
struct QuotientFilter {
  using State = QuotientState;
  using Value = HashOutput;
  using HashLayer = HashState;

  unsigned q = 0;
  unsigned r = 1;

  QuotientFilter(unsigned q, unsigned r);

  State new_state() const { return qf_new(q, r); }
  HashLayer new_hash() const { return HashState(std::uint64_t{1} << (q + r)); }
  State add_internal(State s, const Value& v) const { return qf_add_int(std::move(s), v); }
  bool query_internal(const State& s, const Value& v) const { return qf_query_int(s, v); }
  bool available_capacity(const State&, std::uint64_t) const { return true; }
  std::pair<HashLayer, Value> hash(Key key, HashLayer h, DrawSource& src) const {
    return amqlab::hash(key, std::move(h), src);
  }
};

}  // namespace amqlab
