#include "amqlab/quotient.hpp"

#include <algorithm>
#include <string>

#include "amqlab/analytic.hpp"
#include "amqlab/errors.hpp"

namespace amqlab {

namespace {

void check_widths(unsigned q, unsigned r) { QuotientParams{q, r}.validate(); }

}  // namespace

QuotientSplit quotient_split(HashOutput output, unsigned q, unsigned r) {
  check_widths(q, r);
  if (output >> (q + r) != 0) {
    throw IndexOutOfRange("hash output " + std::to_string(output) + " wider than " +
                          std::to_string(q + r) + " bits");
  }
  return {output >> r, output & ((std::uint64_t{1} << r) - 1)};
}

QuotientState::QuotientState(unsigned q, unsigned r) : q_(q), r_(r) {
  check_widths(q, r);
  buckets_.resize(std::uint64_t{1} << q);
}

std::uint64_t QuotientState::stored() const {
  std::uint64_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

QuotientState qf_new(unsigned q, unsigned r) { return QuotientState(q, r); }

QuotientState qf_add_int(QuotientState state, HashOutput output) {
  const auto [quotient, remainder] = quotient_split(output, state.q_, state.r_);
  auto& bucket = state.buckets_[quotient];
  bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), remainder), remainder);
  return state;
}

bool qf_query_int(const QuotientState& state, HashOutput output) {
  const auto [quotient, remainder] = quotient_split(output, state.q(), state.r());
  const auto bucket = state.bucket(quotient);
  return std::binary_search(bucket.begin(), bucket.end(), remainder);
}

Bytes serialize(const QuotientState& state) {
  ByteWriter w;
  w.magic("AMQQ1");
  w.u8(static_cast<std::uint8_t>(state.q()));
  w.u8(static_cast<std::uint8_t>(state.r()));
  for (std::uint64_t i = 0; i < state.bucket_count(); ++i) {
    const auto bucket = state.bucket(i);
    w.u32(static_cast<std::uint32_t>(bucket.size()));
    for (auto rem : bucket) w.u64(rem);
  }
  return std::move(w).take();
}

QuotientState read_quotient(ByteReader& r) {
  r.expect_magic("AMQQ1");
  const unsigned q = r.u8();
  const unsigned rb = r.u8();
  QuotientState state = [&] {
    try {
      return QuotientState(q, rb);
    } catch (const InvalidParameter& e) {
      throw FormatError(e.what());
    }
  }();
  for (auto& bucket : state.buckets_) {
    const std::uint32_t len = r.u32();
    bucket.reserve(len);
    for (std::uint32_t j = 0; j < len; ++j) {
      const std::uint64_t rem = r.u64();
      if (rem >> rb != 0) throw FormatError("quotient: remainder wider than r bits");
      if (!bucket.empty() && rem < bucket.back()) throw FormatError("quotient: bucket not sorted");
      bucket.push_back(rem);
    }
  }
  return state;
}

QuotientState deserialize_quotient(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto state = read_quotient(r);
  r.expect_end();
  return state;
}

QuotientFilter::QuotientFilter(unsigned q_bits, unsigned r_bits) : q(q_bits), r(r_bits) {
  check_widths(q, r);
}

}  // namespace amqlab
