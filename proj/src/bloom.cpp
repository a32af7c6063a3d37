#include "amqlab/bloom.hpp"

#include <bit>
#include <limits>
#include <string>

#include "amqlab/errors.hpp"

namespace amqlab {

namespace {

void check_index(const BloomState& state, std::uint64_t i) {
  if (i >= state.size()) {
    throw IndexOutOfRange("bit index " + std::to_string(i) + " outside [0, " +
                          std::to_string(state.size()) + ")");
  }
}

}  // namespace

BloomState::BloomState(std::uint64_t m) : m_(m), words_((m + 63) / 64, 0) {
  if (m < 1) throw InvalidParameter("bloom: m must be at least 1");
}

std::uint64_t BloomState::popcount() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

BloomState bf_new(std::uint64_t m) { return BloomState(m); }

BloomState bf_add_int(BloomState state, std::span<const HashOutput> indices) {
  for (auto i : indices) check_index(state, i);
  for (auto i : indices) state.set(i);
  return state;
}

bool bf_query_int(const BloomState& state, std::span<const HashOutput> indices) {
  bool all = true;
  for (auto i : indices) {
    check_index(state, i);
    all = all && state.get(i);
  }
  return all;
}

bool bf_get_int(const BloomState& state, std::uint64_t i) {
  check_index(state, i);
  return state.get(i);
}

bool bits_subset(const BloomState& a, const BloomState& b) {
  if (a.size() != b.size()) return false;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (a.get(i) && !b.get(i)) return false;
  }
  return true;
}

Bytes serialize(const BloomState& state) {
  ByteWriter w;
  w.magic("AMQB1");
  w.u32(static_cast<std::uint32_t>(state.size()));
  for (std::uint64_t byte = 0; byte < (state.size() + 7) / 8; ++byte) {
    std::uint8_t v = 0;
    for (std::uint64_t bit = 0; bit < 8; ++bit) {
      const std::uint64_t i = byte * 8 + bit;
      if (i < state.size() && state.get(i)) v |= static_cast<std::uint8_t>(1U << bit);
    }
    w.u8(v);
  }
  return std::move(w).take();
}

BloomState read_bloom(ByteReader& r) {
  r.expect_magic("AMQB1");
  const std::uint32_t m = r.u32();
  if (m < 1) throw FormatError("bloom: m must be at least 1");
  BloomState state(m);
  const auto payload = r.raw((m + 7) / 8);
  for (std::uint64_t i = 0; i < m; ++i) {
    if ((payload[i / 8] >> (i % 8)) & 1U) state.set(i);
  }
  if (m % 8 != 0 && (payload.back() >> (m % 8)) != 0) throw FormatError("bloom: padding bits set");
  return state;
}

BloomState deserialize_bloom(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto state = read_bloom(r);
  r.expect_end();
  return state;
}

BloomFilter::BloomFilter(std::uint64_t m_bits, std::uint64_t k_hashes) : m(m_bits), k(k_hashes) {
  if (m < 1) throw InvalidParameter("bloom: m must be at least 1");
  if (k < 1) throw InvalidParameter("bloom: k must be at least 1");
  if (m > std::numeric_limits<std::uint32_t>::max()) throw InvalidParameter("bloom: m too large");
}

}  // namespace amqlab
