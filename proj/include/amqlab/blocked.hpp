#pragma once

// Blocked AMQ combinator: `blocks` independent copies of an inner AMQ behind a
// multiplexed hash. The meta hash picks a block, the block's own hash layer
// produces the inner value, and only that block is read or written.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amqlab/amq_core.hpp"
#include "amqlab/codec.hpp"
#include "amqlab/hashing.hpp"

namespace amqlab {

template <class InnerState>
struct BlockedState {
  std::vector<InnerState> blocks;
  friend bool operator==(const BlockedState&, const BlockedState&) = default;
};

template <AmqPolicy Inner>
BlockedState<typename Inner::State> blocked_new(std::uint64_t blocks, const Inner& inner) {
  if (blocks < 1) throw InvalidParameter("blocked: blocks must be at least 1");
  return {std::vector<typename Inner::State>(blocks, inner.new_state())};
}

namespace detail {
inline void check_block(std::uint64_t block, std::size_t count) {
  if (block >= count) {
    throw IndexOutOfRange("block " + std::to_string(block) + " outside [0, " + std::to_string(count) + ")");
  }
}
}  // namespace detail

template <AmqPolicy Inner>
BlockedState<typename Inner::State> blocked_add_int(const Inner& inner, BlockedState<typename Inner::State> state,
                                                    const Routed<typename Inner::Value>& value) {
  detail::check_block(value.block, state.blocks.size());
  auto& target = state.blocks[value.block];
  target = inner.add_internal(std::move(target), value.inner);
  return state;
}

template <AmqPolicy Inner>
bool blocked_query_int(const Inner& inner, const BlockedState<typename Inner::State>& state,
                       const Routed<typename Inner::Value>& value) {
  detail::check_block(value.block, state.blocks.size());
  return inner.query_internal(state.blocks[value.block], value.inner);
}

/// Conservative: every block must absorb all n inserts, since routing may send
/// them all to one block.
template <AmqPolicy Inner>
bool blocked_available_capacity(const Inner& inner, const BlockedState<typename Inner::State>& state,
                                std::uint64_t n) {
  return std::all_of(state.blocks.begin(), state.blocks.end(),
                     [&](const auto& b) { return inner.available_capacity(b, n); });
}

template <AmqPolicy Inner>
struct BlockedAmq {
  using State = BlockedState<typename Inner::State>;
  using Value = Routed<typename Inner::Value>;
  using HashLayer = MultiplexedHash<typename Inner::HashLayer>;

  std::uint64_t blocks = 1;
  Inner inner;

  BlockedAmq(std::uint64_t block_count, Inner inner_amq) : blocks(block_count), inner(std::move(inner_amq)) {
    if (blocks < 1) throw InvalidParameter("blocked: blocks must be at least 1");
  }

  State new_state() const { return blocked_new(blocks, inner); }
  HashLayer new_hash() const { return HashLayer(blocks, inner.new_hash()); }
  State add_internal(State s, const Value& v) const { return blocked_add_int(inner, std::move(s), v); }
  bool query_internal(const State& s, const Value& v) const { return blocked_query_int(inner, s, v); }
  bool available_capacity(const State& s, std::uint64_t n) const {
    return blocked_available_capacity(inner, s, n);
  }
  std::pair<HashLayer, Value> hash(Key key, HashLayer h, DrawSource& src) const {
    return multiplexed_hash(key, std::move(h), src,
                            [this](Key k, typename Inner::HashLayer ih, DrawSource& s) {
                              return inner.hash(k, std::move(ih), s);
                            });
  }
};

/// "AMQK1" | block count u32 | each block's own serialized form.
template <class InnerState>
Bytes serialize(const BlockedState<InnerState>& state) {
  ByteWriter w;
  w.magic("AMQK1");
  w.u32(static_cast<std::uint32_t>(state.blocks.size()));
  for (const auto& b : state.blocks) w.raw(serialize(b));
  return std::move(w).take();
}

/// `read_inner(ByteReader&)` decodes one inner block.
template <class ReadInner>
auto deserialize_blocked(std::span<const std::uint8_t> bytes, ReadInner&& read_inner) {
  ByteReader r(bytes);
  r.expect_magic("AMQK1");
  const std::uint32_t count = r.u32();
  if (count < 1) throw FormatError("blocked: block count must be at least 1");
  using InnerState = std::decay_t<decltype(read_inner(r))>;
  BlockedState<InnerState> state;
  state.blocks.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) state.blocks.push_back(read_inner(r));
  r.expect_end();
  return state;
}

}  // namespace amqlab
