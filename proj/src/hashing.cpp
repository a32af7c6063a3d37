#include "amqlab/hashing.hpp"

#include <string>

namespace amqlab {

namespace {

bool key_less(const HashState::Entry& e, Key key) { return e.first < key; }

}  // namespace

HashState::HashState(std::uint64_t domain_size) : domain_(domain_size) {
  if (domain_size < 1) throw InvalidParameter("hash state domain must be at least 1");
}

std::optional<HashOutput> HashState::find(Key key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, key_less);
  if (it == entries_.end() || it->first != key) return std::nullopt;
  return it->second;
}

void HashState::put(Key key, HashOutput output) {
  if (output >= domain_) {
    throw IndexOutOfRange("hash output " + std::to_string(output) + " outside domain " +
                          std::to_string(domain_));
  }
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key, key_less);
  if (it != entries_.end() && it->first == key) {
    if (it->second != output) throw InvalidParameter("key already mapped to a different output");
    return;
  }
  entries_.insert(it, Entry{key, output});
}

bool contains(const HashState& state, Key key, HashOutput output) {
  const auto found = state.find(key);
  return found && *found == output;
}

bool unseen(const HashState& state, Key key) { return !state.find(key).has_value(); }

std::pair<HashState, HashOutput> hash(Key key, HashState state, DrawSource& src) {
  if (const auto found = state.find(key)) return {std::move(state), *found};
  const HashOutput drawn = src.uniform(state.domain_size());
  state.put(key, drawn);
  return {std::move(state), drawn};
}

Bytes serialize(const HashState& state) {
  ByteWriter w;
  w.magic("AMQH1");
  w.u64(state.domain_size());
  w.u64(state.size());
  for (const auto& [key, output] : state.entries()) {
    w.u64(key);
    w.u64(output);
  }
  return std::move(w).take();
}

HashState deserialize_hash_state(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("AMQH1");
  const std::uint64_t domain = r.u64();
  if (domain < 1) throw FormatError("hash state domain must be at least 1");
  const std::uint64_t count = r.u64();
  HashState state(domain);
  Key previous = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const Key key = r.u64();
    const HashOutput output = r.u64();
    if (i > 0 && key <= previous) throw FormatError("hash state keys not strictly increasing");
    if (output >= domain) throw FormatError("hash output outside domain");
    state.put(key, output);
    previous = key;
  }
  r.expect_end();
  return state;
}

HashVector::HashVector(std::uint64_t k, std::uint64_t domain_size) {
  if (k < 1) throw InvalidParameter("hash vector needs at least one hash");
  states_.assign(k, HashState(domain_size));
}

std::pair<HashVector, std::vector<HashOutput>> hash_vec(Key key, HashVector hv, DrawSource& src) {
  std::vector<HashOutput> outputs;
  outputs.reserve(hv.states_.size());
  for (auto& state : hv.states_) {
    auto [next, out] = hash(key, std::move(state), src);
    state = std::move(next);
    outputs.push_back(out);
  }
  return {std::move(hv), std::move(outputs)};
}

bool contains(const HashVector& hv, Key key, std::span<const HashOutput> outputs) {
  if (outputs.size() != hv.k()) return false;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (!contains(hv[i], key, outputs[i])) return false;
  }
  return true;
}

bool unseen(const HashVector& hv, Key key) {
  for (const auto& s : hv.states()) {
    if (!unseen(s, key)) return false;
  }
  return true;
}

}  // namespace amqlab
