#pragma once

// Generic AMQ contract. A filter is a policy object exposing a deterministic
// state component (add_internal / query_internal / available_capacity) and a
// hash layer (hash). The wrappers below thread the hash layer explicitly, so
// every randomized operation is a pure function of (hash layer, state, draws).

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "amqlab/errors.hpp"
#include "amqlab/hashing.hpp"

namespace amqlab {

template <class A>
concept AmqPolicy = requires(const A& a, typename A::State s, const typename A::State& cs,
                             const typename A::Value& v, Key key, typename A::HashLayer h,
                             DrawSource& src, std::uint64_t n) {
  { a.new_state() } -> std::same_as<typename A::State>;
  { a.new_hash() } -> std::same_as<typename A::HashLayer>;
  { a.add_internal(std::move(s), v) } -> std::same_as<typename A::State>;
  { a.query_internal(cs, v) } -> std::same_as<bool>;
  { a.available_capacity(cs, n) } -> std::same_as<bool>;
  { a.hash(key, std::move(h), src) } -> std::same_as<std::pair<typename A::HashLayer, typename A::Value>>;
  requires std::equality_comparable<typename A::State>;
};

template <AmqPolicy A>
struct AmqPair {
  typename A::HashLayer hash;
  typename A::State state;
};

template <AmqPolicy A>
AmqPair<A> amq_new(const A& a) {
  return {a.new_hash(), a.new_state()};
}

// Value rendering for counterexample traces.
inline std::string describe(HashOutput v) { return std::to_string(v); }
inline std::string describe(const std::vector<HashOutput>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}
template <class V>
std::string describe(const Routed<V>& v) {
  return "(block " + std::to_string(v.block) + ", " + describe(v.inner) + ")";
}

/// Hashes `key` and folds the output into the state. Throws CapacityExceeded
/// when the state cannot absorb one more insert.
template <AmqPolicy A>
AmqPair<A> amq_add(const A& a, Key key, AmqPair<A> in, DrawSource& src) {
  if (!a.available_capacity(in.state, 1)) throw CapacityExceeded("amq_add: no capacity left");
  auto [hash, value] = a.hash(key, std::move(in.hash), src);
  return {std::move(hash), a.add_internal(std::move(in.state), value)};
}

/// Left fold of amq_add. Capacity for all keys is checked up front.
template <AmqPolicy A>
AmqPair<A> amq_addm(const A& a, std::span<const Key> keys, AmqPair<A> in, DrawSource& src) {
  if (!a.available_capacity(in.state, keys.size())) {
    throw CapacityExceeded("amq_addm: no capacity for " + std::to_string(keys.size()) + " inserts");
  }
  for (Key key : keys) in = amq_add(a, key, std::move(in), src);
  return in;
}

/// Returns the updated hash layer and the query answer; the state is untouched.
template <AmqPolicy A>
std::pair<typename A::HashLayer, bool> amq_query(const A& a, Key key, typename A::HashLayer hash,
                                                 const typename A::State& state, DrawSource& src) {
  auto [next, value] = a.hash(key, std::move(hash), src);
  return {std::move(next), a.query_internal(state, value)};
}

enum class CheckStatus { kPass, kFail, kRejected };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kRejected:
      return "rejected";
  }
  return "?";
}

struct NfnOutcome {
  CheckStatus status = CheckStatus::kPass;
  std::string trace;  // filled on failure
};

/// Identity state transform; the hook used by sensitivity fixtures.
struct NoFault {
  template <class S>
  S operator()(S s) const {
    return s;
  }
};

/// Runs add x; addm xs; query x on a fresh filter with Rng(seed) and checks
/// that the query is true. Rejected when keys repeat or capacity is missing.
template <AmqPolicy A, class Fault = NoFault>
NfnOutcome check_nfn(const A& a, Key x, std::span<const Key> xs, std::uint64_t seed,
                     const Fault& fault = {}) {
  std::vector<Key> all{x};
  all.insert(all.end(), xs.begin(), xs.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return {CheckStatus::kRejected, {}};

  auto filter = amq_new(a);
  if (!a.available_capacity(filter.state, 1 + xs.size())) return {CheckStatus::kRejected, {}};

  Rng rng(seed);
  std::ostringstream trace;
  trace << "seed " << seed;
  auto insert = [&](Key key) {
    auto [hash, value] = a.hash(key, std::move(filter.hash), rng);
    filter.hash = std::move(hash);
    filter.state = a.add_internal(std::move(filter.state), value);
    trace << "; add " << key << " -> " << describe(value);
  };
  insert(x);
  for (Key key : xs) insert(key);
  filter.state = fault(std::move(filter.state));

  auto [hash, value] = a.hash(x, std::move(filter.hash), rng);
  if (a.query_internal(filter.state, value)) return {CheckStatus::kPass, {}};
  trace << "; query " << x << " -> " << describe(value) << " = false";
  return {CheckStatus::kFail, trace.str()};
}

/// Aggregated result of a randomized law check.
struct LawReport {
  explicit LawReport(std::string name) : law(std::move(name)) {}

  std::string law;
  CheckStatus status = CheckStatus::kPass;
  std::uint64_t checked = 0;
  std::uint64_t rejected = 0;
  std::string counterexample;

  void fail(std::string why) {
    if (status != CheckStatus::kFail) counterexample = std::move(why);
    status = CheckStatus::kFail;
  }
  /// A law whose every scenario was rejected by a precondition is reported as
  /// rejected rather than passed.
  void finish() {
    if (status == CheckStatus::kPass && checked == 0 && rejected > 0) status = CheckStatus::kRejected;
  }
};

/// A hash output for a fresh key through a fresh hash layer.
template <AmqPolicy A>
typename A::Value random_value(const A& a, DrawSource& src) {
  return a.hash(0, a.new_hash(), src).second;
}

/// A state reached by up to `max_inserts` random internal inserts, stopping
/// early when capacity runs out. Inserted values are appended to `inserted`.
template <AmqPolicy A>
typename A::State random_state(const A& a, Rng& rng, std::uint64_t max_inserts,
                               std::vector<typename A::Value>* inserted = nullptr) {
  auto state = a.new_state();
  const std::uint64_t n = rng.uniform(max_inserts + 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!a.available_capacity(state, 1)) break;
    auto v = random_value(a, rng);
    state = a.add_internal(std::move(state), v);
    if (inserted) inserted->push_back(std::move(v));
  }
  return state;
}

/// query_internal(add_internal(s, v), v) holds whenever s has capacity.
template <AmqPolicy A>
LawReport check_insertion_validity(const A& a, std::uint64_t scenarios, std::uint64_t seed,
                                   std::uint64_t max_inserts = 16) {
  LawReport report{"insertion validity"};
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng rng = Rng::stream(seed, t);
    auto s = random_state(a, rng, max_inserts);
    auto v = random_value(a, rng);
    if (!a.available_capacity(s, 1)) {
      ++report.rejected;
      continue;
    }
    ++report.checked;
    if (!a.query_internal(a.add_internal(s, v), v)) {
      report.fail("scenario " + std::to_string(t) + ": inserted " + describe(v) + " queries false");
    }
  }
  report.finish();
  return report;
}

/// If query_internal(s, v) holds and s has capacity, it still holds after
/// add_internal(s, v') for any v'.
template <AmqPolicy A>
LawReport check_query_preservation(const A& a, std::uint64_t scenarios, std::uint64_t seed,
                                   std::uint64_t max_inserts = 16) {
  LawReport report{"query preservation"};
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng rng = Rng::stream(seed, t);
    std::vector<typename A::Value> inserted;
    auto s = random_state(a, rng, max_inserts, &inserted);
    if (inserted.empty() || !a.available_capacity(s, 1)) {
      ++report.rejected;
      continue;
    }
    const auto& v = inserted[rng.uniform(inserted.size())];
    auto other = random_value(a, rng);
    ++report.checked;
    if (a.query_internal(s, v) && !a.query_internal(a.add_internal(s, other), v)) {
      report.fail("scenario " + std::to_string(t) + ": " + describe(v) + " lost after adding " +
                  describe(other));
    }
  }
  report.finish();
  return report;
}

/// State map from A to B sharing A's hash outputs.
template <AmqPolicy A, AmqPolicy B>
  requires std::same_as<typename A::Value, typename B::Value>
struct AmqMapWitness {
  const A& source;
  const B& target;
  std::function<typename B::State(const typename A::State&)> map_state;
};

/// Add-commutativity map(A.add(s, v)) = B.add(map(s), v) and query
/// preservation B.query(map(s), v) = A.query(s, v), over random states and
/// values. Also checks map(A.new) = B.new, the premise of the FP reduction.
template <AmqPolicy A, AmqPolicy B>
LawReport check_amq_map(const AmqMapWitness<A, B>& w, std::uint64_t scenarios, std::uint64_t seed,
                        std::uint64_t max_inserts = 16) {
  LawReport report{"amq map"};
  if (!(w.map_state(w.source.new_state()) == w.target.new_state())) {
    report.fail("map(new) differs from target new state");
  }
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng rng = Rng::stream(seed, t);
    std::vector<typename A::Value> inserted;
    auto s = random_state(w.source, rng, max_inserts, &inserted);
    // Half the probes hit an inserted value so positive answers are exercised.
    auto v = (!inserted.empty() && rng.uniform(2) == 0) ? inserted[rng.uniform(inserted.size())]
                                                         : random_value(w.source, rng);
    const auto mapped = w.map_state(s);
    if (w.target.query_internal(mapped, v) != w.source.query_internal(s, v)) {
      report.fail("scenario " + std::to_string(t) + ": query of " + describe(v) + " differs");
    }
    if (!w.source.available_capacity(s, 1)) {
      ++report.rejected;
      continue;
    }
    ++report.checked;
    if (!(w.map_state(w.source.add_internal(s, v)) == w.target.add_internal(mapped, v))) {
      report.fail("scenario " + std::to_string(t) + ": add of " + describe(v) + " does not commute");
    }
  }
  report.finish();
  return report;
}

/// Result of one seeded run of: addm keys[0..l); query keys[0..l].
template <AmqPolicy A>
struct FpTrace {
  typename A::State state;
  std::vector<bool> answers;  // inserted keys, then the fresh key last
};

template <AmqPolicy A>
FpTrace<A> run_fp_trace(const A& a, std::uint64_t l, DrawSource& src) {
  std::vector<Key> keys(l);
  for (std::uint64_t i = 0; i < l; ++i) keys[i] = i;
  auto filter = amq_addm(a, keys, amq_new(a), src);
  FpTrace<A> out{filter.state, {}};
  for (Key key = 0; key <= l; ++key) {
    auto [hash, answer] = amq_query(a, key, std::move(filter.hash), filter.state, src);
    filter.hash = std::move(hash);
    out.answers.push_back(answer);
  }
  return out;
}

/// Runs the same seeded insert/query program through A and B and requires
/// identical answers and map(final A state) = final B state.
template <AmqPolicy A, AmqPolicy B, class Map>
LawReport check_trace_equivalence(const A& a, const B& b, const Map& map_state, std::uint64_t l,
                                  std::uint64_t scenarios, std::uint64_t seed) {
  LawReport report{"trace equivalence"};
  for (std::uint64_t t = 0; t < scenarios; ++t) {
    Rng ra = Rng::stream(seed, t);
    Rng rb = Rng::stream(seed, t);
    std::optional<FpTrace<A>> ta;
    try {
      ta = run_fp_trace(a, l, ra);
    } catch (const CapacityExceeded&) {
      ++report.rejected;
      continue;
    }
    const auto tb = run_fp_trace(b, l, rb);
    ++report.checked;
    if (ta->answers != tb.answers) {
      report.fail("scenario " + std::to_string(t) + ": query answers differ");
    } else if (!(map_state(ta->state) == tb.state)) {
      report.fail("scenario " + std::to_string(t) + ": mapped final states differ");
    }
  }
  report.finish();
  return report;
}

}  // namespace amqlab
