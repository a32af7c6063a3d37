#pragma once

// Verification engines.
//
// The oracle computes exact probabilities by replaying a scripted scenario
// once per assignment of its fresh uniform draws. Draw points are discovered
// lazily: the first replay records the domain of every draw it makes, and an
// odometer then walks the whole outcome tree, so programs whose later draws
// depend on earlier outcomes are enumerated correctly too. Each leaf carries
// weight 1 / Π(domains on its path); seen keys never draw, so re-hashing adds
// no branching.
//
// The estimator runs seeded Monte-Carlo trials on independent Rng streams and
// brackets the success frequency with a Wilson score interval.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "amqlab/amq_core.hpp"
#include "amqlab/analytic.hpp"
#include "amqlab/blocked.hpp"
#include "amqlab/bloom.hpp"
#include "amqlab/counting_bloom.hpp"
#include "amqlab/errors.hpp"
#include "amqlab/exactmath.hpp"
#include "amqlab/hashing.hpp"
#include "amqlab/quotient.hpp"

namespace amqlab {

/// Largest number of leaves (and largest per-path domain product) the oracle
/// will enumerate: 2^24.
inline constexpr std::uint64_t kOracleLimit = std::uint64_t{1} << 24;

/// Draw structure of one replay: the domain of every fresh draw, in order.
struct OutcomeEnumeration {
  std::vector<std::uint64_t> domain_sizes;
  std::uint64_t draw_count() const { return domain_sizes.size(); }
  /// Π domain_sizes, saturating at UINT64_MAX.
  std::uint64_t total() const;
};

/// Replays a scripted assignment and extends it with zeros past its end,
/// recording the domains it sees. Single-outcome draws are not recorded.
class ScriptedDraws final : public DrawSource {
 public:
  std::uint64_t uniform(std::uint64_t bound) override;

  void rewind() { pos_ = 0; }
  /// Moves to the next assignment in odometer order; false when exhausted.
  bool advance();
  std::uint64_t used() const { return pos_; }
  std::span<const std::uint64_t> domains() const { return {domains_.data(), pos_}; }
  std::span<const std::uint64_t> values() const { return {values_.data(), pos_}; }

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> domains_;
  std::size_t pos_ = 0;
};

/// Records the draws made by one replay (all draws returning 0).
template <class Program>
OutcomeEnumeration discover_draws(Program&& program) {
  ScriptedDraws src;
  program(src);
  const auto d = src.domains();
  return {std::vector<std::uint64_t>(d.begin(), d.end())};
}

/// Exact probability that `program(DrawSource&)` returns true, with every
/// outcome assignment visited once. Throws EnumerationTooLarge past `limit`.
template <class Program>
ExactRational oracle_probability(Program&& program, std::uint64_t limit = kOracleLimit) {
  ScriptedDraws src;
  std::map<std::uint64_t, std::uint64_t> hits_by_weight;  // path product → event leaves
  std::uint64_t leaves = 0;
  do {
    src.rewind();
    const bool event = program(src);
    std::uint64_t product = 1;
    for (auto d : src.domains()) {
      if (product > limit / d) {
        throw EnumerationTooLarge("oracle: outcome space exceeds " + std::to_string(limit));
      }
      product *= d;
    }
    if (++leaves > limit) throw EnumerationTooLarge("oracle: more than " + std::to_string(limit) + " outcomes");
    if (event) ++hits_by_weight[product];
  } while (src.advance());

  ExactRational total(0);
  for (const auto& [product, hits] : hits_by_weight) {
    total += ExactRational(BigNat(hits), BigNat(product));
  }
  return total;
}

/// Probability that `event(result)` holds for `result = program(DrawSource&)`.
template <class Program, class Event>
ExactRational oracle_probability(Program&& program, Event&& event, std::uint64_t limit = kOracleLimit) {
  return oracle_probability([&](DrawSource& src) { return static_cast<bool>(event(program(src))); }, limit);
}

/// Insert keys 0..l-1 into a fresh filter, then query the unseen key l.
template <AmqPolicy A>
bool fp_program(const A& a, std::uint64_t l, DrawSource& src) {
  std::vector<Key> keys(l);
  for (std::uint64_t i = 0; i < l; ++i) keys[i] = i;
  auto filter = amq_addm(a, keys, amq_new(a), src);
  return amq_query(a, l, std::move(filter.hash), filter.state, src).second;
}

template <AmqPolicy A>
ExactRational oracle_false_positive(const A& a, std::uint64_t l, std::uint64_t limit = kOracleLimit) {
  return oracle_probability([&](DrawSource& src) { return fp_program(a, l, src); }, limit);
}

/// Probability that bit i is set after inserting l unseen keys.
ExactRational oracle_bit_set(const BloomFilter& bf, std::uint64_t l, std::uint64_t i,
                             std::uint64_t limit = kOracleLimit);

// Analytic false-positive value for each shipped structure.

struct AnalyticValue {
  std::optional<ExactRational> exact;  // absent when only the float mode applies
  double value = 0.0;
};

AnalyticValue analytic_false_positive(const BloomFilter& a, std::uint64_t l);
/// The counting filter reduces to the Bloom filter over the same m and k.
AnalyticValue analytic_false_positive(const CountingBloomFilter& a, std::uint64_t l);
AnalyticValue analytic_false_positive(const QuotientFilter& a, std::uint64_t l);

AnalyticValue blocked_mixture(std::uint64_t blocks, std::uint64_t l,
                              const std::function<AnalyticValue(std::uint64_t)>& inner);

template <AmqPolicy Inner>
AnalyticValue analytic_false_positive(const BlockedAmq<Inner>& a, std::uint64_t l) {
  return blocked_mixture(a.blocks, l, [&](std::uint64_t i) { return analytic_false_positive(a.inner, i); });
}

// Naming used in reports.

using ParamList = std::vector<std::pair<std::string, std::uint64_t>>;

std::string structure_name(const BloomFilter&);
std::string structure_name(const CountingBloomFilter&);
std::string structure_name(const QuotientFilter&);
template <AmqPolicy Inner>
std::string structure_name(const BlockedAmq<Inner>& a) {
  return "blocked-" + structure_name(a.inner);
}

ParamList structure_params(const BloomFilter& a);
ParamList structure_params(const CountingBloomFilter& a);
ParamList structure_params(const QuotientFilter& a);
template <AmqPolicy Inner>
ParamList structure_params(const BlockedAmq<Inner>& a) {
  ParamList out{{"blocks", a.blocks}};
  for (auto& p : structure_params(a.inner)) out.push_back(p);
  return out;
}

// Monte-Carlo.

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at z sigmas.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

struct SimulationReport {
  std::string structure;
  ParamList params;
  std::uint64_t l = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t successes = 0;
  std::uint64_t aborted_trials = 0;  // capacity aborts, excluded from the estimate
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  AnalyticValue analytic;
  double z = 4.0;

  bool analytic_within() const { return ci_low <= analytic.value && analytic.value <= ci_high; }
};

/// Runs `trial(index) -> std::optional<bool>` for every index (nullopt marks
/// an aborted trial) across worker threads; counts are order-independent.
struct TrialCounts {
  std::uint64_t successes = 0;
  std::uint64_t aborted = 0;
};
TrialCounts run_trials(std::uint64_t trials, const std::function<std::optional<bool>(std::uint64_t)>& trial);

SimulationReport make_report(std::string structure, ParamList params, std::uint64_t l, std::uint64_t trials,
                             std::uint64_t seed, double z, TrialCounts counts, AnalyticValue analytic);

/// Per trial t: stream Rng::stream(seed, t), fresh filter and hash layer,
/// insert keys 0..l-1, query fresh key l; success is a positive answer.
template <AmqPolicy A>
SimulationReport estimate_fp(const A& a, std::uint64_t l, std::uint64_t trials, std::uint64_t seed,
                             double z = 4.0) {
  if (trials < 1) throw InvalidParameter("estimate_fp: trials must be at least 1");
  const auto counts = run_trials(trials, [&](std::uint64_t t) -> std::optional<bool> {
    Rng rng = Rng::stream(seed, t);
    try {
      return fp_program(a, l, rng);
    } catch (const CapacityExceeded&) {
      return std::nullopt;
    }
  });
  return make_report(structure_name(a), structure_params(a), l, trials, seed, z, counts,
                     analytic_false_positive(a, l));
}

struct NfnReport {
  CheckStatus status = CheckStatus::kPass;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::uint64_t rejected = 0;
  std::string counterexample;  // first failing trace
};

/// Per trial t: check_nfn with x = 0, xs = 1..l under seed Rng::stream(seed, t).seed().
template <AmqPolicy A, class Fault = NoFault>
NfnReport check_no_false_negatives(const A& a, std::uint64_t l, std::uint64_t trials, std::uint64_t seed,
                                   const Fault& fault = {}) {
  NfnReport report;
  report.trials = trials;
  std::vector<Key> xs(l);
  for (std::uint64_t i = 0; i < l; ++i) xs[i] = i + 1;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto outcome = check_nfn(a, 0, xs, Rng::stream(seed, t).seed(), fault);
    if (outcome.status == CheckStatus::kRejected) {
      ++report.rejected;
    } else if (outcome.status == CheckStatus::kFail) {
      if (report.failures++ == 0) report.counterexample = "trial " + std::to_string(t) + ": " + outcome.trace;
    }
  }
  if (report.failures > 0) {
    report.status = CheckStatus::kFail;
  } else if (report.rejected == trials && trials > 0) {
    report.status = CheckStatus::kRejected;
  }
  return report;
}

/// Sensitivity fixture: forgets everything before the final query.
template <AmqPolicy A>
struct ClearStateFault {
  const A& a;
  typename A::State operator()(typename A::State) const { return a.new_state(); }
};

}  // namespace amqlab
