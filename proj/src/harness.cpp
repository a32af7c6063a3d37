#include "amqlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amqlab {

std::uint64_t OutcomeEnumeration::total() const {
  std::uint64_t product = 1;
  for (auto d : domain_sizes) {
    if (product > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
    product *= d;
  }
  return product;
}

std::uint64_t ScriptedDraws::uniform(std::uint64_t bound) {
  if (bound == 0) throw InvalidParameter("uniform: bound must be positive");
  if (bound == 1) return 0;
  if (pos_ < values_.size()) {
    if (domains_[pos_] != bound) {
      // The draw structure changed below this point; the stale suffix goes.
      values_.resize(pos_);
      domains_.resize(pos_);
    } else {
      return values_[pos_++];
    }
  }
  values_.push_back(0);
  domains_.push_back(bound);
  ++pos_;
  return 0;
}

bool ScriptedDraws::advance() {
  values_.resize(pos_);
  domains_.resize(pos_);
  while (!values_.empty()) {
    if (values_.back() + 1 < domains_.back()) {
      ++values_.back();
      return true;
    }
    values_.pop_back();
    domains_.pop_back();
  }
  return false;
}

ExactRational oracle_bit_set(const BloomFilter& bf, std::uint64_t l, std::uint64_t i, std::uint64_t limit) {
  return oracle_probability(
      [&](DrawSource& src) {
        std::vector<Key> keys(l);
        for (std::uint64_t j = 0; j < l; ++j) keys[j] = j;
        return bf_get_int(amq_addm(bf, keys, amq_new(bf), src).state, i);
      },
      limit);
}

AnalyticValue analytic_false_positive(const BloomFilter& a, std::uint64_t l) {
  const BloomParams params{a.m, a.k};
  if (bloom_exact_feasible(params, l)) {
    auto exact = bloom_false_positive(params, l);
    const double value = to_float(exact);
    return {std::move(exact), value};
  }
  return {std::nullopt, bloom_false_positive_float(params, l)};
}

AnalyticValue analytic_false_positive(const CountingBloomFilter& a, std::uint64_t l) {
  return analytic_false_positive(BloomFilter(a.m, a.k), l);
}

AnalyticValue analytic_false_positive(const QuotientFilter& a, std::uint64_t l) {
  auto exact = quotient_false_positive(QuotientParams{a.q, a.r}, l);
  const double value = to_float(exact);
  return {std::move(exact), value};
}

AnalyticValue blocked_mixture(std::uint64_t blocks, std::uint64_t l,
                              const std::function<AnalyticValue(std::uint64_t)>& inner) {
  std::vector<std::optional<AnalyticValue>> cache(l + 1);
  auto inner_at = [&](std::uint64_t i) -> const AnalyticValue& {
    if (!cache[i]) cache[i] = inner(i);
    return *cache[i];
  };
  bool all_exact = true;
  auto exact = blocked_false_positive(blocks, l, [&](std::uint64_t i) {
    const auto& v = inner_at(i);
    if (!v.exact) {
      all_exact = false;
      return ExactRational(0);
    }
    return *v.exact;
  });
  if (all_exact) {
    const double value = to_float(exact);
    return {std::move(exact), value};
  }
  // Float mixture with exact weights rounded once each.
  const ExactRational hit(1, static_cast<std::int64_t>(blocks));
  const ExactRational miss = ExactRational(1) - hit;
  double sum = 0.0;
  for (std::uint64_t i = 0; i <= l; ++i) {
    const auto weight = ExactRational(binomial(l, i), BigNat(1)) * pow_rat(hit, i) * pow_rat(miss, l - i);
    if (weight == ExactRational(0)) continue;
    sum += to_float(weight) * inner_at(i).value;
  }
  return {std::nullopt, sum};
}

std::string structure_name(const BloomFilter&) { return "bloom"; }
std::string structure_name(const CountingBloomFilter&) { return "counting"; }
std::string structure_name(const QuotientFilter&) { return "quotient"; }

ParamList structure_params(const BloomFilter& a) { return {{"m", a.m}, {"k", a.k}}; }
ParamList structure_params(const CountingBloomFilter& a) { return {{"m", a.m}, {"k", a.k}, {"bound", a.bound}}; }
ParamList structure_params(const QuotientFilter& a) { return {{"q", a.q}, {"r", a.r}, {"p", a.q + a.r}}; }

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials < 1) throw InvalidParameter("wilson_interval: trials must be at least 1");
  if (successes > trials) throw InvalidParameter("wilson_interval: successes exceed trials");
  if (!(z > 0)) throw InvalidParameter("wilson_interval: z must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) out.low = 0.0;
  if (successes == trials) out.high = 1.0;
  return out;
}

TrialCounts run_trials(std::uint64_t trials, const std::function<std::optional<bool>(std::uint64_t)>& trial) {
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::max<std::uint64_t>(1, trials / 1024));
  std::vector<TrialCounts> partial(workers);
  auto work = [&](std::uint64_t w) {
    for (std::uint64_t t = w; t < trials; t += workers) {
      const auto outcome = trial(t);
      if (!outcome) {
        ++partial[w].aborted;
      } else if (*outcome) {
        ++partial[w].successes;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  TrialCounts total;
  for (const auto& p : partial) {
    total.successes += p.successes;
    total.aborted += p.aborted;
  }
  return total;
}

SimulationReport make_report(std::string structure, ParamList params, std::uint64_t l, std::uint64_t trials,
                             std::uint64_t seed, double z, TrialCounts counts, AnalyticValue analytic) {
  SimulationReport r;
  r.structure = std::move(structure);
  r.params = std::move(params);
  r.l = l;
  r.trials = trials;
  r.seed = seed;
  r.z = z;
  r.successes = counts.successes;
  r.aborted_trials = counts.aborted;
  r.analytic = std::move(analytic);
  const std::uint64_t effective = trials - counts.aborted;
  if (effective > 0) {
    r.estimate = static_cast<double>(counts.successes) / static_cast<double>(effective);
    const auto ci = wilson_interval(counts.successes, effective, z);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
  }
  return r;
}

}  // namespace amqlab
