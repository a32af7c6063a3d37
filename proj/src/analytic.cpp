#include "amqlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "amqlab/errors.hpp"

namespace amqlab {

void BloomParams::validate() const {
  if (m < 1) throw InvalidParameter("bloom: m must be at least 1");
  if (k < 1) throw InvalidParameter("bloom: k must be at least 1");
}

void QuotientParams::validate() const {
  if (q + r < 1) throw InvalidParameter("quotient: q + r must be at least 1");
  if (q > 24) throw InvalidParameter("quotient: q must be at most 24");
  if (q + r > 62) throw InvalidParameter("quotient: q + r must be at most 62");
}

void BlockedParams::validate() const {
  if (blocks < 1) throw InvalidParameter("blocked: blocks must be at least 1");
}

ExactRational bloom_bit_set_prob(const BloomParams& params, std::uint64_t l) {
  params.validate();
  const ExactRational miss(static_cast<std::int64_t>(params.m - 1),
                           static_cast<std::int64_t>(params.m));
  return ExactRational(1) - pow_rat(miss, params.k * l);
}

bool bloom_exact_feasible(const BloomParams& params, std::uint64_t l) {
  return params.m <= kExactMaxBits && params.k * l <= kExactMaxDraws;
}

ExactRational bloom_false_positive(const BloomParams& params, std::uint64_t l) {
  params.validate();
  if (!bloom_exact_feasible(params, l)) {
    throw InfeasibleExact("bloom_false_positive: m=" + std::to_string(params.m) +
                          ", k*l=" + std::to_string(params.k * l) +
                          " exceeds exact limits (m <= 512, k*l <= 4096); use float mode");
  }
  const std::uint64_t draws = params.k * l;
  const std::uint64_t top = std::min(params.m, draws);
  const auto stirling = stirling2_row(draws, top);

  BigNat sum(0);
  BigNat i_fact(1);
  for (std::uint64_t i = 1; i <= top; ++i) {
    i_fact *= BigNat(i);
    sum += pow_nat(i, params.k) * i_fact * binomial(params.m, i) * stirling[i];
  }
  return ExactRational(sum, pow_nat(params.m, params.k * (l + 1)));
}

double bloom_false_positive_float(const BloomParams& params, std::uint64_t l) {
  params.validate();
  const std::uint64_t draws = params.k * l;
  if (draws == 0) return 0.0;
  const std::uint64_t m_bits = BigNat(params.m).bit_length();
  if (params.k > kMaxSmallArg || draws > kFloatMaxPowerBits / m_bits) {
    throw InfeasibleExact("bloom_false_positive_float: m=" + std::to_string(params.m) +
                          ", k*l=" + std::to_string(draws) + " is beyond the supported size");
  }
  // Factorial moments of the raised-bit count X: with X^k = Σ_j S(k,j)·(X)_j and
  // E[(X)_j] = (m)_j · Σ_s (−1)^s C(j,s) ((m−s)/m)^{kl}, the whole sum shares the
  // denominator m^{kl+k} and needs only the k+1 powers (m−s)^{kl}.
  const std::uint64_t top = std::min(params.m, params.k);
  std::vector<mpz_class> powers(top + 1);
  for (std::uint64_t s = 0; s <= top; ++s) powers[s] = pow_nat(params.m - s, draws).raw();
  const auto stirling = stirling2_row(params.k, top);

  mpz_class total = 0;
  for (std::uint64_t j = 1; j <= top; ++j) {
    mpz_class inner = 0;
    for (std::uint64_t s = 0; s <= j; ++s) {
      const mpz_class term = binomial(j, s).raw() * powers[s];
      if (s % 2 == 0) {
        inner += term;
      } else {
        inner -= term;
      }
    }
    total += stirling[j].raw() * falling_factorial(params.m, j).raw() * inner;
  }
  return to_float(ExactRational(BigNat(total), pow_nat(params.m, draws + params.k)));
}

ExactRational bloom_classic_bound(const BloomParams& params, std::uint64_t l) {
  return pow_rat(bloom_bit_set_prob(params, l), params.k);
}

ExactRational quotient_false_positive(const QuotientParams& params, std::uint64_t l) {
  params.validate();
  const BigNat outcomes = pow_nat(2, params.p());
  const ExactRational miss(outcomes - BigNat(1), outcomes);
  return ExactRational(1) - pow_rat(miss, l);
}

ExactRational blocked_false_positive(std::uint64_t blocks, std::uint64_t l,
                                     const InnerFp& inner_fp) {
  BlockedParams{blocks}.validate();
  const ExactRational hit(1, static_cast<std::int64_t>(blocks));
  const ExactRational miss = ExactRational(1) - hit;
  ExactRational total(0);
  for (std::uint64_t i = 0; i <= l; ++i) {
    const ExactRational weight =
        ExactRational(binomial(l, i), BigNat(1)) * pow_rat(hit, i) * pow_rat(miss, l - i);
    if (weight == ExactRational(0)) continue;
    total += weight * inner_fp(i);
  }
  return total;
}

}  // namespace amqlab
