#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "amqlab/exactmath.hpp"

namespace amqlab {

struct BloomParams {
  std::uint64_t m = 1;  // bits
  std::uint64_t k = 1;  // hash functions

  /// Throws InvalidParameter unless m ≥ 1 and k ≥ 1.
  void validate() const;
};

struct QuotientParams {
  unsigned q = 0;  // quotient bits
  unsigned r = 1;  // remainder bits

  unsigned p() const { return q + r; }
  void validate() const;
};

struct BlockedParams {
  std::uint64_t blocks = 1;
  void validate() const;
};

/// Exact-mode limits for bloom_false_positive.
inline constexpr std::uint64_t kExactMaxBits = 512;
inline constexpr std::uint64_t kExactMaxDraws = 4096;
/// Size limit (in bits of m^{kl}) for bloom_false_positive_float.
inline constexpr std::uint64_t kFloatMaxPowerBits = std::uint64_t{1} << 26;

/// Probability that a given bit is set after l unseen inserts: 1 − (1 − 1/m)^{kl}.
ExactRational bloom_bit_set_prob(const BloomParams& params, std::uint64_t l);

/// Exact false-positive probability after l distinct unseen inserts:
///
///   (1 / m^{k(l+1)}) · Σ_{i=1..m} i^k · i! · C(m,i) · S(kl, i)
///
/// Throws InfeasibleExact when m > kExactMaxBits or k·l > kExactMaxDraws; use
/// bloom_false_positive_float there.
ExactRational bloom_false_positive(const BloomParams& params, std::uint64_t l);

/// Same probability through factorial moments of the raised-bit count, which
/// needs k+1 big powers instead of a Stirling row of length kl. The result is
/// the exact value rounded once. Throws InfeasibleExact when k·l·log2(m)
/// exceeds kFloatMaxPowerBits.
double bloom_false_positive_float(const BloomParams& params, std::uint64_t l);

bool bloom_exact_feasible(const BloomParams& params, std::uint64_t l);

/// Bloom's original approximation (1 − (1 − 1/m)^{kl})^k. Historically
/// incorrect: it assumes the k probed bits are independent. Reported only for
/// comparison with bloom_false_positive.
ExactRational bloom_classic_bound(const BloomParams& params, std::uint64_t l);

/// 1 − (1 − 1/2^p)^l for a quotient filter over a p-bit hash.
ExactRational quotient_false_positive(const QuotientParams& params, std::uint64_t l);

using InnerFp = std::function<ExactRational(std::uint64_t)>;

/// Σ_{i=0..l} C(l,i) (1/m)^i (1 − 1/m)^{l−i} f(i) for m = blocks.
ExactRational blocked_false_positive(std::uint64_t blocks, std::uint64_t l,
                                     const InnerFp& inner_fp);

}  // namespace amqlab
