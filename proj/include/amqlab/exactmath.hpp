#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace amqlab {

/// Largest argument accepted by the combinatorial helpers below.
inline constexpr std::uint64_t kMaxSmallArg = 10000;

/// Arbitrary-precision non-negative integer.
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t v);  // NOLINT(google-explicit-constructor)
  explicit BigNat(const mpz_class& v);

  static BigNat from_string(const std::string& digits);

  const mpz_class& raw() const { return value_; }
  std::string to_string() const { return value_.get_str(); }
  std::size_t bit_length() const;
  bool is_zero() const { return value_ == 0; }

  BigNat& operator+=(const BigNat& rhs);
  BigNat& operator*=(const BigNat& rhs);
  /// Throws std::domain_error if rhs > *this.
  BigNat& operator-=(const BigNat& rhs);

  friend BigNat operator+(BigNat a, const BigNat& b) { return a += b; }
  friend BigNat operator*(BigNat a, const BigNat& b) { return a *= b; }
  friend BigNat operator-(BigNat a, const BigNat& b) { return a -= b; }

  /// Exact division; throws std::domain_error if b does not divide a.
  friend BigNat exact_div(const BigNat& a, const BigNat& b);

  friend bool operator==(const BigNat& a, const BigNat& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpz_class value_{0};
};

/// Exact rational number, always held in lowest terms with a positive
/// denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(std::int64_t v);  // NOLINT(google-explicit-constructor)
  ExactRational(const BigNat& num, const BigNat& den);
  ExactRational(std::int64_t num, std::int64_t den);
  explicit ExactRational(const mpq_class& v);

  /// Parses "num/den" or a plain integer.
  static ExactRational parse(const std::string& text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  /// Always "num/den", including "0/1" and "1/1".
  std::string to_string() const;

  bool is_probability() const { return value_ >= 0 && value_ <= 1; }

  ExactRational& operator+=(const ExactRational& rhs);
  ExactRational& operator-=(const ExactRational& rhs);
  ExactRational& operator*=(const ExactRational& rhs);
  /// Throws std::domain_error on division by zero.
  ExactRational& operator/=(const ExactRational& rhs);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  ExactRational operator-() const { return ExactRational(mpq_class(-value_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

BigNat factorial(std::uint64_t n);
BigNat binomial(std::uint64_t n, std::uint64_t k);
/// base^e over the naturals; 0^0 = 1.
BigNat pow_nat(std::uint64_t base, std::uint64_t e);
/// m·(m−1)···(m−t+1); 1 when t = 0, 0 when t > m.
BigNat falling_factorial(std::uint64_t m, std::uint64_t t);

/// Stirling number of the second kind via the inclusion–exclusion closed form
///   S(n,t) = (1/t!) · Σ_{j=0..t} (−1)^j · C(t,j) · (t−j)^n,
/// with the alternating sum split into positive and negative parts so every
/// intermediate stays a natural number.
BigNat stirling2(std::uint64_t n, std::uint64_t t);

/// S(n, t) for t = 0..t_max via the same closed form, sharing the powers j^n.
std::vector<BigNat> stirling2_row(std::uint64_t n, std::uint64_t t_max);

/// Independent route: the recurrence S(n,t) = t·S(n−1,t) + S(n−1,t−1).
BigNat stirling2_recurrence(std::uint64_t n, std::uint64_t t);

ExactRational pow_rat(const ExactRational& base, std::uint64_t e);

/// Nearest double, ties to even (subnormals included).
double to_float(const ExactRational& x);

}  // namespace amqlab
