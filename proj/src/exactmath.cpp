#include "amqlab/exactmath.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace amqlab {

namespace {

void check_small(std::uint64_t v, const char* what) {
  if (v > kMaxSmallArg) {
    throw std::invalid_argument(std::string(what) + " exceeds supported bound " +
                                std::to_string(kMaxSmallArg));
  }
}

mpz_class to_mpz(std::uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

}  // namespace

BigNat::BigNat(std::uint64_t v) : value_(to_mpz(v)) {}

BigNat::BigNat(const mpz_class& v) : value_(v) {
  if (value_ < 0) throw std::domain_error("BigNat cannot hold a negative value");
}

BigNat BigNat::from_string(const std::string& digits) {
  mpz_class v;
  if (digits.empty() || v.set_str(digits, 10) != 0) {
    throw std::invalid_argument("not a decimal natural: " + digits);
  }
  return BigNat(v);
}

std::size_t BigNat::bit_length() const {
  return value_ == 0 ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2);
}

BigNat& BigNat::operator+=(const BigNat& rhs) {
  value_ += rhs.value_;
  return *this;
}

BigNat& BigNat::operator*=(const BigNat& rhs) {
  value_ *= rhs.value_;
  return *this;
}

BigNat& BigNat::operator-=(const BigNat& rhs) {
  if (rhs.value_ > value_) throw std::domain_error("BigNat subtraction would go negative");
  value_ -= rhs.value_;
  return *this;
}

BigNat exact_div(const BigNat& a, const BigNat& b) {
  if (b.value_ == 0) throw std::domain_error("division by zero");
  if (!mpz_divisible_p(a.value_.get_mpz_t(), b.value_.get_mpz_t())) {
    throw std::domain_error("inexact natural division");
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.value_.get_mpz_t(), b.value_.get_mpz_t());
  return BigNat(q);
}

ExactRational::ExactRational(std::int64_t v) : value_(static_cast<long>(v)) {}

ExactRational::ExactRational(const BigNat& num, const BigNat& den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  value_ = mpq_class(num.raw(), den.raw());
  value_.canonicalize();
}

ExactRational::ExactRational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  value_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
  value_.canonicalize();
}

ExactRational::ExactRational(const mpq_class& v) : value_(v) { value_.canonicalize(); }

ExactRational ExactRational::parse(const std::string& text) {
  mpq_class v;
  if (text.empty() || v.set_str(text, 10) != 0 || v.get_den() == 0) {
    throw std::invalid_argument("not a rational: " + text);
  }
  return ExactRational(v);
}

std::string ExactRational::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

ExactRational& ExactRational::operator+=(const ExactRational& rhs) {
  value_ += rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator-=(const ExactRational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator*=(const ExactRational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator/=(const ExactRational& rhs) {
  if (rhs.value_ == 0) throw std::domain_error("division by zero");
  value_ /= rhs.value_;
  return *this;
}

BigNat factorial(std::uint64_t n) {
  check_small(n, "factorial argument");
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return BigNat(out);
}

BigNat binomial(std::uint64_t n, std::uint64_t k) {
  check_small(n, "binomial argument");
  if (k > n) return BigNat(0);
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return BigNat(out);
}

BigNat pow_nat(std::uint64_t base, std::uint64_t e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), to_mpz(base).get_mpz_t(), static_cast<unsigned long>(e));
  return BigNat(out);
}

BigNat falling_factorial(std::uint64_t m, std::uint64_t t) {
  if (t > m) return BigNat(0);
  mpz_class out = 1;
  for (std::uint64_t i = 0; i < t; ++i) out *= to_mpz(m - i);
  return BigNat(out);
}

std::vector<BigNat> stirling2_row(std::uint64_t n, std::uint64_t t_max) {
  check_small(n, "stirling2 n");
  check_small(t_max, "stirling2 t");

  std::vector<mpz_class> powers(t_max + 1);
  for (std::uint64_t j = 0; j <= t_max; ++j) {
    mpz_pow_ui(powers[j].get_mpz_t(), to_mpz(j).get_mpz_t(), static_cast<unsigned long>(n));
  }

  std::vector<BigNat> row;
  row.reserve(t_max + 1);
  mpz_class t_fact = 1;
  for (std::uint64_t t = 0; t <= t_max; ++t) {
    if (t > 0) t_fact *= to_mpz(t);
    if (t > n) {
      row.emplace_back(0);
      continue;
    }
    mpz_class positive = 0;
    mpz_class negative = 0;
    mpz_class choose = 1;  // C(t, j)
    for (std::uint64_t j = 0; j <= t; ++j) {
      if (j > 0) {
        choose *= to_mpz(t - j + 1);
        mpz_divexact_ui(choose.get_mpz_t(), choose.get_mpz_t(), static_cast<unsigned long>(j));
      }
      const mpz_class term = choose * powers[t - j];
      (j % 2 == 0 ? positive : negative) += term;
    }
    if (positive < negative) throw std::logic_error("inclusion-exclusion sum went negative");
    const BigNat surjections(mpz_class(positive - negative));
    row.push_back(exact_div(surjections, BigNat(t_fact)));
  }
  return row;
}

BigNat stirling2(std::uint64_t n, std::uint64_t t) {
  check_small(t, "stirling2 t");
  if (t > n) return BigNat(0);
  return stirling2_row(n, t).back();
}

BigNat stirling2_recurrence(std::uint64_t n, std::uint64_t t) {
  check_small(n, "stirling2 n");
  if (t > n) return BigNat(0);
  // prev[j] = S(i-1, j) for j <= t.
  std::vector<mpz_class> row(t + 1, 0);
  row[0] = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    for (std::uint64_t j = std::min(i, t); j >= 1; --j) {
      row[j] = to_mpz(j) * row[j] + row[j - 1];
    }
    row[0] = 0;
  }
  return BigNat(row[t]);
}

ExactRational pow_rat(const ExactRational& base, std::uint64_t e) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(e));
  return ExactRational(mpq_class(num, den));
}

double to_float(const ExactRational& x) {
  const mpq_class& q = x.raw();
  const int sign = sgn(q);
  if (sign == 0) return 0.0;

  mpz_class num = abs(q.get_num());
  const mpz_class& den = q.get_den();
  const long num_bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long den_bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));

  // Scale so the integer quotient carries at least 55 significant bits.
  const long scale = 56 - (num_bits - den_bits);
  mpz_class scaled_num = num;
  mpz_class scaled_den = den;
  if (scale >= 0) {
    mpz_mul_2exp(scaled_num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(scale));
  } else {
    mpz_mul_2exp(scaled_den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(-scale));
  }
  mpz_class quot;
  mpz_class rem;
  mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  bool sticky = rem != 0;

  // value = quot · 2^-scale; keep 53 bits, never below the subnormal unit 2^-1074.
  const long quot_bits = static_cast<long>(mpz_sizeinbase(quot.get_mpz_t(), 2));
  long shift = std::max(quot_bits - 53, scale - 1074);
  if (shift > 0) {
    const bool round_bit = mpz_tstbit(quot.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - 1)) != 0;
    if (!sticky) {
      sticky = mpz_scan1(quot.get_mpz_t(), 0) < static_cast<mp_bitcnt_t>(shift - 1);
    }
    mpz_fdiv_q_2exp(quot.get_mpz_t(), quot.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    const bool odd = mpz_odd_p(quot.get_mpz_t()) != 0;
    if (round_bit && (sticky || odd)) quot += 1;
  } else {
    shift = 0;
  }
  const double mantissa = quot.get_d();  // at most 2^53, exact
  return sign * std::ldexp(mantissa, static_cast<int>(shift - scale));
}

}  // namespace amqlab
