#pragma once

#include <gmp.h>

#include <cstdint>

#include "hurwitz/gaussian.hpp"

namespace hurwitz {

/// A digit that fits machine words (|re|, |im| < 2^62).
struct SmallDigit {
  std::int64_t re = 0;
  std::int64_t im = 0;

  __int128 abs_sq() const { return static_cast<__int128>(re) * re + static_cast<__int128>(im) * im; }
  __int128 sup_sq() const {
    const __int128 a = re < 0 ? -static_cast<__int128>(re) : re;
    const __int128 b = im < 0 ? -static_cast<__int128>(im) : im;
    return a > b ? a * a : b * b;
  }
  GaussInt to_gauss() const { return GaussInt(re, im); }
};

/// Streams Hurwitz digits of a tail x / y in F without ever forming a
/// canonical rational: one step is digit = [y/x], (x, y) <- (y - digit x, x).
///
/// The rounding [y/x] is taken from a double approximation of the leading
/// bits whenever it is at least 2^-40 (relative) away from every half-integer
/// cell boundary; otherwise it falls back to exact big-integer rounding.
/// With fast_path disabled every step is exact (the reference kernel).
class DigitStream {
 public:
  enum class Step { digit, terminated, overflow };

  explicit DigitStream(bool fast_path = true) : fast_path_(fast_path) {}

  /// Tail (j + k i) / 2^bits.
  void reset_dyadic(const mpz_class& j, const mpz_class& k, unsigned bits);
  /// Tail num / den; requires num/den in F.
  void reset(const GaussInt& num, const GaussInt& den);

  Step next(SmallDigit& out);

  std::uint64_t exact_steps() const { return exact_steps_; }
  std::uint64_t fast_steps() const { return fast_steps_; }

 private:
  bool round_fast(SmallDigit& out) const;
  bool round_exact(SmallDigit& out);

  bool fast_path_;
  mpz_class xr_, xi_, yr_, yi_;
  mpz_class t0_, t1_, t2_;
  std::uint64_t exact_steps_ = 0;
  std::uint64_t fast_steps_ = 0;
};

/// Convergent recurrence p_n = a_n p_{n-1} + p_{n-2} (likewise q) on small
/// digits, seeded for a0 = 0.
class ConvergentStream {
 public:
  explicit ConvergentStream(bool track_p = true) : track_p_(track_p) { reset(); }

  void reset();
  void push(const SmallDigit& a);

  // Current (p_n, q_n) after the last push (p_0 = 0, q_0 = 1 before any push).
  const mpz_class& p_re() const { return pr_; }
  const mpz_class& p_im() const { return pi_; }
  const mpz_class& q_re() const { return qr_; }
  const mpz_class& q_im() const { return qi_; }
  /// log|q_n| with relative error far below 1e-9.
  double log_abs_q() const;

 private:
  bool track_p_;
  mpz_class pr_, pi_, qr_, qi_;      // index n
  mpz_class pr1_, pi1_, qr1_, qi1_;  // index n - 1
};

/// log |re + im i| for big integers, via leading bits and exponent.
double log_abs(const mpz_class& re, const mpz_class& im);

}  // namespace hurwitz
