#pragma once

#include <optional>

#include "hurwitz/gaussian.hpp"

namespace hurwitz {

/// mant * 2^exp, kept normalized (odd mantissa, or 0 with exp 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt mant, long exp);
  Dyadic(long v) : Dyadic(BigInt(v), 0) {}  // NOLINT

  /// floor(r * 2^bits) / 2^bits.
  static Dyadic floor_of(const BigRational& r, long bits);
  /// ceil(r * 2^bits) / 2^bits.
  static Dyadic ceil_of(const BigRational& r, long bits);
  /// a / b rounded down (resp. up) to a multiple of 2^-bits. b != 0.
  static Dyadic div_floor(const Dyadic& a, const Dyadic& b, long bits);
  static Dyadic div_ceil(const Dyadic& a, const Dyadic& b, long bits);
  /// Largest multiple of 2^-bits not exceeding sqrt(v), v >= 0.
  static Dyadic sqrt_floor(const Dyadic& v, long bits);

  const BigInt& mant() const { return mant_; }
  long exp() const { return exp_; }
  int sign() const { return sgn(mant_); }
  BigRational to_rational() const;
  double to_double() const;

  /// Rounds a non-negative value up so the mantissa has at most `bits` bits.
  Dyadic round_up(int bits) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(BigInt(-a.mant_), a.exp_); }
  friend int cmp(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.mant_ == b.mant_; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }

 private:
  void normalize();

  BigInt mant_ = 0;
  long exp_ = 0;
};

/// Certified complex value: the exact value lies within `rad` of the dyadic
/// center. Every operation over-approximates the propagated error.
struct ComplexBall {
  Dyadic re;
  Dyadic im;
  Dyadic rad;
  int precision_bits = 128;

  /// Center rounded to precision_bits fractional bits; radius covers the
  /// rounding plus `extra_radius`.
  static ComplexBall around(const GaussRational& z, int precision_bits, const Dyadic& extra_radius = Dyadic());

  bool contains(const GaussRational& z) const;
  bool contains_zero() const;
  /// Ball enclosing {1/w : w in this ball}; nullopt when the precision is too
  /// low to separate the ball from 0 (or it contains 0).
  std::optional<ComplexBall> inverse() const;
  ComplexBall minus(const GaussInt& g) const;
};

}  // namespace hurwitz
