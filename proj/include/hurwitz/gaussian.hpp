#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "hurwitz/errors.hpp"

namespace hurwitz {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Gaussian integer re + im*i with arbitrary-size parts.
struct GaussInt {
  BigInt re;
  BigInt im;

  GaussInt() = default;
  GaussInt(long r, long i = 0) : re(r), im(i) {}  // NOLINT: implicit from integers is intended
  GaussInt(BigInt r, BigInt i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussInt conj() const { return {re, BigInt(-im)}; }

  GaussInt& operator+=(const GaussInt& o);
  GaussInt& operator-=(const GaussInt& o);
  GaussInt& operator*=(const GaussInt& o);

  friend GaussInt operator+(GaussInt a, const GaussInt& b) { return a += b; }
  friend GaussInt operator-(GaussInt a, const GaussInt& b) { return a -= b; }
  friend GaussInt operator*(GaussInt a, const GaussInt& b) { return a *= b; }
  friend GaussInt operator-(const GaussInt& a) { return {BigInt(-a.re), BigInt(-a.im)}; }
  friend bool operator==(const GaussInt& a, const GaussInt& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussInt& a, const GaussInt& b) { return !(a == b); }

  /// Formats as "3-4i", "2i", "-1", "0".
  std::string to_string() const;
};

/// re^2 + im^2, exact.
BigInt abs_sq(const GaussInt& g);
/// max(|re|, |im|).
BigInt sup_norm(const GaussInt& g);
/// i^k * g for any integer k.
GaussInt mul_i_pow(const GaussInt& g, int k);

/// Greatest common divisor in Z[i] (nearest-integer Euclid), normalized to the
/// associate with re > 0 and im >= 0. gauss_gcd(0, 0) = 0.
GaussInt gauss_gcd(GaussInt a, GaussInt b);
/// The associate of g with re > 0, im >= 0 (0 stays 0).
GaussInt unit_normalize(const GaussInt& g);

/// Exact element of Q(i) stored as num / den with den a positive rational
/// integer and gcd(num.re, num.im, den) = 1. Construction always canonicalizes,
/// so equal values have identical representations.
class GaussRational {
 public:
  GaussRational() : num_(0), den_(1) {}
  GaussRational(const GaussInt& g) : num_(g), den_(1) {}  // NOLINT
  GaussRational(long r) : num_(r), den_(1) {}             // NOLINT

  /// num / den for a Gaussian denominator; throws DivisionByZero on den = 0.
  static GaussRational from_fraction(const GaussInt& num, const GaussInt& den);
  /// (re + im*i) / den with den a nonzero rational integer.
  static GaussRational from_parts(const BigInt& re, const BigInt& im, const BigInt& den);
  static GaussRational from_parts(const BigRational& re, const BigRational& im);

  const GaussInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  BigRational real() const;
  BigRational imag() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_gaussian_integer() const { return den_ == 1; }

  GaussRational inverse() const;  // throws DivisionByZero on 0
  /// |q|^2 as an exact rational.
  BigRational abs_sq() const;

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator-(const GaussRational& a);
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  std::string to_string() const;

 private:
  GaussRational(GaussInt num, BigInt den, bool reduce);
  void reduce();

  GaussInt num_;
  BigInt den_;
};

/// rat_canonical(num, den): the canonical Gaussian rational num/den.
inline GaussRational rat_canonical(const GaussInt& num, const GaussInt& den) {
  return GaussRational::from_fraction(num, den);
}
inline GaussRational rat_inverse(const GaussRational& q) { return q.inverse(); }
inline GaussRational rat_sub_gauss(const GaussRational& q, const GaussInt& g) {
  return q - GaussRational(g);
}

/// Hurwitz rounding [z] = floor(Re z + 1/2) + i floor(Im z + 1/2).
GaussInt round_nearest(const GaussRational& z);
/// floor(r + 1/2) for an exact rational.
BigInt round_half_up(const BigRational& r);
/// True iff round_nearest(z) == 0, i.e. z lies in F = [-1/2, 1/2)^2.
bool in_fundamental_domain(const GaussRational& z);

/// Parses the literal grammar RE[+|-]IMi where each part is an integer or p/q,
/// e.g. "2/5", "1/2-3/4i", "i", "-i/2". Throws InvalidArgument with the
/// offending position on malformed input.
GaussRational parse_complex(std::string_view text);
/// Parses a Gaussian integer literal ("3", "-1+2i", "2i").
GaussInt parse_gauss_int(std::string_view text);

}  // namespace hurwitz
