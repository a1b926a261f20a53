#pragma once

#include <string>

#include "hurwitz/gaussian.hpp"

namespace hurwitz {

/// Exact sign of a + b*sqrt(2) for rationals a, b.
int sign_plus_sqrt2(const BigRational& a, const BigRational& b);
/// Exact sign of a + b*sqrt(3).
int sign_plus_sqrt3(const BigRational& a, const BigRational& b);

/// Closed interval of doubles with outward rounding after every operation.
/// Used wherever a floating value must bound an exact one.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval exact(const BigRational& r);
  static Interval exact(const BigInt& v) { return exact(BigRational(v)); }
  static Interval sqrt2();

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval sqrt(const Interval& a);
  friend Interval pow_int(const Interval& a, int k);
};

/// A named constant: the exact expression it stands for and a certified
/// enclosure of its value.
struct ExactConstant {
  std::string expression;
  Interval value;
};

}  // namespace hurwitz
