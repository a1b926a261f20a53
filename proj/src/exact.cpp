#include "hurwitz/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hurwitz {

namespace {

int sign_plus_sqrt(const BigRational& a, const BigRational& b, int radicand) {
  const int sa = sgn(a);
  const int sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with radicand * b^2.
  const int c = cmp(a * a, radicand * b * b);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

}  // namespace

int sign_plus_sqrt2(const BigRational& a, const BigRational& b) { return sign_plus_sqrt(a, b, 2); }
int sign_plus_sqrt3(const BigRational& a, const BigRational& b) { return sign_plus_sqrt(a, b, 3); }

Interval Interval::exact(const BigRational& r) {
  // mpq_get_d truncates; one ulp each way encloses the exact value.
  const double d = r.get_d();
  return {down(d), up(d)};
}

Interval Interval::sqrt2() {
  const double s = std::sqrt(2.0);
  return {down(s), up(s)};
}

Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }

Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {down(*std::min_element(p, p + 4)), up(*std::max_element(p, p + 4))};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) throw DivisionByZero();
  const double q[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return {down(*std::min_element(q, q + 4)), up(*std::max_element(q, q + 4))};
}

Interval sqrt(const Interval& a) {
  const double lo = a.lo <= 0.0 ? 0.0 : down(std::sqrt(a.lo));
  return {std::max(0.0, lo), up(std::sqrt(std::max(0.0, a.hi)))};
}

Interval pow_int(const Interval& a, int k) {
  Interval r = Interval::point(1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace hurwitz
