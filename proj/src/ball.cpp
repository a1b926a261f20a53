#include "hurwitz/ball.hpp"

#include <cmath>
#include <utility>

namespace hurwitz {

Dyadic::Dyadic(BigInt mant, long exp) : mant_(std::move(mant)), exp_(exp) { normalize(); }

void Dyadic::normalize() {
  if (sgn(mant_) == 0) {
    exp_ = 0;
    return;
  }
  const auto tz = static_cast<long>(mpz_scan1(mant_.get_mpz_t(), 0));
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant_.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(tz));
    exp_ += tz;
  }
}

namespace {

BigInt shifted(const BigInt& v, long shift) {
  BigInt out;
  if (shift >= 0) {
    mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpz_fdiv_q_2exp(out.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  return out;
}

// Aligns a and b to the common exponent min(a.exp, b.exp).
std::pair<BigInt, BigInt> aligned(const Dyadic& a, const Dyadic& b, long& e) {
  e = std::min(a.exp(), b.exp());
  return {shifted(a.mant(), a.exp() - e), shifted(b.mant(), b.exp() - e)};
}

}  // namespace

Dyadic Dyadic::floor_of(const BigRational& r, long bits) {
  BigInt num = shifted(r.get_num(), bits > 0 ? bits : 0);
  BigInt den = shifted(r.get_den(), bits < 0 ? -bits : 0);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(q, -bits);
}

Dyadic Dyadic::ceil_of(const BigRational& r, long bits) {
  BigInt num = shifted(r.get_num(), bits > 0 ? bits : 0);
  BigInt den = shifted(r.get_den(), bits < 0 ? -bits : 0);
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(q, -bits);
}

Dyadic Dyadic::div_floor(const Dyadic& a, const Dyadic& b, long bits) {
  if (b.sign() == 0) throw DivisionByZero();
  // a/b = (ma/mb) 2^(ea-eb); want floor(a/b * 2^bits).
  const long shift = a.exp_ - b.exp_ + bits;
  BigInt num = a.mant_;
  BigInt den = b.mant_;
  if (shift >= 0) {
    num = shifted(num, shift);
  } else {
    den = shifted(den, -shift);
  }
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(q, -bits);
}

Dyadic Dyadic::div_ceil(const Dyadic& a, const Dyadic& b, long bits) {
  if (b.sign() == 0) throw DivisionByZero();
  const long shift = a.exp_ - b.exp_ + bits;
  BigInt num = a.mant_;
  BigInt den = b.mant_;
  if (shift >= 0) {
    num = shifted(num, shift);
  } else {
    den = shifted(den, -shift);
  }
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Dyadic(q, -bits);
}

Dyadic Dyadic::sqrt_floor(const Dyadic& v, long bits) {
  if (v.sign() < 0) throw InvalidArgument("sqrt of a negative dyadic");
  // floor(sqrt(v * 2^(2 bits))) / 2^bits; flooring v * 2^(2 bits) first is harmless.
  BigInt scaled = shifted(v.mant_, v.exp_ + 2 * bits);
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  return Dyadic(root, -bits);
}

BigRational Dyadic::to_rational() const {
  BigRational r;
  if (exp_ >= 0) {
    r = BigRational(shifted(mant_, exp_));
  } else {
    BigInt den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
    r = BigRational(mant_, den);
    r.canonicalize();
  }
  return r;
}

double Dyadic::to_double() const {
  long e = 0;
  const double d = mpz_get_d_2exp(&e, mant_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(e + exp_));
}

Dyadic Dyadic::round_up(int bits) const {
  const auto size = static_cast<long>(mpz_sizeinbase(mant_.get_mpz_t(), 2));
  if (sgn(mant_) <= 0 || size <= bits) return *this;
  const long drop = size - bits;
  BigInt q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), mant_.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
  return Dyadic(q, exp_ + drop);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return Dyadic(x + y, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return Dyadic(x - y, e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.mant_ * b.mant_, a.exp_ + b.exp_); }

int cmp(const Dyadic& a, const Dyadic& b) {
  long e = 0;
  auto [x, y] = aligned(a, b, e);
  return cmp(x, y);
}

ComplexBall ComplexBall::around(const GaussRational& z, int precision_bits, const Dyadic& extra_radius) {
  ComplexBall b;
  b.precision_bits = precision_bits;
  b.re = Dyadic::floor_of(z.real(), precision_bits);
  b.im = Dyadic::floor_of(z.imag(), precision_bits);
  // Each coordinate is off by < 2^-p, so the distance is < 2^(1-p).
  Dyadic rounding = (b.re.to_rational() == z.real() && b.im.to_rational() == z.imag())
                        ? Dyadic()
                        : Dyadic(BigInt(1), 1 - precision_bits);
  b.rad = rounding + extra_radius;
  return b;
}

bool ComplexBall::contains(const GaussRational& z) const {
  const BigRational dx = z.real() - re.to_rational();
  const BigRational dy = z.imag() - im.to_rational();
  const BigRational r = rad.to_rational();
  return dx * dx + dy * dy <= r * r;
}

bool ComplexBall::contains_zero() const { return cmp(re * re + im * im, rad * rad) <= 0; }

std::optional<ComplexBall> ComplexBall::inverse() const {
  if (contains_zero()) return std::nullopt;
  const long p = precision_bits;
  const Dyadic norm = re * re + im * im;
  const Dyadic mod_lo = Dyadic::sqrt_floor(norm, p);
  if (cmp(mod_lo, rad) <= 0) return std::nullopt;

  ComplexBall out;
  out.precision_bits = precision_bits;
  out.re = Dyadic::div_floor(re, norm, p);
  out.im = Dyadic::div_floor(-im, norm, p);
  // |1/w - 1/c| <= r / (|c| (|c| - r)), plus < 2^(1-p) from rounding the center.
  Dyadic propagated = rad.sign() == 0 ? Dyadic() : Dyadic::div_ceil(rad, mod_lo * (mod_lo - rad), p);
  const bool exact_center = (out.re * norm == re) && (out.im * norm == -im);
  Dyadic rounding = exact_center ? Dyadic() : Dyadic(BigInt(1), 1 - p);
  out.rad = (propagated + rounding).round_up(64);
  return out;
}

ComplexBall ComplexBall::minus(const GaussInt& g) const {
  ComplexBall out = *this;
  out.re = re - Dyadic(g.re, 0);
  out.im = im - Dyadic(g.im, 0);
  return out;
}

}  // namespace hurwitz
