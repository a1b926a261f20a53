#include "hurwitz/digit_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hurwitz {

namespace {

constexpr std::int64_t kDigitLimit = std::int64_t{1} << 62;

inline void addmul_si(mpz_t r, const mpz_t a, std::int64_t b) {
  if (b >= 0) {
    mpz_addmul_ui(r, a, static_cast<unsigned long>(b));
  } else {
    mpz_submul_ui(r, a, static_cast<unsigned long>(-b));
  }
}

inline long bit_size(const mpz_class& v) { return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

inline double scaled(const mpz_class& v, long shift) {
  long e = 0;
  const double d = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::ldexp(d, static_cast<int>(e - shift));
}

// floor((2 num + den) / (2 den)), den > 0; false if it leaves the int64 window.
bool round_ratio(const mpz_class& num, const mpz_class& den, mpz_class& scratch, std::int64_t& out) {
  mpz_mul_2exp(scratch.get_mpz_t(), num.get_mpz_t(), 1);
  mpz_add(scratch.get_mpz_t(), scratch.get_mpz_t(), den.get_mpz_t());
  mpz_class den2;
  mpz_mul_2exp(den2.get_mpz_t(), den.get_mpz_t(), 1);
  mpz_fdiv_q(scratch.get_mpz_t(), scratch.get_mpz_t(), den2.get_mpz_t());
  if (!mpz_fits_slong_p(scratch.get_mpz_t())) return false;
  out = mpz_get_si(scratch.get_mpz_t());
  return out > -kDigitLimit && out < kDigitLimit;
}

}  // namespace

void DigitStream::reset_dyadic(const mpz_class& j, const mpz_class& k, unsigned bits) {
  xr_ = j;
  xi_ = k;
  mpz_set_ui(yr_.get_mpz_t(), 1);
  mpz_mul_2exp(yr_.get_mpz_t(), yr_.get_mpz_t(), bits);
  mpz_set_ui(yi_.get_mpz_t(), 0);
}

void DigitStream::reset(const GaussInt& num, const GaussInt& den) {
  xr_ = num.re;
  xi_ = num.im;
  yr_ = den.re;
  yi_ = den.im;
}

bool DigitStream::round_fast(SmallDigit& out) const {
  const long ex = std::max(bit_size(xr_), bit_size(xi_));
  const long ey = std::max(bit_size(yr_), bit_size(yi_));
  if (ey - ex > 48) return false;
  const double xr = scaled(xr_, ex);
  const double xi = scaled(xi_, ex);
  const double yr = scaled(yr_, ex);
  const double yi = scaled(yi_, ex);
  const double n = xr * xr + xi * xi;
  const double wr = (yr * xr + yi * xi) / n;
  const double wi = (yi * xr - yr * xi) / n;
  // Inputs carry relative error <= 2^-52 and the arithmetic a few ulps more;
  // 2^-40 leaves a wide margin over the resulting bound on |w' - w|.
  const double tol = std::ldexp(std::fabs(wr) + std::fabs(wi) + 1.0, -40);
  const double fr = wr + 0.5;
  const double fi = wi + 0.5;
  const double kr = std::floor(fr);
  const double ki = std::floor(fi);
  if (fr - kr < tol || kr + 1.0 - fr < tol) return false;
  if (fi - ki < tol || ki + 1.0 - fi < tol) return false;
  out.re = static_cast<std::int64_t>(kr);
  out.im = static_cast<std::int64_t>(ki);
  return true;
}

bool DigitStream::round_exact(SmallDigit& out) {
  // w = y conj(x) / |x|^2
  mpz_mul(t0_.get_mpz_t(), yr_.get_mpz_t(), xr_.get_mpz_t());
  mpz_addmul(t0_.get_mpz_t(), yi_.get_mpz_t(), xi_.get_mpz_t());
  mpz_mul(t1_.get_mpz_t(), yi_.get_mpz_t(), xr_.get_mpz_t());
  mpz_submul(t1_.get_mpz_t(), yr_.get_mpz_t(), xi_.get_mpz_t());
  mpz_mul(t2_.get_mpz_t(), xr_.get_mpz_t(), xr_.get_mpz_t());
  mpz_addmul(t2_.get_mpz_t(), xi_.get_mpz_t(), xi_.get_mpz_t());
  mpz_class scratch;
  return round_ratio(t0_, t2_, scratch, out.re) && round_ratio(t1_, t2_, scratch, out.im);
}

DigitStream::Step DigitStream::next(SmallDigit& out) {
  if (mpz_sgn(xr_.get_mpz_t()) == 0 && mpz_sgn(xi_.get_mpz_t()) == 0) return Step::terminated;
  if (fast_path_ && round_fast(out)) {
    ++fast_steps_;
  } else {
    ++exact_steps_;
    if (!round_exact(out)) return Step::overflow;
  }
  // y <- y - digit * x, then swap so (x, y) <- (y - digit x, x).
  addmul_si(yr_.get_mpz_t(), xr_.get_mpz_t(), -out.re);
  addmul_si(yr_.get_mpz_t(), xi_.get_mpz_t(), out.im);
  addmul_si(yi_.get_mpz_t(), xi_.get_mpz_t(), -out.re);
  addmul_si(yi_.get_mpz_t(), xr_.get_mpz_t(), -out.im);
  mpz_swap(xr_.get_mpz_t(), yr_.get_mpz_t());
  mpz_swap(xi_.get_mpz_t(), yi_.get_mpz_t());
  return Step::digit;
}

void ConvergentStream::reset() {
  // (p_0, q_0) = (0, 1) for a0 = 0; (p_{-1}, q_{-1}) = (1, 0).
  pr_ = 0;
  pi_ = 0;
  qr_ = 1;
  qi_ = 0;
  pr1_ = 1;
  pi1_ = 0;
  qr1_ = 0;
  qi1_ = 0;
}

void ConvergentStream::push(const SmallDigit& a) {
  // new = a * cur + prev, computed into prev and then swapped.
  auto step = [&a](mpz_class& cr, mpz_class& ci, mpz_class& pr, mpz_class& pi) {
    addmul_si(pr.get_mpz_t(), cr.get_mpz_t(), a.re);
    addmul_si(pr.get_mpz_t(), ci.get_mpz_t(), -a.im);
    addmul_si(pi.get_mpz_t(), ci.get_mpz_t(), a.re);
    addmul_si(pi.get_mpz_t(), cr.get_mpz_t(), a.im);
    mpz_swap(cr.get_mpz_t(), pr.get_mpz_t());
    mpz_swap(ci.get_mpz_t(), pi.get_mpz_t());
  };
  step(qr_, qi_, qr1_, qi1_);
  if (track_p_) step(pr_, pi_, pr1_, pi1_);
}

double ConvergentStream::log_abs_q() const { return log_abs(qr_, qi_); }

double log_abs(const mpz_class& re, const mpz_class& im) {
  const long e = std::max(bit_size(re), bit_size(im));
  const double a = scaled(re, e);
  const double b = scaled(im, e);
  return 0.5 * std::log(a * a + b * b) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace hurwitz
