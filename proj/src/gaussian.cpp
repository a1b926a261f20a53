#include "hurwitz/gaussian.hpp"

#include <cctype>
#include <utility>

namespace hurwitz {

GaussInt& GaussInt::operator+=(const GaussInt& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussInt& GaussInt::operator-=(const GaussInt& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussInt& GaussInt::operator*=(const GaussInt& o) {
  BigInt r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

std::string GaussInt::to_string() const {
  if (sgn(im) == 0) return re.get_str();
  std::string s;
  if (sgn(re) != 0) s = re.get_str();
  BigInt a = abs(im);
  if (sgn(im) < 0) {
    s += "-";
  } else if (!s.empty()) {
    s += "+";
  }
  if (a != 1) s += a.get_str();
  s += "i";
  return s;
}

BigInt abs_sq(const GaussInt& g) { return g.re * g.re + g.im * g.im; }

BigInt sup_norm(const GaussInt& g) {
  BigInt a = abs(g.re);
  BigInt b = abs(g.im);
  return a > b ? a : b;
}

GaussInt mul_i_pow(const GaussInt& g, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return g;
    case 1: return {BigInt(-g.im), g.re};
    case 2: return -g;
    default: return {g.im, BigInt(-g.re)};
  }
}

GaussInt unit_normalize(const GaussInt& g) {
  if (g.is_zero()) return g;
  for (int k = 0; k < 4; ++k) {
    GaussInt u = mul_i_pow(g, k);
    if (sgn(u.re) > 0 && sgn(u.im) >= 0) return u;
  }
  throw InvariantViolation("unit_normalize: no associate in the first quadrant");
}

BigInt round_half_up(const BigRational& r) {
  // floor((2p + q) / (2q)) with q > 0.
  BigInt num = 2 * r.get_num() + r.get_den();
  BigInt den = 2 * r.get_den();
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

namespace {

BigInt round_half_up(const BigInt& num, const BigInt& den) {
  BigInt n2 = 2 * num + den;
  BigInt d2 = 2 * den;
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
  return out;
}

// Nearest Gaussian integer to a / b (Hurwitz rounding), b != 0.
GaussInt round_quotient(const GaussInt& a, const GaussInt& b) {
  GaussInt w = a * b.conj();
  BigInt n = abs_sq(b);
  return {round_half_up(w.re, n), round_half_up(w.im, n)};
}

}  // namespace

GaussInt gauss_gcd(GaussInt a, GaussInt b) {
  while (!b.is_zero()) {
    GaussInt q = round_quotient(a, b);
    GaussInt r = a - q * b;
    a = std::move(b);
    b = std::move(r);
  }
  return unit_normalize(a);
}

GaussRational::GaussRational(GaussInt num, BigInt den, bool do_reduce)
    : num_(std::move(num)), den_(std::move(den)) {
  if (do_reduce) reduce();
}

void GaussRational::reduce() {
  if (sgn(den_) == 0) throw DivisionByZero();
  if (sgn(den_) < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num_.re.get_mpz_t(), num_.im.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    mpz_divexact(num_.re.get_mpz_t(), num_.re.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(num_.im.get_mpz_t(), num_.im.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

GaussRational GaussRational::from_fraction(const GaussInt& num, const GaussInt& den) {
  if (den.is_zero()) throw DivisionByZero();
  return GaussRational(num * den.conj(), hurwitz::abs_sq(den), true);
}

GaussRational GaussRational::from_parts(const BigInt& re, const BigInt& im, const BigInt& den) {
  return GaussRational(GaussInt(re, im), den, true);
}

GaussRational GaussRational::from_parts(const BigRational& re, const BigRational& im) {
  BigInt d = re.get_den() * im.get_den();
  return GaussRational(GaussInt(re.get_num() * im.get_den(), im.get_num() * re.get_den()), d, true);
}

BigRational GaussRational::real() const {
  BigRational r(num_.re, den_);
  r.canonicalize();
  return r;
}

BigRational GaussRational::imag() const {
  BigRational r(num_.im, den_);
  r.canonicalize();
  return r;
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw DivisionByZero();
  // den / num = den * conj(num) / |num|^2
  return GaussRational(num_.conj() * GaussInt(den_, 0), hurwitz::abs_sq(num_), true);
}

BigRational GaussRational::abs_sq() const {
  BigRational r(hurwitz::abs_sq(num_), den_ * den_);
  r.canonicalize();
  return r;
}

GaussRational operator+(const GaussRational& a, const GaussRational& b) {
  if (a.den_ == b.den_) return GaussRational(a.num_ + b.num_, a.den_, true);
  return GaussRational(a.num_ * GaussInt(b.den_, 0) + b.num_ * GaussInt(a.den_, 0), a.den_ * b.den_,
                       true);
}

GaussRational operator-(const GaussRational& a, const GaussRational& b) { return a + (-b); }

GaussRational operator-(const GaussRational& a) { return GaussRational(-a.num_, a.den_, false); }

GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  return GaussRational(a.num_ * b.num_, a.den_ * b.den_, true);
}

GaussRational operator/(const GaussRational& a, const GaussRational& b) { return a * b.inverse(); }

std::string GaussRational::to_string() const {
  if (den_ == 1) return num_.to_string();
  auto part = [this](const BigInt& v) {
    BigRational r(v, den_);
    r.canonicalize();
    return r.get_str();
  };
  if (sgn(num_.im) == 0) return part(num_.re);
  std::string s;
  if (sgn(num_.re) != 0) s = part(num_.re);
  std::string ims = part(abs(num_.im));
  if (sgn(num_.im) < 0) {
    s += "-";
  } else if (!s.empty()) {
    s += "+";
  }
  if (ims != "1") s += ims;
  return s + "i";
}

GaussInt round_nearest(const GaussRational& z) {
  return {round_half_up(z.num().re, z.den()), round_half_up(z.num().im, z.den())};
}

bool in_fundamental_domain(const GaussRational& z) { return round_nearest(z).is_zero(); }

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  GaussRational parse() {
    if (text_.empty()) fail("empty literal");
    BigRational re = 0;
    BigRational im = 0;
    bool seen_re = false;
    bool seen_im = false;
    while (pos_ < text_.size()) {
      const std::size_t term_start = pos_;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (term_start != 0) {
        fail("expected '+' or '-'");
      }
      BigRational value = 1;
      bool have_number = false;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        value = number();
        have_number = true;
      }
      bool imaginary = false;
      if (pos_ < text_.size() && peek() == 'i') {
        imaginary = true;
        ++pos_;
        // Allow "i/2" as shorthand for (1/2)i.
        if (!have_number && pos_ < text_.size() && peek() == '/') {
          ++pos_;
          BigInt d = integer();
          if (sgn(d) == 0) fail("zero denominator");
          value = BigRational(1, d);
          value.canonicalize();
        }
      }
      if (!have_number && !imaginary) fail("expected a number or 'i'");
      value *= sign;
      if (imaginary) {
        if (seen_im) fail("imaginary part given twice", term_start);
        im = value;
        seen_im = true;
      } else {
        if (seen_re || seen_im) fail("real part must come first", term_start);
        re = value;
        seen_re = true;
      }
    }
    return GaussRational::from_parts(re, im);
  }

 private:
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw InvalidArgument("malformed complex literal '" + std::string(text_) + "' at position " +
                          std::to_string(at) + ": " + what);
  }

  BigInt integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  BigRational number() {
    BigInt n = integer();
    if (pos_ < text_.size() && peek() == '/') {
      ++pos_;
      const std::size_t at = pos_;
      BigInt d = integer();
      if (sgn(d) == 0) fail("zero denominator", at);
      BigRational r(n, d);
      r.canonicalize();
      return r;
    }
    return BigRational(n);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GaussRational parse_complex(std::string_view text) { return LiteralParser(text).parse(); }

GaussInt parse_gauss_int(std::string_view text) {
  GaussRational q = parse_complex(text);
  if (!q.is_gaussian_integer()) {
    throw InvalidArgument("'" + std::string(text) + "' is not a Gaussian integer");
  }
  return q.num();
}

}  // namespace hurwitz
