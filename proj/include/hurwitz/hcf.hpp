#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hurwitz/ball.hpp"
#include "hurwitz/exact.hpp"
#include "hurwitz/gaussian.hpp"

namespace hurwitz {

inline constexpr std::size_t kDefaultMaxDepth = 64;

/// Hurwitz continued fraction [a0; a1, a2, ...].
struct DigitString {
  GaussInt a0;
  std::vector<GaussInt> digits;  // a_1, a_2, ...
  bool terminated = false;       // the expansion reached remainder 0

  friend bool operator==(const DigitString& a, const DigitString& b) {
    return a.terminated == b.terminated && a.a0 == b.a0 && a.digits == b.digits;
  }
};

struct Convergent {
  GaussInt p;
  GaussInt q;
};

/// pairs[n] = (p_n, q_n) for n = 0..N, seeded by p_{-1}=1, p_{-2}=0,
/// q_{-1}=0, q_{-2}=1.
struct ConvergentSeq {
  std::vector<Convergent> pairs;

  /// p_n for n >= -2 (likewise q).
  GaussInt p(long n) const;
  GaussInt q(long n) const;
};

/// Exact orbit of a Gaussian rational under the Gauss map.
/// tails[k] = T^k(z - a0); tails.size() == digits + 1.
struct Trajectory {
  GaussRational start;
  std::vector<GaussRational> tails;
  DigitString digit_string;
};

struct MapStep {
  GaussInt digit;
  GaussRational next;
};

/// One application of T: digit = [1/z], next = 1/z - digit. Returns nullopt
/// for z = 0 (T(0) = 0 ends the expansion). Throws NotInFundamentalDomain.
std::optional<MapStep> gauss_map_step(const GaussRational& z);

Trajectory hcf_expand_exact(const GaussRational& z, std::size_t max_depth = kDefaultMaxDepth);

/// Outcome of a certified expansion of a ball.
struct BallExpansion {
  enum class Status { ok, digit_uncertain, zero_straddle };
  Status status = Status::ok;
  DigitString digits;    // the certified prefix (complete when status == ok)
  std::size_t step = 0;  // step at which certification failed (0 = a0)
};

/// Emits a digit only when the whole ball lies inside that digit's rounding
/// cell, so the output is the true expansion of every point of the ball.
BallExpansion hcf_expand_ball(const ComplexBall& z, std::size_t n_digits);

/// Throws InadmissibleDigit if some a_n (n >= 1) has |a_n|^2 < 2.
ConvergentSeq convergents(const DigitString& d);

/// Exact value of the finite continued fraction. Throws EvaluationSingularity.
GaussRational eval_finite(const DigitString& d);

/// Certified scaled error e_n = |z - p_n/q_n| |a_{n+1}| |q_n|^2.
struct ApproxQuality {
  BigRational squared;  // e_n^2, exact
  Interval value;       // enclosure of e_n
  bool within_bound;    // e_n <= 4 + 2 sqrt(2), decided exactly
};

/// Throws IndexOutOfRange when a_{n+1} is not available.
ApproxQuality approx_quality(const Trajectory& t, std::size_t n);
/// Same, reusing precomputed convergents of t.
ApproxQuality approx_quality(const Trajectory& t, const ConvergentSeq& c, std::size_t n);

/// |1/t_n + q_{n-1}/q_n| >= kappa1 |a_{n+1}| with kappa1 = (2 - sqrt 2)/4,
/// decided exactly; t_n = T^n(z - a0) must be nonzero.
bool kappa1_lower_bound_holds(const Trajectory& t, const ConvergentSeq& c, std::size_t n);

}  // namespace hurwitz
