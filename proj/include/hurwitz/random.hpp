#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>

#include "hurwitz/gaussian.hpp"

namespace hurwitz {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Counter-based stream: the words for (index, block) depend on nothing else,
/// so sample i can be drawn without drawing 0..i-1.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  std::array<std::uint32_t, 4> block(std::uint64_t index, std::uint32_t stream, std::uint32_t block) const;
  /// Uniform integer in [0, 2^bits) built from consecutive blocks.
  void uniform_bits(mpz_class& out, std::uint64_t index, std::uint32_t stream, unsigned bits) const;

 private:
  std::array<std::uint32_t, 2> key_;
};

struct SampleSpec {
  std::uint64_t seed = 42;
  std::uint64_t count = 100000;
  unsigned bits = 64;
  std::size_t depth = 32;

  /// Throws InvalidArgument unless bits >= 16, count >= 1 and depth <= bits / 2.
  void validate() const;
};

/// Sample `index` of the stream: z = (j + k i) / 2^bits with j, k uniform in
/// [-2^(bits-1), 2^(bits-1)). Writes the numerators.
void sample_dyadic(const SampleSpec& spec, std::uint64_t index, mpz_class& j, mpz_class& k);
GaussRational sample_dyadic(const SampleSpec& spec, std::uint64_t index);

/// Square [x0, x0 + 2^side_bits) x [y0, y0 + 2^side_bits) of numerators over
/// 2^bits. Used to draw uniform points from a neighbourhood of a cylinder.
struct DyadicBox {
  mpz_class x0;
  mpz_class y0;
  unsigned side_bits = 0;
};

/// Smallest aligned box (at the sample resolution) that holds the closed disk
/// of radius `radius` (inflated by a relative 1e-6) around (cx, cy).
DyadicBox box_around(double cx, double cy, double radius, unsigned bits);
void sample_box(const SampleSpec& spec, const DyadicBox& box, std::uint64_t index, mpz_class& j, mpz_class& k);

}  // namespace hurwitz
