#include "hurwitz/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hurwitz {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Streams used by the samplers; distinct so coordinates never share words.
constexpr std::uint32_t kStreamRe = 0;
constexpr std::uint32_t kStreamIm = 1;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t index, std::uint32_t stream, std::uint32_t blk) const {
  return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, blk}, key_);
}

void CounterRng::uniform_bits(mpz_class& out, std::uint64_t index, std::uint32_t stream, unsigned bits) const {
  const unsigned words = (bits + 31) / 32;
  std::vector<std::uint32_t> buf(words);
  for (unsigned w = 0; w < words; w += 4) {
    const auto b = block(index, stream, w / 4);
    for (unsigned t = 0; t < 4 && w + t < words; ++t) buf[w + t] = b[t];
  }
  if (bits % 32 != 0) buf[words - 1] &= (std::uint32_t{1} << (bits % 32)) - 1;
  mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint32_t), 0, 0, buf.data());
}

void SampleSpec::validate() const {
  if (bits < 16) throw InvalidArgument("bits must be >= 16");
  if (count == 0) throw InvalidArgument("count must be >= 1");
  if (depth > bits / 2) throw InvalidArgument("depth must be <= bits / 2");
}

void sample_dyadic(const SampleSpec& spec, std::uint64_t index, mpz_class& j, mpz_class& k) {
  const CounterRng rng(spec.seed);
  mpz_class half;
  mpz_setbit(half.get_mpz_t(), spec.bits - 1);
  rng.uniform_bits(j, index, kStreamRe, spec.bits);
  rng.uniform_bits(k, index, kStreamIm, spec.bits);
  j -= half;
  k -= half;
}

GaussRational sample_dyadic(const SampleSpec& spec, std::uint64_t index) {
  mpz_class j, k, den;
  sample_dyadic(spec, index, j, k);
  mpz_setbit(den.get_mpz_t(), spec.bits);
  return GaussRational::from_parts(j, k, den);
}

DyadicBox box_around(double cx, double cy, double radius, unsigned bits) {
  const double r = radius * (1 + 1e-6) + std::ldexp(1.0, -40) + std::ldexp(1.0, -static_cast<int>(bits));
  DyadicBox box;
  int e = 0;
  std::frexp(2 * r, &e);  // 2r < 2^e
  const int side_exp = std::min(e, 0);
  box.side_bits = static_cast<unsigned>(static_cast<int>(bits) + side_exp);
  // Lower-left corner on the 2^-bits grid, rounded down.
  auto corner = [&](double c) {
    mpz_class v;
    const double lo = std::floor(std::ldexp(c - r, 40));  // exact in double for |c| < 2^12
    v = lo;
    if (bits >= 40) {
      v <<= (bits - 40);
    } else {
      mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), 40 - bits);
    }
    return v;
  };
  box.x0 = corner(cx);
  box.y0 = corner(cy);
  return box;
}

void sample_box(const SampleSpec& spec, const DyadicBox& box, std::uint64_t index, mpz_class& j, mpz_class& k) {
  const CounterRng rng(spec.seed);
  rng.uniform_bits(j, index, kStreamRe, box.side_bits);
  rng.uniform_bits(k, index, kStreamIm, box.side_bits);
  j += box.x0;
  k += box.y0;
}

}  // namespace hurwitz
