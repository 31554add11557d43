#include "tapscope/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tapscope {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(seed ^ (index + 1) * 0x9e3779b97f4a7c15ull);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian(double mean, double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sigma * spare_;
  }
  // u1 in (0, 1] so the log never sees zero.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return mean + sigma * r * std::cos(a);
}

std::int64_t RandomStream::next_binomial(std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument("next_binomial: need n >= 0 and p in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - next_binomial(n, 1.0 - p);

  // CDF inversion enumerated from the mode outward. Each support point's
  // probability is subtracted from one uniform draw exactly once, so the
  // result is an exact binomial sample in any enumeration order; starting at
  // the mode ends the walk after O(sqrt(n p)) steps on average.
  const double nd = static_cast<double>(n);
  const std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * p);
  const double log_pmf_mode = std::lgamma(nd + 1.0) -
                              std::lgamma(static_cast<double>(mode) + 1.0) -
                              std::lgamma(nd - static_cast<double>(mode) + 1.0) +
                              static_cast<double>(mode) * std::log(p) +
                              (nd - static_cast<double>(mode)) * std::log1p(-p);
  const double pmf_mode = std::exp(log_pmf_mode);
  const double odds = p / (1.0 - p);

  double u = next_unit() - pmf_mode;
  if (u < 0.0) return mode;

  std::int64_t lo = mode, hi = mode;
  double pmf_lo = pmf_mode, pmf_hi = pmf_mode;
  while (lo > 0 || hi < n) {
    if (lo > 0) {
      pmf_lo *= static_cast<double>(lo) / (odds * static_cast<double>(n - lo + 1));
      --lo;
      u -= pmf_lo;
      if (u < 0.0) return lo;
    }
    if (hi < n) {
      pmf_hi *= odds * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
      ++hi;
      u -= pmf_hi;
      if (u < 0.0) return hi;
    }
  }
  return mode;  // unreachable except for last-ulp round-off
}

}  // namespace tapscope
