#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace nring {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Small deterministic generator. Every random draw in the library comes
// from one of these, seeded explicitly, so reruns are bit-identical.
// std::uniform_real_distribution is avoided on purpose: its output is
// implementation defined.
class splitmix64 {
 public:
  explicit splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double symmetric() { return 2.0 * u01() - 1.0; }

  // derived stream, independent of draws taken from this one
  splitmix64 split(std::uint64_t stream) const {
    return splitmix64(hash_combine(state_, stream));
  }

 private:
  std::uint64_t state_;
};

// Hash of coordinates rounded to a fixed quantization step. Used by the
// deterministic noise families: the noise at a point is a pure function
// of the quantized coordinates and the seed. Large ratios are folded with
// fmod (exact for doubles) before rounding so huge scaled arguments do
// not overflow the integer conversion.
inline std::uint64_t quantized_hash(std::span<const double> coords, double step,
                                    std::uint64_t seed) {
  std::uint64_t h = hash_combine(seed, 0x71c3a7a1u);
  h = hash_combine(h, static_cast<std::uint64_t>(coords.size()));
  for (double c : coords) {
    double r = c / step;
    r = std::fmod(r, 1.0e15);
    const auto q = static_cast<std::int64_t>(std::llround(r));
    h = hash_combine(h, static_cast<std::uint64_t>(q));
  }
  return h;
}

}  // namespace nring
