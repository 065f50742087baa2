#ifndef SEQMD_RANDOM_H_
#define SEQMD_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace seqmd {

// splitmix64 finalizer; used to derive independent streams from a root seed.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 64-bit FNV-1a.
constexpr std::uint64_t HashString(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t stream) {
  return Mix64(Mix64(root) ^ Mix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t DeriveSeed(std::uint64_t root, std::string_view name) {
  return DeriveSeed(root, HashString(name));
}

// Deterministic generator. The standard distributions are implementation
// defined, so all variates are computed here from raw engine bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t UniformInt(std::uint64_t n);

  double Normal();

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Index drawn proportionally to `weights` (need not be normalized).
  std::size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace seqmd

#endif  // SEQMD_RANDOM_H_
