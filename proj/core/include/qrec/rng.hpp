#pragma once

#include <cstdint>

namespace qrec {

// splitmix64 step; also used to derive independent substream seeds
inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// deterministic seed for a labeled substream of a master seed
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64_next(s);
  s ^= a;
  h ^= splitmix64_next(s);
  s ^= b;
  h ^= splitmix64_next(s);
  s ^= c;
  h ^= splitmix64_next(s);
  return h;
}

// small deterministic PRNG; same stream on every platform/compiler
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller (self-contained: std distributions are
  // implementation-defined and would break cross-platform determinism)
  double gaussian();

  // exact Bernoulli-counting binomial draw, O(n)
  long binomial(long n, double p);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace qrec
