#ifndef NAVHINT_RNG_HPP
#define NAVHINT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace navhint {

// splitmix64; fixed algorithm so streams are identical across platforms
// and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal (Box-Muller, one draw per call, second discarded)
  double normal();

 private:
  std::uint64_t state_;
};

// Derives a child seed from (seed, purpose). All pipeline randomness is
// funneled through one root seed plus fixed purpose strings.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

// FNV-1a over arbitrary bytes; also used for file digests in run manifests.
std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace navhint

#endif
