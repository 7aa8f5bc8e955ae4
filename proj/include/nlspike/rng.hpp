#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlspike {

/// splitmix64 step; used both as a stream mixer and to derive per-cell seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Collapse (master seed, cell coordinates) into a single well-mixed seed so
/// that every sweep cell gets an independent, reproducible stream no matter
/// which worker thread picks it up.
inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= h + i * 0x9e3779b97f4a7c15ULL;
  h = splitmix64(s);
  s ^= h + j * 0xc2b2ae3d27d4eb4fULL;
  return splitmix64(s);
}

/// Thin RNG wrapper: mt19937_64 core (bit-exact across platforms) with the
/// uniform/normal/Student-t transforms written out explicitly so that streams
/// do not depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (pair cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Student-t with nu degrees of freedom, Bailey's polar method (exact).
  double student_t(double nu) {
    double u, v, w;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      w = u * u + v * v;
    } while (w > 1.0 || w == 0.0);
    double r2 = nu * (std::pow(w, -2.0 / nu) - 1.0);
    return u * std::sqrt(r2 / w);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nlspike
