#ifndef GAMMALAB_COMMON_HPP_
#define GAMMALAB_COMMON_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammalab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Thrown on contract violations (dimension mismatches, bad parameters, ...).
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical guard trips (near-singular solve, divergent sup, ...).
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Counter-based RNG.
//
// Every Monte-Carlo sample draws from its own stream derived from
// (root seed, sample index), so estimates are bit-identical no matter how
// the sample loop is chunked across workers.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for sample/trial `index` under a root seed.
  static Rng stream(std::uint64_t root, std::uint64_t index) {
    return Rng(splitmix64(root ^ (0x9E3779B97F4A7C15ULL + splitmix64(index))));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  /// Uniform on (0,1); never returns 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via Box-Muller (platform-independent).
  double next_gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  /// Complex standard normal with E|xi|^2 = 1.
  Complex next_cgauss() {
    const double a = next_gauss();
    const double b = next_gauss();
    return Complex(a, b) / std::sqrt(2.0);
  }

  /// +1 or -1 with equal probability.
  double next_sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Worker cap from GAMMALAB_THREADS (0 = hardware default).
unsigned worker_cap();

/// Deterministic parallel map: body(i) for i in [0,n). Results must be
/// written to per-index slots by the caller; chunking never affects values.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Shortest round-trip decimal for CSV/JSON (%.17g trimmed).
std::string format_double(double v);

}  // namespace gammalab

#endif  // GAMMALAB_COMMON_HPP_
