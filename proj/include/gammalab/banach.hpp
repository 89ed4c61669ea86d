#ifndef GAMMALAB_BANACH_HPP_
#define GAMMALAB_BANACH_HPP_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gammalab/probe.hpp"
#include "gammalab/space.hpp"

namespace gammalab::banach {

/// An ordered family x_1..x_N of vectors in a common space.
struct VectorFamily {
  SpaceDescriptor space;
  std::vector<Vector> vectors;

  std::size_t size() const { return vectors.size(); }
  void validate() const;
  VectorFamily scaled(Complex c) const;
};

enum class Law { GaussianReal, GaussianComplex, Rademacher };

struct MonteCarlo {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};

struct Exhaustive {};  // Rademacher only, N <= 20

using AverageMode = std::variant<MonteCarlo, Exhaustive>;

/// Estimate of (E || sum_n xi_n x_n ||^moment)^{1/moment}.
struct RandomizedAverage {
  double value = 0.0;
  double stderr_est = 0.0;  // jackknife; 0 in exhaustive mode
  std::size_t samples = 0;
  Law law = Law::GaussianReal;
  double moment = 2.0;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

/// moment = infinity takes the max over sign patterns / samples.
RandomizedAverage randomized_average(const VectorFamily& family, double moment, Law law,
                                     const AverageMode& mode);

/// Ratio probe for the type-p / cotype-q inequalities.
/// type:   ratio = E-average(rademacher, p) / (sum ||x_n||^p)^{1/p}
/// cotype: ratio = (sum ||x_n||^q)^{1/q} / E-average(rademacher, q), with the
///         sup-modification for q = infinity on both sides.
enum class ProbeKind { Type, Cotype };

ProbeResult type_cotype_probe(const VectorFamily& family, double exponent, ProbeKind kind,
                              const AverageMode& mode);

/// Best-effort search for a family maximizing the probe ratio: random
/// restarts plus coordinate-wise ascent. The standard-basis family is always
/// among the candidates, so the result is at least as good.
VectorFamily witness_search(const SpaceDescriptor& space, ProbeKind kind, double exponent,
                            int family_size, int budget, std::uint64_t seed,
                            double* best_ratio = nullptr);

/// Standard basis e_1..e_N (cycled when N exceeds the dimension).
VectorFamily standard_basis_family(const SpaceDescriptor& space, int family_size);

}  // namespace gammalab::banach

#endif  // GAMMALAB_BANACH_HPP_
