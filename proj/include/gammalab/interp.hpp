#ifndef GAMMALAB_INTERP_HPP_
#define GAMMALAB_INTERP_HPP_

#include "gammalab/calculus.hpp"

namespace gammalab::interp {

using banach::SpaceDescriptor;
using banach::Vector;
using calculus::Matrix;
using calculus::SectorialOperator;

/// Quadrature grid for the dt/t integrals: log-spaced points spanning the
/// certified spectrum with wide margins. The margins are sized so that the
/// truncated tails of t^{-theta} w(tA) stay below the closed-form tolerance
/// for theta in [0.2, 0.8].
struct QuadratureConfig {
  std::size_t points = 320;
  double span_decades = 14.0;  // grid covers [lambda_min 10^-span, lambda_max 10^span]
};

/// Real-interpolation norm of x in (X, D(A))_{theta,p} realized through the
/// integral ||t -> t^{-theta} w(tA) x||_{L^p(dt/t)} with w(z) = z(1+z)^{-1}.
struct InterpolationNorm {
  double theta = 0.0;
  double exponent = 2.0;
  double base_norm = 0.0;      // ||x||
  double integral_part = 0.0;  // the L^p(dt/t) integral
  bool base_term_dropped = false;

  double value() const { return base_term_dropped ? integral_part : base_norm + integral_part; }
};

/// Shared factorizations of (I + tA) over the quadrature grid; reuse across
/// many vectors makes probe sweeps cheap.
class InterpContext {
 public:
  InterpContext(const SectorialOperator& a, const SpaceDescriptor& space,
                const QuadratureConfig& config = {});

  const SectorialOperator& op() const { return a_; }
  const SpaceDescriptor& space() const { return space_; }
  const std::vector<double>& t_grid() const { return t_; }
  double log_step() const { return du_; }
  bool invertible() const { return invertible_; }

  /// w(tA) x = tA (I + tA)^{-1} x at grid index k.
  Vector w_apply(std::size_t k, const Vector& x) const;
  /// (I + t_k A)^{-1} x.
  Vector solve_shifted(std::size_t k, const Vector& x) const;

  InterpolationNorm real_interp_norm(const Vector& x, double theta, double p) const;
  double fractional_domain_norm(const Vector& x, double theta) const;

 private:
  SectorialOperator a_;
  SpaceDescriptor space_;
  std::vector<double> t_;
  double du_ = 0.0;
  bool invertible_ = true;
  std::vector<Eigen::PartialPivLU<Matrix>> lu_;  // I + t_k A
};

/// One-shot variants.
InterpolationNorm real_interp_norm(const SectorialOperator& a, const SpaceDescriptor& space,
                                   const Vector& x, double theta, double p,
                                   const QuadratureConfig& config = {});
double fractional_domain_norm(const SectorialOperator& a, const SpaceDescriptor& space,
                              const Vector& x, double theta,
                              const QuadratureConfig& config = {});

/// Closed form for diagonal A with eigenvalue lambda and p = 2:
/// integral part = sqrt(Gamma(2-2theta) Gamma(2theta)) lambda^theta |x|.
double diagonal_interp_constant(double theta);

/// Embedding chain (X,D(A))_{theta,p} -> D(A^theta) -> (X,D(A))_{theta,q}:
/// max over random trials of ||x||_{theta,q-side} / ||A^theta x|| and
/// ||A^theta x|| / ||x||_{theta,p-side}, plus a pointwise check of the
/// v-symbol identity v(tA) A^theta x = t^{-theta} w(tA) x.
ProbeResult interp_chain_probe(const SectorialOperator& a, const SpaceDescriptor& space,
                               double theta, double p, double q, int trials,
                               std::uint64_t seed, const QuadratureConfig& config = {});

struct BesovConfig {
  double integrability = 4.0;  // r in (1, infinity)
  double theta = 0.5;          // smoothness 2 theta
  std::size_t grid_size = 32;  // N, a power of two
  bool swap_exponents = false; // probe the false embedding directions
};

/// Periodic-Laplacian Besov chain on N grid points: compares the
/// interpolation norms with exponents {2, r} against the fractional-domain
/// norm in L^r(grid), reporting the two embedding ratios (max over trials).
/// Trial data mixes plain gaussian vectors with multiscale witnesses that
/// expose the microscopic sharpness.
ProbeResult besov_chain_probe(const BesovConfig& config, int trials, std::uint64_t seed,
                              const QuadratureConfig& quad = {});

/// The shifted periodic Laplacian used by the Besov probe (Fourier multiplier
/// (N^2/pi^2) sin^2(pi k / N), shifted by +1).
Matrix besov_operator(std::size_t grid_size);

}  // namespace gammalab::interp

#endif  // GAMMALAB_INTERP_HPP_
