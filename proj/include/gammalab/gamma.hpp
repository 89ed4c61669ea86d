#ifndef GAMMALAB_GAMMA_HPP_
#define GAMMALAB_GAMMA_HPP_

#include "gammalab/banach.hpp"
#include "gammalab/grid.hpp"
#include "gammalab/probe.hpp"

namespace gammalab::gamma {

/// How a gamma norm is estimated. Auto uses the closed form on Hilbert
/// spaces and Monte Carlo elsewhere.
struct GammaConfig {
  enum class Mode { Auto, MonteCarlo, HilbertExact };
  Mode mode = Mode::Auto;
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
  banach::Law law = banach::Law::GaussianReal;
};

struct GammaEstimate {
  double value = 0.0;
  double stderr_est = 0.0;
  std::size_t basis_size = 0;
  std::size_t samples = 0;       // 0 for the exact path
  std::uint64_t seed = 0;
  bool exact = false;
  double operator_norm_lb = 0.0;  // ||I_f|| sampled on the same basis
};

/// Gamma norm of a piecewise-constant function: the gaussian average of the
/// family { sqrt(mass_k) value_k }, which is exact for step functions since
/// the normalized cell indicators are orthonormal in L^2.
GammaEstimate gamma_norm(const GridFunction& f, const GammaConfig& config = {});

/// Closed form (sum_k mass_k ||value_k||^2)^{1/2}; Hilbert spaces only.
double gamma_norm_hilbert_exact(const GridFunction& f);

/// (sum_k mass_k ||value_k||^p)^{1/p}; p = infinity takes the sup over cells.
double lp_norm(const GridFunction& f, double p);

// --- Transform laws on the real line (Facts (d)-(g)) ---------------------

struct Translate { double offset; };
struct Dilate { double factor; };            // f(a x), a > 0
struct Fourier {};                           // unitary DFT, uniform grids only
struct Convolve { GridFunction kernel; };    // scalar L^1 kernel, uniform grids

using Transform = std::variant<Translate, Dilate, Fourier, Convolve>;

GridFunction transform(const GridFunction& f, const Transform& action);

/// L^1 mass of a scalar kernel grid function.
double l1_mass(const GridFunction& kernel);

// --- Derivatives and gamma^k ----------------------------------------------

/// Central second-order finite differences on the grid (one-sided second
/// order at the ends). Lebesgue grids only.
GridFunction finite_difference(const GridFunction& f);

/// sum_{j=0}^{k} gamma(f^{(j)}) with finite-difference derivatives.
GammaEstimate gamma_k_norm(const GridFunction& f, int k, const GammaConfig& config = {});

/// Same, with caller-supplied derivatives f, f', ..., f^{(k)}.
GammaEstimate gamma_k_norm(const std::vector<GridFunction>& derivatives,
                           const GammaConfig& config = {});

// --- One-dimensional probes ------------------------------------------------

/// Interval bounds: gamma(a,b) <= (b-a)^{-1/2} ||f(b)|| + (b-a)^{1/2} int ||f'||
/// and sup ||f|| <= (b-a)^{-1/2} gamma(f) + (b-a)^{1/2} gamma(f'). Both carry
/// constant one, so ordering_ok asserts them (with estimator slack).
ProbeResult interval_bounds_probe(const GridFunction& f, const GridFunction& fprime,
                                  const Vector& f_at_b, double a, double b,
                                  const GammaConfig& config = {});

/// Disjoint-block randomization: cotype-upper compares
/// (sum_n gamma(f|S_n)^q)^{1/q} against gamma(f); type-lower compares
/// gamma(f) against (sum_n gamma(f|S_n)^p)^{1/p} (blocks must cover).
enum class BlockKind { CotypeUpper, TypeLower };

ProbeResult block_partition_probe(const GridFunction& f,
                                  const std::vector<std::vector<std::size_t>>& blocks,
                                  double exponent, BlockKind kind,
                                  const GammaConfig& config = {});

/// W^{1,p} -> gamma -> L^q line embeddings:
/// (gamma(f), ||f||_p + ||f'||_p) and (||f||_q, gamma(f) + gamma(f')).
ProbeResult line_embedding_probe(const GridFunction& f, const GridFunction& fprime,
                                 double p, double q, const GammaConfig& config = {});

}  // namespace gammalab::gamma

#endif  // GAMMALAB_GAMMA_HPP_
