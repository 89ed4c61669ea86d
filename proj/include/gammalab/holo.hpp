#ifndef GAMMALAB_HOLO_HPP_
#define GAMMALAB_HOLO_HPP_

#include <functional>
#include <optional>
#include <variant>

#include "gammalab/gamma.hpp"

namespace gammalab::holo {

using banach::SpaceDescriptor;
using banach::Vector;
using gamma::GammaConfig;
using gamma::GammaEstimate;
using gamma::GridFunction;
using gamma::MeasuredGrid;

struct StripDomain {
  double half_width;  // {z : |Im z| < half_width}
};

struct SectorDomain {
  double angle;  // {z != 0 : |arg z| < angle}, 0 < angle < pi
};

/// H-infinity-0 decay bound (C, eps). On a sector it reads
/// |f(z)| <= C |z|^eps / (1 + |z|^{2 eps}); on a strip, the log-transferred
/// form |f(u+iv)| <= C e^{-eps |u|}.
struct DecayCertificate {
  double constant;
  double epsilon;
};

/// An evaluable holomorphic function with a declared domain.
struct HoloFn {
  SpaceDescriptor space;
  std::variant<StripDomain, SectorDomain> domain;
  std::function<Vector(Complex)> eval;
  std::optional<DecayCertificate> decay;

  bool contains(Complex z) const;
  double boundary_distance(Complex z) const;
  bool on_strip() const { return std::holds_alternative<StripDomain>(domain); }

  /// Random spot-check of the decay certificate; throws on violation.
  void check_decay_certificate(int samples, std::uint64_t seed) const;
};

/// Scalar-valued convenience constructor (1-dimensional space).
HoloFn scalar_holo(std::variant<StripDomain, SectorDomain> domain,
                   std::function<Complex(Complex)> fn,
                   std::optional<DecayCertificate> decay = std::nullopt);

/// x-times-scalar convenience constructor.
HoloFn rank_one_holo(const SpaceDescriptor& space, const Vector& x,
                     std::variant<StripDomain, SectorDomain> domain,
                     std::function<Complex(Complex)> fn,
                     std::optional<DecayCertificate> decay = std::nullopt);

// --- Contour machinery -------------------------------------------------------

/// n-th derivative by the Cauchy integral over a circle, trapezoid rule;
/// spectrally accurate in the node count. radius <= 0 picks half the distance
/// to the domain boundary.
Vector cauchy_derivative(const HoloFn& f, Complex a, int order, double radius = 0.0,
                         int nodes = 64);

// --- Planar regions ----------------------------------------------------------

/// Flattened 2-D cell list: midpoints plus area masses.
struct PlanarRegion {
  std::vector<Complex> midpoints;
  std::vector<double> masses;
};

PlanarRegion strip_planar_grid(double x_lo, double x_hi, double y_lo, double y_hi,
                               std::size_t nx, std::size_t ny);
PlanarRegion disk_planar_grid(Complex center, double radius, std::size_t n_across);

GridFunction sample_planar(const HoloFn& f, const PlanarRegion& region);

/// Samples f along the horizontal line Im z = level on a Lebesgue grid.
GridFunction sample_line(const HoloFn& f, const MeasuredGrid& grid, double level);

/// Samples t -> f(e^{i angle} t) on a log grid (coordinates are log t), so the
/// grid norms are the dt/t norms on the ray.
GridFunction sample_ray(const HoloFn& f, const MeasuredGrid& log_grid, double angle);

// --- Probes ------------------------------------------------------------------

/// Nested-disk Sobolev/gamma comparison:
/// W^{l,p}(D1) vs gamma^k(D2) vs W^{l,p}(D3), disks centered at `center`.
ProbeResult disk_nesting_probe(const HoloFn& f, Complex center, double r1, double r2,
                               double r3, int k, int l, double p,
                               std::size_t cells_per_diameter = 24,
                               const GammaConfig& config = {});

// --- Poisson extension on the strip ------------------------------------------

/// Kernels for the normalized strip {0 < Im < 1}; k0 pairs with the lower
/// boundary, k1 with the upper. Their masses are 1-y and y.
double strip_poisson_kernel0(double x, double y);
double strip_poisson_kernel1(double x, double y);

/// Total discrete kernel mass sum_k h (k0 + k1) at height y in S_b, summed
/// over the given trace grid (diagnostic for the normalization).
double strip_poisson_mass(const MeasuredGrid& grid, double y, double b);

/// Harmonic extension to level y in (-b, b) from traces at the two boundary
/// lines -b and +b, by discrete kernel convolution.
GridFunction poisson_extend(const GridFunction& trace_plus, const GridFunction& trace_minus,
                            double y, double b);

// --- Lattice gamma functional and the strip chain ----------------------------

/// gamma(f) over the shifted lattice {n + shift + i level : |n| <= N}. With
/// truncation unset, N is derived from the decay certificate so the dropped
/// tail is below `tail_tol`; without a certificate this is rejected.
GammaEstimate lattice_gamma(const HoloFn& f, double shift, double level,
                            std::optional<int> truncation, const GammaConfig& config = {},
                            double tail_tol = 1e-9);

struct StripChainConfig {
  int s_points = 8;              // grid approximating sup over s in [0,1]
  std::optional<int> truncation; // lattice half-width
  double line_halfwidth = 8.0;   // t-range for line/planar grids
  std::size_t line_cells = 256;
  std::size_t planar_rows = 12;  // vertical cells of the S_b grid
  GammaConfig gamma;
};

/// Quantities of the discrete-lattice chain at levels a < b:
/// lattice sums at a, the planar gamma over S_b, boundary-line gammas, and
/// the derivative-integral right-hand side. Links with constant one are
/// asserted in ordering_ok.
ProbeResult strip_chain_probe(const HoloFn& f, double a, double b,
                              const StripChainConfig& config = {});

// --- The five-term level-norm chain -------------------------------------------

struct YNorm {
  enum class Kind { Lp, Gamma };
  Kind kind = Kind::Lp;
  double p = 2.0;
};

struct YChainConfig {
  int s_points = 7;               // per sup, odd to include the center line
  std::size_t level_cells = 12;   // cells for level integrals / gamma over levels
  double line_halfwidth = 8.0;
  std::size_t line_cells = 192;
  GammaConfig gamma;
};

/// Five-quantity chain for levels a < b < c < d: sup over [-a,a], integral
/// over (-b,b), gamma over levels of derivatives up to k, sup of derivative
/// norms over [-b,b], sup over [-c,c], boundary sum at +-d.
ProbeResult y_chain_probe(const HoloFn& f, double a, double b, double c, double d,
                          const YNorm& y_norm, int k, const YChainConfig& config = {});

// --- Conformal transfer -------------------------------------------------------

/// g(w) = f(log w) on the sector of the same opening (requires alpha < pi).
HoloFn map_strip_to_sector(const HoloFn& f);
/// g(z) = f(e^z) on the strip of the same opening.
HoloFn map_sector_to_strip(const HoloFn& f);

// --- Sinc witness family ------------------------------------------------------

/// Family Phi_n(z) = 2 sinc(2 pi z - c_n), c_n = 3 pi r^n, normalized so that
/// Phi_n is exactly the Fourier transform of x -> e^{i c_n x} 1_{(-1,1)}(x).
/// The level parameter b is in modulation units: "level (j, b)" evaluates on
/// the line Im z = j b / (2 pi), where Phi_n equals the Fourier transform of
/// the tilted indicator e^{i c_n x + j b x} 1_{(-1,1)}.
struct SincWitnessFamily {
  int base = 2;           // r
  double level_b = 1.0;   // default boundary modulation level
  banach::VectorFamily coefficients;
  std::vector<double> centers_over_2pi;  // t_n = c_n / (2 pi) = 1.5 r^n
  bool odd_base_warning = false;

  int count() const { return static_cast<int>(coefficients.size()); }

  /// Phi_n at the point t + i j b/(2 pi), via the closed form.
  Complex line_value(int n, double t, int j, double b) const;
  /// Closed-form Fourier transform of e^{i c_n x + j b x} 1_{(-1,1)} at t;
  /// identical to line_value by construction.
  Complex modulated_indicator_ft(int n, double t, int j, double b) const;

  Vector eval_line(double t, int j, double b) const;  // sum_n Phi_n x_n
  Vector eval(Complex z) const;                       // true coordinates

  HoloFn to_holo(double strip_half_width) const;

  /// Union of uniform windows of the given halfwidth around the bump centers
  /// (overlapping windows merged).
  MeasuredGrid window_grid(double halfwidth, double cell_h) const;
};

/// Builds the family; r must be an integer >= 2. Odd r leaves the modulation
/// frequencies off the 2 pi lattice, which breaks exact orthogonality; the
/// result carries a warning flag in that case.
SincWitnessFamily sinc_witness(int count, int base, double level_b,
                               const banach::VectorFamily& coefficients);

/// sin(w)/w, stable near w = 0.
Complex csinc(Complex w);

// --- Type / cotype theorem probes ---------------------------------------------

struct StripGeometry { double a, b; };
struct SectorGeometry { double a, b; };
using ProbeGeometry = std::variant<StripGeometry, SectorGeometry>;

/// Embedding probe on two symmetric line pairs:
/// type(p):   sum_j gamma(line a) vs sum_j L^p(line b);
/// cotype(q): sum_j L^q(line a) vs sum_j gamma(line b).
/// The grid carries the line discretization (uniform for strips, log for
/// sector rays).
ProbeResult theorem_probe(const HoloFn& f, banach::ProbeKind kind, double exponent,
                          const ProbeGeometry& geometry, const MeasuredGrid& grid,
                          const GammaConfig& config = {});

}  // namespace gammalab::holo

#endif  // GAMMALAB_HOLO_HPP_
