#ifndef GAMMALAB_CALCULUS_HPP_
#define GAMMALAB_CALCULUS_HPP_

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "gammalab/grid.hpp"
#include "gammalab/holo.hpp"
#include "gammalab/probe.hpp"

namespace gammalab::calculus {

using banach::SpaceDescriptor;
using banach::Vector;
using Matrix = Eigen::MatrixXcd;

struct Eigendecomposition {
  Matrix v;
  Vector eigenvalues;
  Matrix v_inv;
  double condition;  // cond_2(V)
};

struct SectorialityCertificate {
  double angle = 0.0;      // omega
  double constant = 0.0;   // M = sup |z (z-A)^{-1}| over the sampled rays
  bool ok = false;
};

/// A complex square matrix with a sectoriality certificate. Non-injective
/// inputs can be shifted by +1 (recorded in `shifted`) before the calculus
/// is used.
class SectorialOperator {
 public:
  explicit SectorialOperator(Matrix a);

  static SectorialOperator from_named(const std::string& spec);   // laplacian1d(n), ...
  static SectorialOperator read_csv(std::istream& is);            // re/im interleaved

  const Matrix& matrix() const { return a_; }
  int dim() const { return static_cast<int>(a_.rows()); }
  bool shifted() const { return shifted_; }

  /// Returns *this if injective enough, otherwise the operator A + 1.
  SectorialOperator shifted_if_singular(double tol = 1e-10) const;

  /// Certifies sectoriality of angle sigma by sampling |z (z-A)^{-1}| on
  /// log-spaced rays between sigma and pi (plus the negative real axis).
  SectorialityCertificate certify(double sigma, int ray_samples = 48,
                                  double blowup_cap = 1e8);
  const std::optional<SectorialityCertificate>& certificate() const { return cert_; }
  /// Records an externally established certificate (kernel-projected cases).
  void set_certificate(SectorialityCertificate cert) { cert_ = cert; }

  const Eigendecomposition& eigensystem() const;  // cached on first use

  double spectrum_min_abs() const;
  double spectrum_max_abs() const;

 private:
  Matrix a_;
  bool shifted_ = false;
  std::optional<SectorialityCertificate> cert_;
  mutable std::optional<Eigendecomposition> eig_;
};

/// (z - A)^{-1}; throws NumericalFailure (with a condition estimate) when the
/// solve is near-singular.
Matrix resolvent(const SectorialOperator& a, Complex z, double cond_cap = 1e12);

// --- Symbols -------------------------------------------------------------------

/// A scalar holomorphic symbol on a sector. The decay certificate marks the
/// H-infinity-0 class; symbols without it (such as w) are applied by their
/// rational formula rather than the contour integral.
struct Symbol {
  std::string name;
  double admissible_angle = kPi;  // largest sector angle the symbol lives on
  std::optional<holo::DecayCertificate> h0;
  std::function<Complex(Complex)> eval;

  bool is_h_infty_0() const { return h0.has_value(); }
  /// Spot-checks |f(z)| <= C |z|^eps / (1 + |z|^{2 eps}) at random sector points.
  void check_certificate(double angle, int samples, std::uint64_t seed) const;
};

Symbol symbol_w();                 // z (1+z)^{-1}, not H-infinity-0
Symbol symbol_q();                 // z (1+z)^{-2}
Symbol symbol_v_theta(double theta);  // z^{1-theta} (1+z)^{-1}
Symbol symbol_g_alpha(double alpha);  // z^alpha e^{-z^alpha}, angle < pi/(2 alpha)
Symbol symbol_parse(const std::string& spec);  // "q", "w", "v:0.5", "g:0.5"

// --- Dunford calculus ------------------------------------------------------------

struct ContourConfig {
  double angle = 0.0;        // nu; 0 picks the midpoint of (omega, admissible)
  int nodes_per_ray = 200;
  double tail_drop = 1e-14;  // drop nodes below this fraction of the peak
};

/// f(A) = (2 pi i)^{-1} oint f(z) (z - A)^{-1} dz over the sector boundary,
/// exponentially convergent trapezoid rule in log-radial coordinates.
/// H-infinity-0 symbols only, except w which routes to A (1 + A)^{-1}.
Matrix symbol_apply(const SectorialOperator& a, const Symbol& f,
                    const ContourConfig& config = {});

/// A^theta for theta in (0,1): principal-branch eigendecomposition when the
/// eigenvector basis is well conditioned, Balakrishnan real-axis integral
/// otherwise (or when forced).
enum class FractionalMethod { Auto, Eigen, Integral };
Matrix fractional_power(const SectorialOperator& a, double theta,
                        FractionalMethod method = FractionalMethod::Auto);

// --- g-function traces ------------------------------------------------------------

struct GFunctionTrace {
  std::vector<double> t;        // log-spaced grid on (0, infinity)
  std::vector<Vector> values;   // f(tA) x per grid point
  double endpoint_ratio = 0.0;  // max endpoint norm / peak norm
};

/// Evaluates t -> f(tA) x on a log grid; fails when the endpoints have not
/// decayed below `endpoint_tol` times the peak.
GFunctionTrace g_trace(const SectorialOperator& a, const Symbol& f, const Vector& x,
                       double t_lo, double t_hi, std::size_t points,
                       double endpoint_tol = 1e-6, const ContourConfig& config = {});

/// L^p(dt/t) norm of a trace in the given space.
double trace_lp_norm(const GFunctionTrace& trace, const SpaceDescriptor& space, double p);

/// Littlewood-Paley-Stein probe: (||trace||_{L^q(dt/t)}, ||x||, ||trace||_{L^p(dt/t)}).
ProbeResult lps_probe(const SectorialOperator& a, const Symbol& f, const Vector& x,
                      const SpaceDescriptor& space, double p, double q,
                      double t_lo = 0.0, double t_hi = 0.0, std::size_t points = 128,
                      const ContourConfig& config = {});

/// Calibration constant c = (int_0^infty |f(t)|^2 dt/t)^{-1} by log-grid quadrature.
double calibration_constant(const Symbol& f, std::size_t points = 2048);

/// Dual symbol g(z) = c conj(f(conj z)) with int f g dt/t = 1.
Symbol calibrated_dual(const Symbol& f);

// --- Diffusion tensor extension ---------------------------------------------------

/// Dense matrix exponential by scaling and squaring with a Pade approximant.
Matrix matrix_exp(const Matrix& m);

struct DiffusionCheck {
  bool nonnegative = true;
  bool substochastic = true;
  double min_entry = 0.0;
  double max_row_sum = 0.0;
};

/// Checks e^{-tQ} entrywise nonnegative and substochastic at sampled times.
DiffusionCheck diffusion_check(const Matrix& q, const std::vector<double>& times,
                               double tol = 1e-9);

/// Mixed-norm probe for the tensor extension of a diffusion generator Q on a
/// finite state space: x is a (states x dim) matrix over the coordinate space
/// X; the trace norms are computed per state in L^{p/q}(dt/t; X) and
/// aggregated in L^r over the states with the given masses. A nontrivial
/// kernel of Q is projected out of x first (recorded in the result).
ProbeResult diffusion_extend_probe(const Matrix& q, const SpaceDescriptor& coord_space,
                                   double r, const Symbol& f, const Matrix& x,
                                   double p, double q_exp,
                                   const Eigen::VectorXd& state_masses,
                                   double t_lo = 0.0, double t_hi = 0.0,
                                   std::size_t points = 96,
                                   const ContourConfig& config = {});

}  // namespace gammalab::calculus

#endif  // GAMMALAB_CALCULUS_HPP_
