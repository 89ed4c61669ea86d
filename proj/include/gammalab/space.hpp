#ifndef GAMMALAB_SPACE_HPP_
#define GAMMALAB_SPACE_HPP_

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "gammalab/common.hpp"

namespace gammalab::banach {

using Vector = Eigen::VectorXcd;

/// A finite-dimensional Banach space: plain ell^r_n, a weighted variant,
/// or a finite product with an outer exponent. Exponent infinity is
/// represented by std::numeric_limits<double>::infinity().
class SpaceDescriptor {
 public:
  enum class Kind { Lp, WeightedLp, Product };

  static SpaceDescriptor lp(double exponent, int dim);
  static SpaceDescriptor weighted_lp(double exponent, Eigen::VectorXd weights);
  static SpaceDescriptor product(std::vector<SpaceDescriptor> factors, double outer_exponent);

  /// Parses "lp:r:n" / "wlp:r:w1,w2,..." / "prod:r:(spec;spec;...)".
  static SpaceDescriptor parse(const std::string& spec);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::vector<SpaceDescriptor>& factors() const { return factors_; }

  double norm(const Vector& v) const;

  /// Descriptor of the dual space under the unweighted pairing sum v_k conj(w_k).
  SpaceDescriptor dual() const;

  /// True when the norm comes from an inner product (all exponents 2, or dim 1
  /// factors where the exponent is irrelevant).
  bool is_hilbert() const;

  std::string to_string() const;

  /// Defaults to the scalar space lp(2, 1).
  SpaceDescriptor() = default;

 private:
  Kind kind_ = Kind::Lp;
  double exponent_ = 2.0;
  int dim_ = 1;
  Eigen::VectorXd weights_;               // WeightedLp only
  std::vector<SpaceDescriptor> factors_;  // Product only
};

/// Scalar pairing sum_k v_k conj(w_k); |pairing| <= norm(v) * dual().norm(w).
Complex dual_pairing(const SpaceDescriptor& space, const Vector& v, const Vector& w);

}  // namespace gammalab::banach

#endif  // GAMMALAB_SPACE_HPP_
