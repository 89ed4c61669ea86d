#include "gammalab/space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gammalab::banach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double conjugate_exponent(double r) {
  if (r == 1.0) return kInf;
  if (std::isinf(r)) return 1.0;
  return r / (r - 1.0);
}

double lp_reduce(const Eigen::ArrayXd& magnitudes, double r) {
  if (std::isinf(r)) return magnitudes.size() ? magnitudes.maxCoeff() : 0.0;
  if (r == 2.0) return std::sqrt((magnitudes * magnitudes).sum());
  if (r == 1.0) return magnitudes.sum();
  // rescale to avoid overflow for large exponents
  const double peak = magnitudes.size() ? magnitudes.maxCoeff() : 0.0;
  if (peak == 0.0) return 0.0;
  return peak * std::pow(((magnitudes / peak).pow(r)).sum(), 1.0 / r);
}

}  // namespace

SpaceDescriptor SpaceDescriptor::lp(double exponent, int dim) {
  if (exponent < 1.0) throw InvalidInput("lp exponent must be >= 1");
  if (dim < 1) throw InvalidInput("lp dimension must be >= 1");
  SpaceDescriptor s;
  s.kind_ = Kind::Lp;
  s.exponent_ = exponent;
  s.dim_ = dim;
  return s;
}

SpaceDescriptor SpaceDescriptor::weighted_lp(double exponent, Eigen::VectorXd weights) {
  if (exponent < 1.0) throw InvalidInput("lp exponent must be >= 1");
  if (weights.size() < 1) throw InvalidInput("weighted space needs at least one weight");
  if ((weights.array() <= 0.0).any()) throw InvalidInput("weights must be strictly positive");
  SpaceDescriptor s;
  s.kind_ = Kind::WeightedLp;
  s.exponent_ = exponent;
  s.dim_ = static_cast<int>(weights.size());
  s.weights_ = std::move(weights);
  return s;
}

SpaceDescriptor SpaceDescriptor::product(std::vector<SpaceDescriptor> factors,
                                         double outer_exponent) {
  if (factors.empty()) throw InvalidInput("product space needs at least one factor");
  if (outer_exponent < 1.0) throw InvalidInput("outer exponent must be >= 1");
  SpaceDescriptor s;
  s.kind_ = Kind::Product;
  s.exponent_ = outer_exponent;
  s.dim_ = 0;
  for (const auto& f : factors) s.dim_ += f.dim();
  s.factors_ = std::move(factors);
  return s;
}

double SpaceDescriptor::norm(const Vector& v) const {
  if (v.size() != dim_) throw InvalidInput("vector dimension does not match space");
  switch (kind_) {
    case Kind::Lp:
      return lp_reduce(v.array().abs(), exponent_);
    case Kind::WeightedLp: {
      // weights act as a measure density: ||v|| = || w^{1/r} v ||_r
      if (std::isinf(exponent_)) return v.array().abs().maxCoeff();
      const Eigen::ArrayXd scaled =
          v.array().abs() * weights_.array().pow(1.0 / exponent_);
      return lp_reduce(scaled, exponent_);
    }
    case Kind::Product: {
      Eigen::ArrayXd parts(static_cast<int>(factors_.size()));
      int offset = 0;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        const int d = factors_[i].dim();
        parts[static_cast<int>(i)] = factors_[i].norm(v.segment(offset, d));
        offset += d;
      }
      return lp_reduce(parts, exponent_);
    }
  }
  return 0.0;
}

SpaceDescriptor SpaceDescriptor::dual() const {
  const double rp = conjugate_exponent(exponent_);
  switch (kind_) {
    case Kind::Lp:
      return lp(rp, dim_);
    case Kind::WeightedLp: {
      if (std::isinf(exponent_)) return lp(1.0, dim_);  // sup norm ignores weights
      if (std::isinf(rp)) {
        // dual of weighted l1 is sup of |u_k| / w_k; encode as weighted sup
        SpaceDescriptor s;
        s.kind_ = Kind::WeightedLp;
        s.exponent_ = kInf;
        s.dim_ = dim_;
        s.weights_ = weights_.array().inverse();
        return s;
      }
      Eigen::VectorXd dual_w = weights_.array().pow(-rp / exponent_);
      return weighted_lp(rp, std::move(dual_w));
    }
    case Kind::Product: {
      std::vector<SpaceDescriptor> duals;
      duals.reserve(factors_.size());
      for (const auto& f : factors_) duals.push_back(f.dual());
      return product(std::move(duals), rp);
    }
  }
  return lp(2.0, dim_);
}

bool SpaceDescriptor::is_hilbert() const {
  switch (kind_) {
    case Kind::Lp:
      return exponent_ == 2.0 || dim_ == 1;
    case Kind::WeightedLp:
      return exponent_ == 2.0 || dim_ == 1;
    case Kind::Product: {
      if (!(exponent_ == 2.0 || factors_.size() == 1)) return false;
      for (const auto& f : factors_)
        if (!f.is_hilbert()) return false;
      return true;
    }
  }
  return false;
}

std::string SpaceDescriptor::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Lp:
      os << "lp:" << exponent_ << ":" << dim_;
      break;
    case Kind::WeightedLp:
      os << "wlp:" << exponent_ << ":" << dim_;
      break;
    case Kind::Product:
      os << "prod:" << exponent_ << ":(";
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << ";";
        os << factors_[i].to_string();
      }
      os << ")";
      break;
  }
  return os.str();
}

namespace {

double parse_exponent(const std::string& tok) {
  if (tok == "inf" || tok == "Inf" || tok == "INF") return kInf;
  return std::stod(tok);
}

}  // namespace

SpaceDescriptor SpaceDescriptor::parse(const std::string& spec) {
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) throw InvalidInput("bad space spec: " + spec);
  const std::string head = spec.substr(0, c1);
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw InvalidInput("bad space spec: " + spec);
  const double r = parse_exponent(spec.substr(c1 + 1, c2 - c1 - 1));
  const std::string rest = spec.substr(c2 + 1);
  if (head == "lp") return lp(r, std::stoi(rest));
  if (head == "wlp") {
    std::vector<double> w;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
    Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<int>(w.size()));
    return weighted_lp(r, wv);
  }
  if (head == "prod") {
    if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
      throw InvalidInput("bad product spec: " + spec);
    std::vector<SpaceDescriptor> factors;
    int depth = 0;
    std::string cur;
    for (char ch : rest.substr(1, rest.size() - 2)) {
      if (ch == '(') depth++;
      if (ch == ')') depth--;
      if (ch == ';' && depth == 0) {
        factors.push_back(parse(cur));
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) factors.push_back(parse(cur));
    return product(std::move(factors), r);
  }
  throw InvalidInput("unknown space kind: " + head);
}

Complex dual_pairing(const SpaceDescriptor& space, const Vector& v, const Vector& w) {
  if (v.size() != space.dim() || w.size() != space.dim())
    throw InvalidInput("dual_pairing: dimension mismatch");
  return (v.array() * w.array().conjugate()).sum();
}

}  // namespace gammalab::banach
