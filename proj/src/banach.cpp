#include "gammalab/banach.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace gammalab::banach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_of_norms(const std::vector<double>& norms, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : norms) m = std::max(m, v);
    return m;
  }
  double peak = 0.0;
  for (double v : norms) peak = std::max(peak, v);
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : norms) acc += std::pow(v / peak, p);
  return peak * std::pow(acc, 1.0 / p);
}

// (mean of y_i)^{1/m} with jackknife standard error of the transformed mean.
struct MomentAccumulator {
  double moment;
  std::vector<double> powered;  // ||sample||^moment

  double value() const {
    if (powered.empty()) return 0.0;
    double mean = 0.0;
    for (double y : powered) mean += y;
    mean /= static_cast<double>(powered.size());
    return std::pow(mean, 1.0 / moment);
  }

  double jackknife_stderr() const {
    const std::size_t n = powered.size();
    if (n < 2) return 0.0;
    double total = 0.0;
    for (double y : powered) total += y;
    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loo[i] = std::pow((total - powered[i]) / static_cast<double>(n - 1), 1.0 / moment);
      loo_mean += loo[i];
    }
    loo_mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    return std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

void VectorFamily::validate() const {
  for (const auto& v : vectors)
    if (v.size() != space.dim())
      throw InvalidInput("family vector dimension does not match space");
}

VectorFamily VectorFamily::scaled(Complex c) const {
  VectorFamily out{space, vectors};
  for (auto& v : out.vectors) v *= c;
  return out;
}

RandomizedAverage randomized_average(const VectorFamily& family, double moment, Law law,
                                     const AverageMode& mode) {
  family.validate();
  if (moment < 1.0) throw InvalidInput("moment exponent must be >= 1");
  const std::size_t n = family.size();

  RandomizedAverage out;
  out.law = law;
  out.moment = moment;

  if (std::holds_alternative<Exhaustive>(mode)) {
    if (law != Law::Rademacher)
      throw InvalidInput("exhaustive mode requires the rademacher law");
    if (n > 20) throw InvalidInput("exhaustive mode limited to N <= 20");
    out.exhaustive = true;
    if (n == 0) return out;

    // Gray-code walk: one sign flip per step.
    const std::uint64_t patterns = 1ull << n;
    Vector sum = Vector::Zero(family.space.dim());
    for (const auto& v : family.vectors) sum += v;  // all signs +1
    std::uint64_t gray = 0;
    double acc = 0.0;
    double peak = 0.0;
    const bool take_max = std::isinf(moment);
    for (std::uint64_t k = 0;;) {
      const double nrm = family.space.norm(sum);
      if (take_max)
        peak = std::max(peak, nrm);
      else
        acc += std::pow(nrm, moment);
      if (++k == patterns) break;
      const std::uint64_t next_gray = k ^ (k >> 1);
      const unsigned bit = static_cast<unsigned>(std::countr_zero(gray ^ next_gray));
      const double new_sign = (next_gray >> bit) & 1u ? -1.0 : 1.0;
      sum += 2.0 * new_sign * family.vectors[bit];
      gray = next_gray;
    }
    out.samples = patterns;
    out.value = take_max ? peak
                         : std::pow(acc / static_cast<double>(patterns), 1.0 / moment);
    out.stderr_est = 0.0;
    return out;
  }

  const auto& mc = std::get<MonteCarlo>(mode);
  out.seed = mc.seed;
  out.samples = mc.samples;
  if (n == 0 || mc.samples == 0) return out;

  const bool take_max = std::isinf(moment);
  std::vector<double> sample_norms(mc.samples);
  parallel_for(mc.samples, [&](std::size_t i) {
    Rng rng = Rng::stream(mc.seed, i);
    Vector sum = Vector::Zero(family.space.dim());
    for (std::size_t k = 0; k < n; ++k) {
      switch (law) {
        case Law::GaussianReal:
          sum += rng.next_gauss() * family.vectors[k];
          break;
        case Law::GaussianComplex:
          sum += rng.next_cgauss() * family.vectors[k];
          break;
        case Law::Rademacher:
          sum += rng.next_sign() * family.vectors[k];
          break;
      }
    }
    sample_norms[i] = family.space.norm(sum);
  });

  if (take_max) {
    out.value = *std::max_element(sample_norms.begin(), sample_norms.end());
    out.stderr_est = 0.0;
    return out;
  }
  MomentAccumulator acc{moment, {}};
  acc.powered.resize(mc.samples);
  for (std::size_t i = 0; i < mc.samples; ++i)
    acc.powered[i] = std::pow(sample_norms[i], moment);
  out.value = acc.value();
  out.stderr_est = acc.jackknife_stderr();
  return out;
}

ProbeResult type_cotype_probe(const VectorFamily& family, double exponent, ProbeKind kind,
                              const AverageMode& mode) {
  if (family.size() == 0) throw InvalidInput("type_cotype_probe: empty family");
  if (kind == ProbeKind::Type && !(exponent >= 1.0 && exponent <= 2.0))
    throw InvalidInput("type exponent must lie in [1,2]");
  if (kind == ProbeKind::Cotype && !(exponent >= 2.0))
    throw InvalidInput("cotype exponent must lie in [2,inf]");

  std::vector<double> norms;
  norms.reserve(family.size());
  for (const auto& v : family.vectors) norms.push_back(family.space.norm(v));
  const double coeff_side = lp_of_norms(norms, exponent);

  const RandomizedAverage avg = randomized_average(family, exponent, Law::Rademacher, mode);

  ProbeResult r;
  r.seed = avg.seed;
  r.stderr_est = avg.stderr_est;
  r.params["space"] = family.space.to_string();
  r.params["N"] = family.size();
  r.params["exponent"] = std::isinf(exponent) ? -1.0 : exponent;
  r.params["samples"] = avg.samples;
  r.params["exhaustive"] = avg.exhaustive;
  if (kind == ProbeKind::Type) {
    r.probe_id = "type-constant";
    r.lhs = avg.value;
    r.rhs = coeff_side;
  } else {
    r.probe_id = "cotype-constant";
    r.lhs = coeff_side;
    r.rhs = avg.value;
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  return r;
}

VectorFamily standard_basis_family(const SpaceDescriptor& space, int family_size) {
  VectorFamily fam{space, {}};
  fam.vectors.reserve(family_size);
  for (int i = 0; i < family_size; ++i) {
    Vector e = Vector::Zero(space.dim());
    e[i % space.dim()] = 1.0;
    fam.vectors.push_back(std::move(e));
  }
  return fam;
}

VectorFamily witness_search(const SpaceDescriptor& space, ProbeKind kind, double exponent,
                            int family_size, int budget, std::uint64_t seed,
                            double* best_ratio) {
  if (budget < 1) throw InvalidInput("witness_search: budget must be >= 1");
  const int dim = space.dim();

  // Exhaustive Rademacher average for small families, MC otherwise; one fixed
  // evaluation seed keeps candidate comparisons deterministic.
  const AverageMode eval_mode =
      family_size <= 10 ? AverageMode{Exhaustive{}}
                        : AverageMode{MonteCarlo{2000, splitmix64(seed)}};
  auto ratio_of = [&](const VectorFamily& fam) {
    return type_cotype_probe(fam, exponent, kind, eval_mode).ratio;
  };

  VectorFamily best = standard_basis_family(space, family_size);
  double best_r = ratio_of(best);
  int evals = 1;

  Rng rng(seed);
  auto random_family = [&]() {
    VectorFamily fam{space, {}};
    fam.vectors.reserve(family_size);
    for (int i = 0; i < family_size; ++i) {
      Vector v(dim);
      for (int d = 0; d < dim; ++d) v[d] = Complex(rng.next_gauss(), rng.next_gauss());
      fam.vectors.push_back(std::move(v));
    }
    return fam;
  };

  while (evals < budget) {
    // restart
    VectorFamily cand = random_family();
    double cand_r = ratio_of(cand);
    ++evals;
    // coordinate-wise ascent with shrinking step
    double step = 1.0;
    int stale = 0;
    while (evals < budget && stale < 2 * family_size * dim) {
      const int vi = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(family_size));
      const int di = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dim));
      VectorFamily trial = cand;
      trial.vectors[vi][di] += step * Complex(rng.next_gauss(), rng.next_gauss());
      const double trial_r = ratio_of(trial);
      ++evals;
      if (trial_r > cand_r) {
        cand = std::move(trial);
        cand_r = trial_r;
        stale = 0;
      } else if (++stale % (family_size * dim) == 0) {
        step *= 0.5;
      }
    }
    if (cand_r > best_r) {
      best = std::move(cand);
      best_r = cand_r;
    }
  }

  if (best_ratio) *best_ratio = best_r;
  return best;
}

}  // namespace gammalab::banach
