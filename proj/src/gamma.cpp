#include "gammalab/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace gammalab::gamma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform_spacing(const MeasuredGrid& grid) {
  if (grid.cells() < 1) throw InvalidInput("empty grid");
  const double h = grid.cell_masses[0];
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    if (std::abs(grid.cell_masses[k] - h) > 1e-9 * h)
      throw InvalidInput("operation requires a uniform grid");
    if (k > 0 && std::abs(grid.coordinates[k] - grid.coordinates[k - 1] - h) > 1e-9 * h)
      throw InvalidInput("operation requires contiguous uniform cells");
  }
  return h;
}

// Lower bound for ||I_f|| on the indicator basis: basis vectors plus a few
// random unit-l2 coefficient combinations.
double operator_norm_lower_bound(const banach::VectorFamily& fam, std::uint64_t seed) {
  double lb = 0.0;
  for (const auto& u : fam.vectors) lb = std::max(lb, fam.space.norm(u));
  if (fam.size() < 2) return lb;
  for (int trial = 0; trial < 8; ++trial) {
    Rng rng = Rng::stream(splitmix64(seed ^ 0xA5A5A5A5ULL), trial);
    banach::Vector sum = banach::Vector::Zero(fam.space.dim());
    double c2 = 0.0;
    for (const auto& u : fam.vectors) {
      const double c = rng.next_gauss();
      sum += c * u;
      c2 += c * c;
    }
    if (c2 > 0.0) lb = std::max(lb, fam.space.norm(sum) / std::sqrt(c2));
  }
  return lb;
}

}  // namespace

GammaEstimate gamma_norm(const GridFunction& f, const GammaConfig& config) {
  f.validate();
  GammaEstimate est;
  est.basis_size = f.grid.cells();
  if (f.grid.cells() == 0) return est;

  const banach::VectorFamily fam = f.indicator_family();
  est.operator_norm_lb = operator_norm_lower_bound(fam, config.seed);

  const bool hilbert = f.space.is_hilbert();
  const bool use_exact = config.mode == GammaConfig::Mode::HilbertExact ||
                         (config.mode == GammaConfig::Mode::Auto && hilbert);
  if (use_exact) {
    est.value = gamma_norm_hilbert_exact(f);
    est.exact = true;
    return est;
  }

  const auto avg = banach::randomized_average(
      fam, 2.0, config.law, banach::MonteCarlo{config.samples, config.seed});
  est.value = avg.value;
  est.stderr_est = avg.stderr_est;
  est.samples = avg.samples;
  est.seed = avg.seed;
  return est;
}

double gamma_norm_hilbert_exact(const GridFunction& f) {
  f.validate();
  if (!f.space.is_hilbert())
    throw InvalidInput("gamma_norm_hilbert_exact: space is not a Hilbert space");
  double acc = 0.0;
  for (std::size_t k = 0; k < f.grid.cells(); ++k) {
    const double nrm = f.space.norm(f.values[k]);
    acc += f.grid.cell_masses[k] * nrm * nrm;
  }
  return std::sqrt(acc);
}

double lp_norm(const GridFunction& f, double p) {
  f.validate();
  if (!(p >= 1.0)) throw InvalidInput("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, f.space.norm(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < f.grid.cells(); ++k)
    acc += f.grid.cell_masses[k] * std::pow(f.space.norm(f.values[k]), p);
  return std::pow(acc, 1.0 / p);
}

GridFunction transform(const GridFunction& f, const Transform& action) {
  f.validate();
  if (f.grid.tag != MeasureTag::LebesgueInterval)
    throw InvalidInput("transforms act on Lebesgue line grids");

  if (const auto* tr = std::get_if<Translate>(&action)) {
    GridFunction out = f;
    for (auto& c : out.grid.coordinates) c += tr->offset;
    return out;
  }

  if (const auto* di = std::get_if<Dilate>(&action)) {
    if (!(di->factor > 0.0)) throw InvalidInput("dilate: factor must be positive");
    // f(a x) lives on cells [c_k/a +- m_k/(2a)] with the same values
    GridFunction out = f;
    for (auto& c : out.grid.coordinates) c /= di->factor;
    for (auto& m : out.grid.cell_masses) m /= di->factor;
    return out;
  }

  if (std::holds_alternative<Fourier>(action)) {
    const double h = uniform_spacing(f.grid);
    const std::size_t m = f.grid.cells();
    const double dxi = 1.0 / (h * static_cast<double>(m));
    GridFunction out;
    out.space = f.space;
    out.grid.tag = MeasureTag::LebesgueInterval;
    out.grid.cell_masses.assign(m, dxi);
    out.grid.coordinates.resize(m);
    out.values.assign(m, Vector::Zero(f.space.dim()));
    // midpoint-rule Fourier transform at the canonical frequencies; the map
    // on the weighted family is exactly unitary
    for (std::size_t j = 0; j < m; ++j) {
      const double xi = -0.5 / h + (static_cast<double>(j) + 0.5) * dxi;
      out.grid.coordinates[j] = xi;
      Vector acc = Vector::Zero(f.space.dim());
      for (std::size_t k = 0; k < m; ++k) {
        const Complex phase = std::exp(Complex(0.0, -2.0 * kPi * xi * f.grid.coordinates[k]));
        acc += phase * f.values[k];
      }
      out.values[j] = h * acc;
    }
    return out;
  }

  const auto& conv = std::get<Convolve>(action);
  const GridFunction& g = conv.kernel;
  g.validate();
  if (g.space.dim() != 1) throw InvalidInput("convolve: kernel must be scalar-valued");
  const double h = uniform_spacing(f.grid);
  const double hg = uniform_spacing(g.grid);
  if (std::abs(h - hg) > 1e-9 * h)
    throw InvalidInput("convolve: kernel and function grids must share the spacing");
  const std::size_t mf = f.grid.cells();
  const std::size_t mg = g.grid.cells();
  GridFunction out;
  out.space = f.space;
  out.grid.tag = MeasureTag::LebesgueInterval;
  const std::size_t mo = mf + mg - 1;
  out.grid.cell_masses.assign(mo, h);
  out.grid.coordinates.resize(mo);
  out.values.assign(mo, Vector::Zero(f.space.dim()));
  const double base = f.grid.coordinates[0] + g.grid.coordinates[0];
  for (std::size_t i = 0; i < mo; ++i) {
    out.grid.coordinates[i] = base + static_cast<double>(i) * h;
    Vector acc = Vector::Zero(f.space.dim());
    const std::size_t j_lo = i >= mf - 1 ? i - (mf - 1) : 0;
    const std::size_t j_hi = std::min(i, mg - 1);
    for (std::size_t j = j_lo; j <= j_hi; ++j) acc += g.values[j][0] * f.values[i - j];
    out.values[i] = h * acc;
  }
  return out;
}

double l1_mass(const GridFunction& kernel) {
  kernel.validate();
  if (kernel.space.dim() != 1) throw InvalidInput("l1_mass: kernel must be scalar-valued");
  double acc = 0.0;
  for (std::size_t k = 0; k < kernel.grid.cells(); ++k)
    acc += kernel.grid.cell_masses[k] * std::abs(kernel.values[k][0]);
  return acc;
}

GridFunction finite_difference(const GridFunction& f) {
  f.validate();
  if (f.grid.tag == MeasureTag::PlanarRegion)
    throw InvalidInput("finite_difference: one-dimensional grids only");
  const std::size_t m = f.grid.cells();
  GridFunction out = f;
  if (m == 1) {
    out.values[0] = Vector::Zero(f.space.dim());
    return out;
  }
  auto deriv_at = [&](std::size_t i0, std::size_t i1, std::size_t i2, double x) {
    // three-point Lagrange derivative, exact on quadratics
    const double x0 = f.grid.coordinates[i0], x1 = f.grid.coordinates[i1],
                 x2 = f.grid.coordinates[i2];
    const double w0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double w1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double w2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    return (w0 * f.values[i0] + w1 * f.values[i1] + w2 * f.values[i2]).eval();
  };
  if (m == 2) {
    const double dx = f.grid.coordinates[1] - f.grid.coordinates[0];
    out.values[0] = out.values[1] = ((f.values[1] - f.values[0]) / dx).eval();
    return out;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t mid = std::clamp<std::size_t>(k, 1, m - 2);
    out.values[k] = deriv_at(mid - 1, mid, mid + 1, f.grid.coordinates[k]);
  }
  return out;
}

GammaEstimate gamma_k_norm(const GridFunction& f, int k, const GammaConfig& config) {
  if (k < 0) throw InvalidInput("gamma_k_norm: k must be >= 0");
  std::vector<GridFunction> ders;
  ders.push_back(f);
  for (int j = 1; j <= k; ++j) ders.push_back(finite_difference(ders.back()));
  return gamma_k_norm(ders, config);
}

GammaEstimate gamma_k_norm(const std::vector<GridFunction>& derivatives,
                           const GammaConfig& config) {
  if (derivatives.empty()) throw InvalidInput("gamma_k_norm: empty derivative list");
  GammaEstimate total;
  total.exact = true;
  double var = 0.0;
  for (std::size_t j = 0; j < derivatives.size(); ++j) {
    GammaConfig cfg = config;
    cfg.seed = splitmix64(config.seed ^ (0x517cc1b727220a95ULL + j));
    const GammaEstimate e = gamma_norm(derivatives[j], cfg);
    total.value += e.value;
    var += e.stderr_est * e.stderr_est;
    total.basis_size = std::max(total.basis_size, e.basis_size);
    total.samples = std::max(total.samples, e.samples);
    total.exact = total.exact && e.exact;
  }
  total.stderr_est = std::sqrt(var);
  total.seed = config.seed;
  return total;
}

ProbeResult interval_bounds_probe(const GridFunction& f, const GridFunction& fprime,
                                  const Vector& f_at_b, double a, double b,
                                  const GammaConfig& config) {
  f.validate();
  fprime.validate();
  if (!(b > a)) throw InvalidInput("interval_bounds_probe: need a < b");
  const double len = b - a;

  GammaConfig cfg_f = config;
  GammaConfig cfg_fp = config;
  cfg_fp.seed = splitmix64(config.seed ^ 0xf00dULL);
  const GammaEstimate gf = gamma_norm(f, cfg_f);
  const GammaEstimate gfp = gamma_norm(fprime, cfg_fp);

  const double w11_bound = std::pow(len, -0.5) * f.space.norm(f_at_b) +
                           std::sqrt(len) * lp_norm(fprime, 1.0);
  const double sup_f = lp_norm(f, kInf);
  const double sup_bound = std::pow(len, -0.5) * gf.value + std::sqrt(len) * gfp.value;

  ProbeResult r;
  r.probe_id = "interval-bounds";
  r.params["a"] = a;
  r.params["b"] = b;
  r.params["space"] = f.space.to_string();
  r.seed = config.seed;
  r.stderr_est = std::sqrt(gf.stderr_est * gf.stderr_est + gfp.stderr_est * gfp.stderr_est);
  r.add_quantity("gamma_f", gf.value);
  r.add_quantity("w11_bound", w11_bound);
  r.add_quantity("sup_f", sup_f);
  r.add_quantity("sup_bound", sup_bound);
  r.lhs = gf.value;
  r.rhs = w11_bound;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  const double slack = 3.0 * r.stderr_est + 1e-12 * (1.0 + w11_bound + sup_bound);
  r.ordering_ok = gf.value <= w11_bound + slack && sup_f <= sup_bound + slack;
  return r;
}

ProbeResult block_partition_probe(const GridFunction& f,
                                  const std::vector<std::vector<std::size_t>>& blocks,
                                  double exponent, BlockKind kind,
                                  const GammaConfig& config) {
  f.validate();
  std::set<std::size_t> seen;
  std::size_t covered = 0;
  for (const auto& blk : blocks) {
    for (std::size_t idx : blk) {
      if (!seen.insert(idx).second)
        throw InvalidInput("block_partition_probe: blocks overlap");
      ++covered;
    }
  }
  if (kind == BlockKind::TypeLower && covered != f.grid.cells())
    throw InvalidInput("block_partition_probe: type-lower blocks must cover the grid");

  const GammaEstimate whole = gamma_norm(f, config);
  std::vector<double> parts;
  double var = whole.stderr_est * whole.stderr_est;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    GammaConfig cfg = config;
    cfg.seed = splitmix64(config.seed ^ (0xb10cULL + bi));
    const GammaEstimate e = gamma_norm(f.restrict_to(blocks[bi]), cfg);
    parts.push_back(e.value);
    var += e.stderr_est * e.stderr_est;
  }
  double agg;
  if (std::isinf(exponent)) {
    agg = parts.empty() ? 0.0 : *std::max_element(parts.begin(), parts.end());
  } else {
    double acc = 0.0;
    for (double v : parts) acc += std::pow(v, exponent);
    agg = std::pow(acc, 1.0 / exponent);
  }

  ProbeResult r;
  r.probe_id = kind == BlockKind::CotypeUpper ? "block-cotype-upper" : "block-type-lower";
  r.params["blocks"] = blocks.size();
  r.params["exponent"] = exponent;
  r.params["space"] = f.space.to_string();
  r.seed = config.seed;
  r.stderr_est = std::sqrt(var);
  r.add_quantity("block_aggregate", agg);
  r.add_quantity("whole_gamma", whole.value);
  if (kind == BlockKind::CotypeUpper) {
    r.lhs = agg;
    r.rhs = whole.value;
  } else {
    r.lhs = whole.value;
    r.rhs = agg;
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  return r;
}

ProbeResult line_embedding_probe(const GridFunction& f, const GridFunction& fprime,
                                 double p, double q, const GammaConfig& config) {
  f.validate();
  fprime.validate();
  GammaConfig cfg_fp = config;
  cfg_fp.seed = splitmix64(config.seed ^ 0x11eULL);
  const GammaEstimate gf = gamma_norm(f, config);
  const GammaEstimate gfp = gamma_norm(fprime, cfg_fp);
  const double w_side = lp_norm(f, p) + lp_norm(fprime, p);
  const double lq = lp_norm(f, q);
  const double gamma_side = gf.value + gfp.value;

  ProbeResult r;
  r.probe_id = "line-embedding";
  r.params["p"] = p;
  r.params["q"] = std::isinf(q) ? -1.0 : q;
  r.params["space"] = f.space.to_string();
  r.seed = config.seed;
  r.stderr_est = std::sqrt(gf.stderr_est * gf.stderr_est + gfp.stderr_est * gfp.stderr_est);
  r.add_quantity("gamma_f", gf.value);
  r.add_quantity("w1p_side", w_side);
  r.add_quantity("lq_f", lq);
  r.add_quantity("gamma1_side", gamma_side);
  r.lhs = gf.value;
  r.rhs = w_side;
  r.ratio = safe_ratio(gf.value, w_side);
  r.params["ratio_cotype_side"] = safe_ratio(lq, gamma_side);
  return r;
}

}  // namespace gammalab::gamma
