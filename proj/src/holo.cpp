#include "gammalab/holo.hpp"

#include <algorithm>
#include <cmath>

namespace gammalab::holo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GammaEstimate gamma_of_values(const SpaceDescriptor& space, std::vector<Vector> values,
                              const GammaConfig& config) {
  // lattice functional: unit-mass cells
  GridFunction f;
  f.space = space;
  f.grid.tag = gamma::MeasureTag::PlanarRegion;
  f.grid.cell_masses.assign(values.size(), 1.0);
  f.grid.coordinates.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    f.grid.coordinates[i] = static_cast<double>(i);
  f.values = std::move(values);
  return gamma::gamma_norm(f, config);
}

}  // namespace

bool HoloFn::contains(Complex z) const {
  if (const auto* s = std::get_if<StripDomain>(&domain))
    return std::abs(z.imag()) < s->half_width;
  const auto& sec = std::get<SectorDomain>(domain);
  if (z == Complex(0.0, 0.0)) return false;
  return std::abs(std::arg(z)) < sec.angle;
}

double HoloFn::boundary_distance(Complex z) const {
  if (const auto* s = std::get_if<StripDomain>(&domain))
    return s->half_width - std::abs(z.imag());
  const auto& sec = std::get<SectorDomain>(domain);
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  const double slack = sec.angle - std::abs(std::arg(z));
  if (slack <= 0.0) return 0.0;
  return slack >= kPi / 2.0 ? r : r * std::sin(slack);
}

void HoloFn::check_decay_certificate(int samples, std::uint64_t seed) const {
  if (!decay) return;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Complex z;
    if (on_strip()) {
      const auto& s = std::get<StripDomain>(domain);
      const double u = 20.0 * (rng.next_unit() - 0.5);
      const double v = s.half_width * 1.8 * (rng.next_unit() - 0.5);
      z = Complex(u, v);
      const double bound =
          decay->constant * std::exp(-decay->epsilon * std::abs(u)) + 1e-12;
      if (space.norm(eval(z)) > bound * (1.0 + 1e-9))
        throw NumericalFailure("decay certificate violated on strip");
    } else {
      const auto& sec = std::get<SectorDomain>(domain);
      const double r = std::exp(10.0 * (rng.next_unit() - 0.5));
      const double th = sec.angle * 1.8 * (rng.next_unit() - 0.5);
      z = std::polar(r, th);
      const double re = std::pow(r, decay->epsilon);
      const double bound = decay->constant * re / (1.0 + re * re) + 1e-12;
      if (space.norm(eval(z)) > bound * (1.0 + 1e-9))
        throw NumericalFailure("decay certificate violated on sector");
    }
  }
}

HoloFn scalar_holo(std::variant<StripDomain, SectorDomain> domain,
                   std::function<Complex(Complex)> fn,
                   std::optional<DecayCertificate> decay) {
  HoloFn f;
  f.space = SpaceDescriptor::lp(2.0, 1);
  f.domain = domain;
  f.decay = decay;
  f.eval = [fn = std::move(fn)](Complex z) {
    Vector v(1);
    v[0] = fn(z);
    return v;
  };
  return f;
}

HoloFn rank_one_holo(const SpaceDescriptor& space, const Vector& x,
                     std::variant<StripDomain, SectorDomain> domain,
                     std::function<Complex(Complex)> fn,
                     std::optional<DecayCertificate> decay) {
  if (x.size() != space.dim()) throw InvalidInput("rank_one_holo: dimension mismatch");
  HoloFn f;
  f.space = space;
  f.domain = domain;
  f.decay = decay;
  f.eval = [fn = std::move(fn), x](Complex z) { return (fn(z) * x).eval(); };
  return f;
}

Vector cauchy_derivative(const HoloFn& f, Complex a, int order, double radius, int nodes) {
  if (order < 0) throw InvalidInput("cauchy_derivative: order must be >= 0");
  if (nodes < 4) throw InvalidInput("cauchy_derivative: need at least 4 nodes");
  if (radius <= 0.0) radius = 0.5 * f.boundary_distance(a);
  if (!(radius > 0.0) || f.boundary_distance(a) <= radius * (1.0 + 1e-12))
    throw InvalidInput("cauchy_derivative: disk exits the declared domain");

  // f^(n)(a) = n!/(2 pi) int f(a + R e^{i t}) e^{-i n t} dt / R^n
  Vector acc = Vector::Zero(f.space.dim());
  for (int m = 0; m < nodes; ++m) {
    const double theta = 2.0 * kPi * static_cast<double>(m) / nodes;
    const Complex w = std::polar(radius, theta);
    acc += f.eval(a + w) * std::exp(Complex(0.0, -order * theta));
  }
  double factorial = 1.0;
  for (int j = 2; j <= order; ++j) factorial *= j;
  return (acc * (factorial / (nodes * std::pow(radius, order)))).eval();
}

PlanarRegion strip_planar_grid(double x_lo, double x_hi, double y_lo, double y_hi,
                               std::size_t nx, std::size_t ny) {
  if (!(x_hi > x_lo) || !(y_hi > y_lo) || nx == 0 || ny == 0)
    throw InvalidInput("strip_planar_grid: bad extent");
  PlanarRegion region;
  const double hx = (x_hi - x_lo) / static_cast<double>(nx);
  const double hy = (y_hi - y_lo) / static_cast<double>(ny);
  region.midpoints.reserve(nx * ny);
  region.masses.assign(nx * ny, hx * hy);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      region.midpoints.emplace_back(x_lo + (ix + 0.5) * hx, y_lo + (iy + 0.5) * hy);
  return region;
}

PlanarRegion disk_planar_grid(Complex center, double radius, std::size_t n_across) {
  if (!(radius > 0.0) || n_across < 2) throw InvalidInput("disk_planar_grid: bad parameters");
  PlanarRegion region;
  const double h = 2.0 * radius / static_cast<double>(n_across);
  for (std::size_t iy = 0; iy < n_across; ++iy) {
    for (std::size_t ix = 0; ix < n_across; ++ix) {
      const Complex z = center + Complex(-radius + (ix + 0.5) * h, -radius + (iy + 0.5) * h);
      if (std::abs(z - center) < radius) {
        region.midpoints.push_back(z);
        region.masses.push_back(h * h);
      }
    }
  }
  return region;
}

GridFunction sample_planar(const HoloFn& f, const PlanarRegion& region) {
  GridFunction g;
  g.space = f.space;
  g.grid = gamma::MeasuredGrid::planar(region.masses);
  g.values.reserve(region.midpoints.size());
  for (const Complex& z : region.midpoints) g.values.push_back(f.eval(z));
  g.validate();
  return g;
}

GridFunction sample_line(const HoloFn& f, const MeasuredGrid& grid, double level) {
  return gamma::sample_on_grid(grid, f.space,
                               [&](double t) { return f.eval(Complex(t, level)); });
}

GridFunction sample_ray(const HoloFn& f, const MeasuredGrid& log_grid, double angle) {
  GridFunction g = gamma::sample_on_grid(log_grid, f.space, [&](double u) {
    return f.eval(std::polar(std::exp(u), angle));
  });
  g.grid.tag = gamma::MeasureTag::HalflineDtOverT;
  return g;
}

namespace {

double sobolev_norm(const HoloFn& f, const PlanarRegion& region, int l, double p) {
  double total = 0.0;
  for (int j = 0; j <= l; ++j) {
    GridFunction g;
    g.space = f.space;
    g.grid = gamma::MeasuredGrid::planar(region.masses);
    g.values.reserve(region.midpoints.size());
    for (const Complex& z : region.midpoints)
      g.values.push_back(j == 0 ? f.eval(z) : cauchy_derivative(f, z, j));
    total += gamma::lp_norm(g, p);
  }
  return total;
}

}  // namespace

ProbeResult disk_nesting_probe(const HoloFn& f, Complex center, double r1, double r2,
                               double r3, int k, int l, double p,
                               std::size_t cells_per_diameter, const GammaConfig& config) {
  if (!(0.0 < r1 && r1 < r2 && r2 < r3)) throw InvalidInput("disk_nesting_probe: need r1<r2<r3");
  if (f.boundary_distance(center) <= r3)
    throw InvalidInput("disk_nesting_probe: outer disk exits the domain");

  const double h = 2.0 * r3 / static_cast<double>(cells_per_diameter);
  const auto cells_for = [&](double r) {
    return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(2.0 * r / h)));
  };
  const PlanarRegion d1 = disk_planar_grid(center, r1, cells_for(r1));
  const PlanarRegion d2 = disk_planar_grid(center, r2, cells_for(r2));
  const PlanarRegion d3 = disk_planar_grid(center, r3, cells_for(r3));

  const double w1 = sobolev_norm(f, d1, l, p);
  const double w3 = sobolev_norm(f, d3, l, p);

  double gamma_mid = 0.0;
  double var = 0.0;
  for (int j = 0; j <= k; ++j) {
    GridFunction g;
    g.space = f.space;
    g.grid = gamma::MeasuredGrid::planar(d2.masses);
    g.values.reserve(d2.midpoints.size());
    for (const Complex& z : d2.midpoints)
      g.values.push_back(j == 0 ? f.eval(z) : cauchy_derivative(f, z, j));
    GammaConfig cfg = config;
    cfg.seed = splitmix64(config.seed ^ (0xd15cULL + j));
    const GammaEstimate e = gamma::gamma_norm(g, cfg);
    gamma_mid += e.value;
    var += e.stderr_est * e.stderr_est;
  }

  ProbeResult r;
  r.probe_id = "disk-nesting";
  r.params["r1"] = r1;
  r.params["r2"] = r2;
  r.params["r3"] = r3;
  r.params["k"] = k;
  r.params["l"] = l;
  r.params["p"] = std::isinf(p) ? -1.0 : p;
  r.params["space"] = f.space.to_string();
  if (d1.midpoints.size() < 16) r.params["warning"] = "inner-disk grid very coarse";
  r.seed = config.seed;
  r.stderr_est = std::sqrt(var);
  r.add_quantity("w_lp_inner", w1);
  r.add_quantity("gamma_k_mid", gamma_mid);
  r.add_quantity("w_lp_outer", w3);
  r.params["ratio_inner"] = safe_ratio(w1, gamma_mid);
  r.params["ratio_outer"] = safe_ratio(gamma_mid, w3);
  r.lhs = w1;
  r.rhs = w3;
  r.ratio = safe_ratio(w1, w3);
  return r;
}

// --- Poisson -----------------------------------------------------------------

double strip_poisson_kernel0(double x, double y) {
  return 0.5 * std::sin(kPi * y) / (std::cosh(kPi * x) - std::cos(kPi * y));
}

double strip_poisson_kernel1(double x, double y) {
  return 0.5 * std::sin(kPi * y) / (std::cosh(kPi * x) + std::cos(kPi * y));
}

namespace {

// kernels for S_b = {|Im| < b}: k0 pairs with the line -b, k1 with +b
struct StripKernels {
  double b;
  double ynorm;  // (y + b) / (2b) in (0,1)
  double k0(double x) const { return strip_poisson_kernel0(x / (2.0 * b), ynorm) / (2.0 * b); }
  double k1(double x) const { return strip_poisson_kernel1(x / (2.0 * b), ynorm) / (2.0 * b); }
  // offset beyond which the remaining kernel mass is below 1e-10
  double cutoff() const {
    // tail of 1/(cosh(pi X) -+ cos) ~ (2/pi) e^{-pi X}
    return 2.0 * b * (std::log(2.0 / (kPi * 1e-10)) / kPi + 1.0);
  }
};

}  // namespace

double strip_poisson_mass(const MeasuredGrid& grid, double y, double b) {
  if (!(std::abs(y) < b)) throw InvalidInput("strip_poisson_mass: need |y| < b");
  grid.validate();
  const StripKernels ker{b, (y + b) / (2.0 * b)};
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.cells(); ++i) {
    const double x = grid.coordinates[i];
    mass += grid.cell_masses[i] * (ker.k0(x) + ker.k1(x));
  }
  return mass;
}

GridFunction poisson_extend(const GridFunction& trace_plus, const GridFunction& trace_minus,
                            double y, double b) {
  trace_plus.validate();
  trace_minus.validate();
  if (!(std::abs(y) < b)) throw InvalidInput("poisson_extend: need |y| < b");
  if (trace_plus.grid.cells() != trace_minus.grid.cells())
    throw InvalidInput("poisson_extend: traces must share the grid");
  for (std::size_t i = 0; i < trace_plus.grid.cells(); ++i)
    if (std::abs(trace_plus.grid.coordinates[i] - trace_minus.grid.coordinates[i]) > 1e-12)
      throw InvalidInput("poisson_extend: traces must share the grid");

  const std::size_t m = trace_plus.grid.cells();
  const auto& coords = trace_plus.grid.coordinates;
  const StripKernels ker{b, (y + b) / (2.0 * b)};
  const double cut = ker.cutoff();

  GridFunction out = trace_plus;
  parallel_for(m, [&](std::size_t i) {
    Vector acc = Vector::Zero(trace_plus.space.dim());
    const double xi = coords[i];
    for (std::size_t kcell = 0; kcell < m; ++kcell) {
      const double dx = xi - coords[kcell];
      if (std::abs(dx) > cut) continue;
      const double w = trace_plus.grid.cell_masses[kcell];
      acc += w * (ker.k0(dx) * trace_minus.values[kcell] + ker.k1(dx) * trace_plus.values[kcell]);
    }
    out.values[i] = acc;
  });
  return out;
}

// --- Lattice gamma and the strip chain ---------------------------------------

namespace {

int truncation_from_certificate(const HoloFn& f, double tail_tol) {
  if (!f.decay)
    throw InvalidInput("lattice_gamma: no decay certificate and no explicit truncation");
  const double c = f.decay->constant;
  const double eps = f.decay->epsilon;
  const double denom = 1.0 - std::exp(-eps);
  const int n = static_cast<int>(std::ceil(std::log(c / (tail_tol * denom)) / eps));
  return std::clamp(n, 1, 100000);
}

}  // namespace

GammaEstimate lattice_gamma(const HoloFn& f, double shift, double level,
                            std::optional<int> truncation, const GammaConfig& config,
                            double tail_tol) {
  const int n = truncation ? *truncation : truncation_from_certificate(f, tail_tol);
  std::vector<Vector> values;
  values.reserve(2 * n + 1);
  for (int j = -n; j <= n; ++j)
    values.push_back(f.eval(Complex(static_cast<double>(j) + shift, level)));
  return gamma_of_values(f.space, std::move(values), config);
}

ProbeResult strip_chain_probe(const HoloFn& f, double a, double b,
                              const StripChainConfig& config) {
  const auto* strip = std::get_if<StripDomain>(&f.domain);
  if (!strip) throw InvalidInput("strip_chain_probe: strip-domain functions only");
  if (!(0.0 <= a && a < b && b < strip->half_width))
    throw InvalidInput("strip_chain_probe: need 0 <= a < b < alpha");

  const int n_lat =
      config.truncation ? *config.truncation : truncation_from_certificate(f, 1e-9);
  const double deriv_radius = 0.45 * (strip->half_width - b);

  auto lattice_values = [&](double shift, double level, bool derivative) {
    std::vector<Vector> vals;
    vals.reserve(2 * n_lat + 1);
    for (int j = -n_lat; j <= n_lat; ++j) {
      const Complex z(static_cast<double>(j) + shift, level);
      vals.push_back(derivative ? cauchy_derivative(f, z, 1, deriv_radius, 32) : f.eval(z));
    }
    return vals;
  };
  auto lattice_norm = [&](double shift, double level, bool derivative, std::uint64_t salt) {
    GammaConfig cfg = config.gamma;
    cfg.seed = splitmix64(config.gamma.seed ^ salt);
    return gamma_of_values(f.space, lattice_values(shift, level, derivative), cfg).value;
  };

  // (1) lattice sums at the inner level: sum_j sup_s [gamma(f) + gamma(f')]
  double eq1 = 0.0;
  std::uint64_t salt = 1;
  for (int j : {-1, 1}) {
    double best = 0.0;
    for (int is = 0; is < config.s_points; ++is) {
      const double s =
          config.s_points == 1
              ? 0.0
              : static_cast<double>(is) / static_cast<double>(config.s_points - 1);
      const double level = j * a;
      const double g_f = lattice_norm(s, level, false, salt);
      salt += 1;
      const double g_fp = lattice_norm(s, level, true, salt);
      salt += 1;
      best = std::max(best, g_f + g_fp);
    }
    eq1 += best;
  }

  // (2) gamma over the full strip S_b on a planar grid
  const double half = config.line_halfwidth;
  const PlanarRegion strip_grid =
      strip_planar_grid(-half, half, -b, b, config.line_cells, config.planar_rows);
  GammaConfig cfg_strip = config.gamma;
  cfg_strip.seed = splitmix64(config.gamma.seed ^ 0x57121ULL);
  const GammaEstimate gamma_strip = gamma::gamma_norm(sample_planar(f, strip_grid), cfg_strip);

  // (3) gamma over the two boundary lines
  const MeasuredGrid line = MeasuredGrid::uniform(-half, half, config.line_cells);
  double gamma_lines = 0.0;
  double lines_var = 0.0;
  for (int j : {-1, 1}) {
    GammaConfig cfg = config.gamma;
    cfg.seed = splitmix64(config.gamma.seed ^ (0x11e5ULL + j));
    const GammaEstimate e = gamma::gamma_norm(sample_line(f, line, j * b), cfg);
    gamma_lines += e.value;
    lines_var += e.stderr_est * e.stderr_est;
  }

  // (4) derivative-integral bound at the boundary level
  double eq3 = 0.0;
  for (int j : {-1, 1}) {
    double integral = 0.0;
    for (int is = 0; is < config.s_points; ++is) {
      const double s = (static_cast<double>(is) + 0.5) / static_cast<double>(config.s_points);
      integral += lattice_norm(s, j * b, true, salt++);
    }
    integral /= static_cast<double>(config.s_points);
    eq3 += integral + lattice_norm(0.0, j * b, false, salt++);
  }

  ProbeResult r;
  r.probe_id = "strip-chain";
  r.params["a"] = a;
  r.params["b"] = b;
  r.params["lattice_halfwidth"] = n_lat;
  r.params["space"] = f.space.to_string();
  r.seed = config.gamma.seed;
  r.stderr_est = std::sqrt(gamma_strip.stderr_est * gamma_strip.stderr_est + lines_var);
  r.add_quantity("lattice_sum_inner", eq1);
  r.add_quantity("gamma_strip_b", gamma_strip.value);
  r.add_quantity("gamma_lines_b", gamma_lines);
  r.add_quantity("derivative_integral_bound", eq3);
  r.params["ratio_lattice"] = safe_ratio(eq1, gamma_strip.value);
  r.lhs = gamma_strip.value;
  r.rhs = gamma_lines;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  const double slack = 3.0 * r.stderr_est + 1e-9;
  r.ordering_ok = gamma_strip.value <= gamma_lines + slack && gamma_lines <= eq3 + slack;
  return r;
}

// --- Five-term chain ----------------------------------------------------------

namespace {

struct LevelSample {
  std::vector<Vector> values;  // one per t-cell
};

double y_norm_of(const YNorm& y, const SpaceDescriptor& space, const MeasuredGrid& tgrid,
                 const LevelSample& line, const GammaConfig& cfg) {
  GridFunction g;
  g.space = space;
  g.grid = tgrid;
  g.values = line.values;
  if (y.kind == YNorm::Kind::Lp) return gamma::lp_norm(g, y.p);
  return gamma::gamma_norm(g, cfg).value;
}

bool y_norm_quadratic(const YNorm& y, const SpaceDescriptor& space) {
  if (y.kind == YNorm::Kind::Gamma) return space.is_hilbert();
  return y.p == 2.0 && space.is_hilbert();
}

}  // namespace

ProbeResult y_chain_probe(const HoloFn& f, double a, double b, double c, double d,
                          const YNorm& y_norm, int k, const YChainConfig& config) {
  const auto* strip = std::get_if<StripDomain>(&f.domain);
  if (!strip) throw InvalidInput("y_chain_probe: strip-domain functions only");
  if (!(0.0 <= a && a < b && b < c && c < d && d < strip->half_width))
    throw InvalidInput("y_chain_probe: need 0 <= a < b < c < d < alpha");
  if (k < 1) throw InvalidInput("y_chain_probe: k must be >= 1");

  const MeasuredGrid tgrid =
      MeasuredGrid::uniform(-config.line_halfwidth, config.line_halfwidth, config.line_cells);
  const double deriv_radius = 0.45 * (strip->half_width - d);

  auto sample_level = [&](double s, int order) {
    LevelSample line;
    line.values.reserve(tgrid.cells());
    for (double t : tgrid.coordinates) {
      const Complex z(t, s);
      line.values.push_back(order == 0 ? f.eval(z)
                                       : cauchy_derivative(f, z, order, deriv_radius, 32));
    }
    return line;
  };
  std::uint64_t salt = 0x9ca1ULL;
  auto norm_at = [&](double s, int order) {
    GammaConfig cfg = config.gamma;
    cfg.seed = splitmix64(config.gamma.seed ^ (salt++));
    return y_norm_of(y_norm, f.space, tgrid, sample_level(s, order), cfg);
  };

  // (1) sup over [-a, a]
  double q1 = 0.0;
  for (int i = 0; i < config.s_points; ++i) {
    const double s = config.s_points == 1
                         ? 0.0
                         : -a + 2.0 * a * static_cast<double>(i) / (config.s_points - 1);
    q1 = std::max(q1, norm_at(s, 0));
  }

  // (2) integral over (-b, b), midpoint rule
  double q2 = 0.0;
  const double hs = 2.0 * b / static_cast<double>(config.level_cells);
  for (std::size_t i = 0; i < config.level_cells; ++i)
    q2 += hs * norm_at(-b + (static_cast<double>(i) + 0.5) * hs, 0);

  // (3) gamma over levels of derivatives up to k, Y-valued
  double q3 = 0.0;
  double q3_var = 0.0;
  for (int order = 0; order <= k; ++order) {
    std::vector<LevelSample> levels(config.level_cells);
    for (std::size_t i = 0; i < config.level_cells; ++i)
      levels[i] = sample_level(-b + (static_cast<double>(i) + 0.5) * hs, order);

    if (y_norm_quadratic(y_norm, f.space)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < config.level_cells; ++i) {
        GammaConfig cfg = config.gamma;
        const double nrm = y_norm_of(y_norm, f.space, tgrid, levels[i], cfg);
        acc += hs * nrm * nrm;
      }
      q3 += std::sqrt(acc);
    } else {
      // Monte Carlo over gaussian level coefficients
      const std::size_t n_samples = config.gamma.samples;
      std::vector<double> powered(n_samples);
      parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = Rng::stream(splitmix64(config.gamma.seed ^ (0x9c3ULL + order)), i);
        LevelSample mix;
        mix.values.assign(tgrid.cells(), Vector::Zero(f.space.dim()));
        for (std::size_t lv = 0; lv < config.level_cells; ++lv) {
          const double coeff = rng.next_gauss() * std::sqrt(hs);
          for (std::size_t t = 0; t < tgrid.cells(); ++t)
            mix.values[t] += coeff * levels[lv].values[t];
        }
        GammaConfig cfg = config.gamma;
        cfg.seed = splitmix64(config.gamma.seed ^ (0x77fULL + order) ^ i);
        cfg.samples = 512;  // inner estimate when Y itself is a gamma norm
        const double nrm = y_norm_of(y_norm, f.space, tgrid, mix, cfg);
        powered[i] = nrm * nrm;
      });
      double mean = 0.0;
      for (double v : powered) mean += v;
      mean /= static_cast<double>(n_samples);
      q3 += std::sqrt(mean);
      // jackknife on the squared samples
      double loo_mean = 0.0;
      std::vector<double> loo(n_samples);
      for (std::size_t i = 0; i < n_samples; ++i) {
        loo[i] = std::sqrt((mean * n_samples - powered[i]) / (n_samples - 1));
        loo_mean += loo[i];
      }
      loo_mean /= static_cast<double>(n_samples);
      double ss = 0.0;
      for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
      q3_var += ss * static_cast<double>(n_samples - 1) / static_cast<double>(n_samples);
    }
  }

  // (4) sup over [-b, b] of derivative norms up to k+1
  double q4 = 0.0;
  for (int i = 0; i < config.s_points; ++i) {
    const double s = config.s_points == 1
                         ? 0.0
                         : -b + 2.0 * b * static_cast<double>(i) / (config.s_points - 1);
    double total = 0.0;
    for (int order = 0; order <= k + 1; ++order) total += norm_at(s, order);
    q4 = std::max(q4, total);
  }

  // (5) sup over [-c, c]
  double q5 = 0.0;
  for (int i = 0; i < config.s_points; ++i) {
    const double s = config.s_points == 1
                         ? 0.0
                         : -c + 2.0 * c * static_cast<double>(i) / (config.s_points - 1);
    q5 = std::max(q5, norm_at(s, 0));
  }

  // (6) boundary sum at +-d
  const double q6 = norm_at(d, 0) + norm_at(-d, 0);

  ProbeResult r;
  r.probe_id = "y-chain";
  r.params["a"] = a;
  r.params["b"] = b;
  r.params["c"] = c;
  r.params["d"] = d;
  r.params["k"] = k;
  r.params["y_norm"] = y_norm.kind == YNorm::Kind::Gamma
                           ? std::string("gamma")
                           : "lp:" + format_double(y_norm.p);
  r.params["space"] = f.space.to_string();
  r.seed = config.gamma.seed;
  r.stderr_est = std::sqrt(q3_var);
  r.add_quantity("sup_inner", q1);
  r.add_quantity("level_integral", q2);
  r.add_quantity("gamma_levels_k", q3);
  r.add_quantity("sup_derivatives", q4);
  r.add_quantity("sup_mid", q5);
  r.add_quantity("boundary_sum", q6);
  r.lhs = q1;
  r.rhs = q6;
  r.ratio = safe_ratio(q1, q6);
  return r;
}

// --- Conformal transfer --------------------------------------------------------

HoloFn map_strip_to_sector(const HoloFn& f) {
  const auto* strip = std::get_if<StripDomain>(&f.domain);
  if (!strip) throw InvalidInput("map_strip_to_sector: input must live on a strip");
  if (!(strip->half_width < kPi))
    throw InvalidInput("map_strip_to_sector: sector angle would reach pi");
  HoloFn g;
  g.space = f.space;
  g.domain = SectorDomain{strip->half_width};
  g.decay = f.decay;
  g.eval = [inner = f.eval](Complex w) { return inner(std::log(w)); };
  return g;
}

HoloFn map_sector_to_strip(const HoloFn& f) {
  const auto* sec = std::get_if<SectorDomain>(&f.domain);
  if (!sec) throw InvalidInput("map_sector_to_strip: input must live on a sector");
  HoloFn g;
  g.space = f.space;
  g.domain = StripDomain{sec->angle};
  g.decay = f.decay;
  g.eval = [inner = f.eval](Complex z) { return inner(std::exp(z)); };
  return g;
}

// --- Sinc witness family --------------------------------------------------------

Complex csinc(Complex w) {
  if (std::abs(w) < 1e-2) {
    const Complex w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

SincWitnessFamily sinc_witness(int count, int base, double level_b,
                               const banach::VectorFamily& coefficients) {
  if (base < 2) throw InvalidInput("sinc_witness: base must be an integer >= 2");
  if (count < 1 || static_cast<int>(coefficients.size()) != count)
    throw InvalidInput("sinc_witness: coefficient count mismatch");
  coefficients.validate();
  SincWitnessFamily fam;
  fam.base = base;
  fam.level_b = level_b;
  fam.coefficients = coefficients;
  fam.odd_base_warning = (base % 2) != 0;
  fam.centers_over_2pi.resize(count);
  double rn = static_cast<double>(base);
  for (int n = 0; n < count; ++n) {
    fam.centers_over_2pi[n] = 1.5 * rn;  // c_n / (2 pi), integer for even bases
    rn *= static_cast<double>(base);
  }
  return fam;
}

Complex SincWitnessFamily::line_value(int n, double t, int j, double b) const {
  const double dt = t - centers_over_2pi[n];
  return 2.0 * csinc(Complex(2.0 * kPi * dt, j * b));
}

Complex SincWitnessFamily::modulated_indicator_ft(int n, double t, int j, double b) const {
  // int_{-1}^{1} e^{i c_n x + j b x} e^{-2 pi i t x} dx = 2 sinh(w)/w
  const double c_n = 2.0 * kPi * centers_over_2pi[n];
  const Complex w(j * b, c_n - 2.0 * kPi * t);
  if (std::abs(w) < 1e-2) {
    const Complex w2 = w * w;
    return 2.0 * (1.0 + w2 / 6.0 + w2 * w2 / 120.0);
  }
  return 2.0 * std::sinh(w) / w;
}

Vector SincWitnessFamily::eval_line(double t, int j, double b) const {
  Vector acc = Vector::Zero(coefficients.space.dim());
  for (int n = 0; n < count(); ++n) acc += line_value(n, t, j, b) * coefficients.vectors[n];
  return acc;
}

Vector SincWitnessFamily::eval(Complex z) const {
  Vector acc = Vector::Zero(coefficients.space.dim());
  for (int n = 0; n < count(); ++n) {
    const Complex w = 2.0 * kPi * (z - centers_over_2pi[n]);
    acc += 2.0 * csinc(w) * coefficients.vectors[n];
  }
  return acc;
}

HoloFn SincWitnessFamily::to_holo(double strip_half_width) const {
  HoloFn f;
  f.space = coefficients.space;
  f.domain = StripDomain{strip_half_width};
  f.eval = [fam = *this](Complex z) { return fam.eval(z); };
  return f;
}

MeasuredGrid SincWitnessFamily::window_grid(double halfwidth, double cell_h) const {
  if (!(halfwidth > 0.0) || !(cell_h > 0.0)) throw InvalidInput("window_grid: bad parameters");
  // merge overlapping windows around the centers
  std::vector<std::pair<double, double>> intervals;
  for (double t : centers_over_2pi) {
    const double lo = t - halfwidth;
    const double hi = t + halfwidth;
    if (!intervals.empty() && lo <= intervals.back().second)
      intervals.back().second = hi;
    else
      intervals.emplace_back(lo, hi);
  }
  MeasuredGrid grid;
  grid.tag = gamma::MeasureTag::LebesgueInterval;
  for (const auto& [lo, hi] : intervals) {
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / cell_h));
    const double h = (hi - lo) / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      grid.coordinates.push_back(lo + (static_cast<double>(i) + 0.5) * h);
      grid.cell_masses.push_back(h);
    }
  }
  grid.validate();
  return grid;
}

// --- Theorem probes -------------------------------------------------------------

ProbeResult theorem_probe(const HoloFn& f, banach::ProbeKind kind, double exponent,
                          const ProbeGeometry& geometry, const MeasuredGrid& grid,
                          const GammaConfig& config) {
  double a, b;
  bool on_sector = false;
  if (const auto* sg = std::get_if<StripGeometry>(&geometry)) {
    a = sg->a;
    b = sg->b;
    const auto* strip = std::get_if<StripDomain>(&f.domain);
    if (!strip) throw InvalidInput("theorem_probe: strip geometry needs a strip function");
    if (!(0.0 <= a && a < b && b < strip->half_width))
      throw InvalidInput("theorem_probe: need 0 <= a < b < alpha");
  } else {
    on_sector = true;
    const auto& gg = std::get<SectorGeometry>(geometry);
    a = gg.a;
    b = gg.b;
    const auto* sec = std::get_if<SectorDomain>(&f.domain);
    if (!sec) throw InvalidInput("theorem_probe: sector geometry needs a sector function");
    if (!(0.0 <= a && a < b && b < sec->angle && sec->angle < kPi))
      throw InvalidInput("theorem_probe: need 0 <= a < b < sigma < pi");
  }

  auto line_at = [&](double level) {
    return on_sector ? sample_ray(f, grid, level) : sample_line(f, grid, level);
  };

  const double gamma_level = kind == banach::ProbeKind::Type ? a : b;
  const double lp_level = kind == banach::ProbeKind::Type ? b : a;

  double gamma_sum = 0.0;
  double var = 0.0;
  for (int j : {-1, 1}) {
    GammaConfig cfg = config;
    cfg.seed = splitmix64(config.seed ^ (0x7e0ULL + j));
    const GammaEstimate e = gamma::gamma_norm(line_at(j * gamma_level), cfg);
    gamma_sum += e.value;
    var += e.stderr_est * e.stderr_est;
  }
  double lp_sum = 0.0;
  for (int j : {-1, 1}) lp_sum += gamma::lp_norm(line_at(j * lp_level), exponent);

  ProbeResult r;
  r.probe_id = kind == banach::ProbeKind::Type ? "type-theorem" : "cotype-theorem";
  r.params["a"] = a;
  r.params["b"] = b;
  r.params["geometry"] = on_sector ? "sector" : "strip";
  r.params["exponent"] = std::isinf(exponent) ? -1.0 : exponent;
  r.params["space"] = f.space.to_string();
  r.params["cells"] = grid.cells();
  r.seed = config.seed;
  r.stderr_est = std::sqrt(var);
  if (kind == banach::ProbeKind::Type) {
    r.add_quantity("gamma_lines_inner", gamma_sum);
    r.add_quantity("lp_lines_outer", lp_sum);
    r.lhs = gamma_sum;
    r.rhs = lp_sum;
  } else {
    r.add_quantity("lq_lines_inner", lp_sum);
    r.add_quantity("gamma_lines_outer", gamma_sum);
    r.lhs = lp_sum;
    r.rhs = gamma_sum;
  }
  r.ratio = safe_ratio(r.lhs, r.rhs);
  return r;
}

}  // namespace gammalab::holo
