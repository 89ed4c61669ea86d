// gammalab: experiment runner for the gamma-norm / type-cotype / calculus
// probe suite. Subcommands: run, report, list-probes.
//
// Exit codes: 0 success, 1 input error, 2 probe assertion failure.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "gammalab/calculus.hpp"
#include "gammalab/gamma.hpp"
#include "gammalab/holo.hpp"
#include "gammalab/interp.hpp"
#include "gammalab/probe.hpp"

using namespace gammalab;

namespace {

// ---------------------------------------------------------------------------
// Experiment configuration: flat key-value map; CLI flags override file keys.
// ---------------------------------------------------------------------------

struct Params {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  std::string str(const std::string& key, const std::string& def = "") const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
  }
  double num(const std::string& key, double def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    if (it->second == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(it->second);
  }
  long integer(const std::string& key, long def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : std::stol(it->second);
  }
  std::uint64_t seed() const {
    if (!has("seed")) throw InvalidInput("config: seed is mandatory");
    return static_cast<std::uint64_t>(std::stoull(str("seed")));
  }
};

Params load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);
  Params p;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) p.kv[key] = value;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Shared builders
// ---------------------------------------------------------------------------

banach::SpaceDescriptor space_of(const Params& p, const std::string& def = "lp:2:4") {
  return banach::SpaceDescriptor::parse(p.str("space", def));
}

holo::ProbeGeometry geometry_of(const Params& p, const std::string& def = "strip:0.05:0.15") {
  const std::string spec = p.str("geometry", def);
  std::stringstream ss(spec);
  std::string kind, sa, sb;
  std::getline(ss, kind, ':');
  std::getline(ss, sa, ':');
  std::getline(ss, sb, ':');
  if (sa.empty() || sb.empty()) throw InvalidInput("bad geometry spec: " + spec);
  const double a = std::stod(sa), b = std::stod(sb);
  if (kind == "strip") return holo::StripGeometry{a, b};
  if (kind == "sector") return holo::SectorGeometry{a, b};
  throw InvalidInput("unknown geometry kind: " + kind);
}

calculus::SectorialOperator operator_of(const Params& p,
                                        const std::string& def = "diag:1,2,5") {
  const std::string spec = p.str("operator", def);
  if (spec.rfind("csv:", 0) == 0) {
    std::ifstream in(spec.substr(4));
    if (!in) throw InvalidInput("cannot open operator csv: " + spec.substr(4));
    return calculus::SectorialOperator::read_csv(in);
  }
  return calculus::SectorialOperator::from_named(spec);
}

banach::Vector random_vector(int dim, Rng& rng) {
  banach::Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = Complex(rng.next_gauss(), rng.next_gauss());
  return x;
}

gamma::GammaConfig gamma_config(const Params& p, std::uint64_t salt) {
  gamma::GammaConfig cfg;
  cfg.samples = static_cast<std::size_t>(p.integer("samples", 4000));
  cfg.seed = splitmix64(p.seed() ^ salt);
  return cfg;
}

// the space's coordinate count must match the operator; keep the exponent and
// adapt the dimension when they disagree
banach::SpaceDescriptor match_space_dim(const banach::SpaceDescriptor& space, int dim,
                                        bool* adjusted) {
  if (space.dim() == dim) {
    *adjusted = false;
    return space;
  }
  *adjusted = true;
  return banach::SpaceDescriptor::lp(space.exponent(), dim);
}

// ---------------------------------------------------------------------------
// Probe runners
// ---------------------------------------------------------------------------

using Runner = std::function<std::vector<ProbeResult>(const Params&)>;

std::vector<ProbeResult> run_theorem(const Params& p, banach::ProbeKind kind) {
  const auto space = space_of(p, "lp:4:8");
  const double expo = kind == banach::ProbeKind::Type ? p.num("p", 2.0) : p.num("q", 2.0);
  const auto geometry = geometry_of(p);
  const int base = static_cast<int>(p.integer("base", 2));
  const double window = p.num("window", 12.0);
  const double cell_h = p.num("cell-h", 1.0 / 8.0);

  std::vector<int> sizes;
  {
    std::stringstream ss(p.str("witnesses", std::to_string(space.dim())));
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
  }

  std::vector<ProbeResult> rows;
  for (int n : sizes) {
    const auto coeff_space = banach::SpaceDescriptor::lp(space.exponent(), n);
    const auto fam =
        holo::sinc_witness(n, base, 1.0, banach::standard_basis_family(coeff_space, n));
    const auto grid = fam.window_grid(window, cell_h);
    holo::HoloFn f;
    gamma::MeasuredGrid probe_grid = grid;
    if (std::holds_alternative<holo::SectorGeometry>(geometry)) {
      // transfer the witness to the sector; the window grid becomes the log
      // grid of the rays
      f = holo::map_strip_to_sector(fam.to_holo(3.0));
      probe_grid.tag = gamma::MeasureTag::HalflineDtOverT;
    } else {
      f = fam.to_holo(3.0);
    }
    auto r = holo::theorem_probe(f, kind, expo, geometry, probe_grid,
                                 gamma_config(p, 0x7411 + static_cast<std::uint64_t>(n)));
    r.params["N"] = n;
    // keyed by exponent so report curves separate the probe families
    r.probe_id += (kind == banach::ProbeKind::Type ? "-p" : "-q") + format_double(expo);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ProbeResult> run_hilbert_oracle(const Params& p) {
  const int trials = static_cast<int>(p.integer("trials", 50));
  const std::uint64_t seed = p.seed();
  std::vector<ProbeResult> rows;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial));
    const int dim = 2 + static_cast<int>(rng.next_u64() % 63);
    const std::size_t cells = 8 + rng.next_u64() % 57;
    gamma::GridFunction f;
    f.grid = gamma::MeasuredGrid::uniform(0.0, 1.0, cells);
    f.space = banach::SpaceDescriptor::lp(2, dim);
    for (std::size_t k = 0; k < cells; ++k) {
      f.values.push_back(random_vector(dim, rng));
      f.grid.cell_masses[k] = 0.25 + rng.next_unit();
    }
    const double exact = gamma::gamma_norm_hilbert_exact(f);
    gamma::GammaConfig cfg;
    cfg.mode = gamma::GammaConfig::Mode::MonteCarlo;
    cfg.samples = static_cast<std::size_t>(p.integer("samples", 10000));
    cfg.seed = splitmix64(seed ^ (0x0acceULL + static_cast<std::uint64_t>(trial)));
    const auto mc = gamma::gamma_norm(f, cfg);
    ProbeResult r;
    r.probe_id = "gamma-hilbert-oracle";
    r.params["trial"] = trial;
    r.params["dim"] = dim;
    r.params["cells"] = cells;
    r.seed = cfg.seed;
    r.stderr_est = mc.stderr_est;
    r.lhs = mc.value;
    r.rhs = exact;
    r.ratio = safe_ratio(mc.value, exact);
    r.ordering_ok = std::abs(mc.value - exact) <= 3.0 * mc.stderr_est &&
                    std::abs(mc.value - exact) / exact <= 0.02;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ProbeResult> run_type_constant(const Params& p, banach::ProbeKind kind) {
  const auto space = space_of(p);
  const int n = static_cast<int>(p.integer("family", space.dim()));
  const double expo = kind == banach::ProbeKind::Type ? p.num("p", 2.0) : p.num("q", 2.0);
  banach::AverageMode mode;
  if (n <= 12 && !p.has("samples"))
    mode = banach::Exhaustive{};
  else
    mode = banach::MonteCarlo{static_cast<std::size_t>(p.integer("samples", 10000)), p.seed()};
  auto r = banach::type_cotype_probe(banach::standard_basis_family(space, n), expo, kind, mode);
  r.seed = p.seed();
  return {r};
}

std::vector<ProbeResult> run_witness_search(const Params& p) {
  const auto space = space_of(p);
  const auto kind =
      p.str("kind", "type") == "type" ? banach::ProbeKind::Type : banach::ProbeKind::Cotype;
  const double expo = p.num("exponent", 2.0);
  double best = 0.0;
  const auto fam = banach::witness_search(space, kind, expo,
                                          static_cast<int>(p.integer("family", 4)),
                                          static_cast<int>(p.integer("budget", 300)),
                                          p.seed(), &best);
  ProbeResult r;
  r.probe_id = "witness-search";
  r.params["space"] = space.to_string();
  r.params["kind"] = p.str("kind", "type");
  r.params["exponent"] = expo;
  r.params["budget"] = p.integer("budget", 300);
  r.params["family"] = fam.size();
  r.seed = p.seed();
  r.lhs = best;
  r.rhs = 1.0;
  r.ratio = best;
  return {r};
}

std::vector<ProbeResult> run_facts(const Params& p) {
  // translate / dilate / fourier / convolve transform laws as rows
  const std::uint64_t seed = p.seed();
  std::vector<ProbeResult> rows;
  Rng rng(seed);

  auto emit = [&](const std::string& name, double lhs, double rhs, bool ok) {
    ProbeResult r;
    r.probe_id = "facts-" + name;
    r.seed = seed;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = safe_ratio(lhs, rhs);
    r.ordering_ok = ok;
    rows.push_back(std::move(r));
  };

  gamma::GridFunction f;
  f.grid = gamma::MeasuredGrid::uniform(-4.0, 4.0, 128);
  f.space = banach::SpaceDescriptor::lp(2, 3);
  for (double t : f.grid.coordinates)
    f.values.push_back((std::exp(-t * t) * random_vector(3, rng)).eval());

  const double base = gamma::gamma_norm(f).value;
  const double translated = gamma::gamma_norm(gamma::transform(f, gamma::Translate{1.5})).value;
  emit("translate", translated, base, translated == base);

  const double dilated = gamma::gamma_norm(gamma::transform(f, gamma::Dilate{4.0})).value;
  emit("dilate", dilated, 0.5 * base, std::abs(dilated - 0.5 * base) <= 1e-3 * base);

  const double fourier = gamma::gamma_norm(gamma::transform(f, gamma::Fourier{})).value;
  emit("fourier", fourier, base, std::abs(fourier - base) <= 1e-6 * base);

  const int conv_cases = static_cast<int>(p.integer("trials", 100));
  bool conv_ok = true;
  double worst = 0.0;
  for (int i = 0; i < conv_cases; ++i) {
    gamma::GridFunction g;
    const std::size_t mg = 2 + rng.next_u64() % 6;
    g.grid = gamma::MeasuredGrid::uniform(0.0, (8.0 / 128.0) * static_cast<double>(mg), mg);
    g.space = banach::SpaceDescriptor::lp(2, 1);
    for (std::size_t k = 0; k < mg; ++k) {
      banach::Vector v(1);
      v[0] = rng.next_gauss();
      g.values.push_back(v);
    }
    const double conv = gamma::gamma_norm(gamma::transform(f, gamma::Convolve{g})).value;
    const double bound = gamma::l1_mass(g) * base;
    worst = std::max(worst, safe_ratio(conv, bound));
    conv_ok = conv_ok && conv <= bound * (1.0 + 1e-12);
  }
  emit("convolve", worst, 1.0, conv_ok);
  return rows;
}

std::vector<ProbeResult> run_poisson(const Params& p) {
  const double b = p.num("b", 1.0);
  const auto grid = gamma::MeasuredGrid::uniform(-60.0, 60.0, 1920);
  std::vector<ProbeResult> rows;
  for (double y : {0.0, b / 2.0, -b / 2.0}) {
    ProbeResult r;
    r.probe_id = "poisson-mass";
    r.params["y"] = y;
    r.params["b"] = b;
    r.seed = p.seed();
    r.lhs = holo::strip_poisson_mass(grid, y, b);
    r.rhs = 1.0;
    r.ratio = r.lhs;
    r.ordering_ok = std::abs(r.lhs - 1.0) <= 1e-8;
    rows.push_back(std::move(r));
  }

  // interior reconstruction of 1/(z^2+4) from its boundary traces
  auto f = [](Complex z) { return 1.0 / (z * z + 4.0); };
  gamma::GridFunction tplus, tminus;
  tplus.grid = tminus.grid = grid;
  tplus.space = tminus.space = banach::SpaceDescriptor::lp(2, 1);
  for (double t : grid.coordinates) {
    banach::Vector vp(1), vm(1);
    vp << f(Complex(t, b));
    vm << f(Complex(t, -b));
    tplus.values.push_back(vp);
    tminus.values.push_back(vm);
  }
  for (double y : {0.0, 0.5 * b, -0.7 * b}) {
    const auto u = holo::poisson_extend(tplus, tminus, y, b);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) {
      if (std::abs(grid.coordinates[k]) > 10.0) continue;
      worst = std::max(worst, std::abs(u.values[k][0] - f(Complex(grid.coordinates[k], y))));
    }
    ProbeResult r;
    r.probe_id = "poisson-reconstruction";
    r.params["y"] = y;
    r.params["b"] = b;
    r.seed = p.seed();
    r.lhs = worst;
    r.rhs = 1e-4;
    r.ratio = worst / 1e-4;
    r.ordering_ok = worst <= 1e-4;
    rows.push_back(std::move(r));
  }
  return rows;
}

holo::HoloFn builtin_function(const std::string& name, const banach::SpaceDescriptor& space,
                              const banach::Vector& x, double half_width) {
  if (name == "gauss") {
    const double c = space.norm(x) * std::exp(half_width * half_width + 0.25);
    return holo::rank_one_holo(space, x, holo::StripDomain{half_width},
                               [](Complex z) { return std::exp(-z * z); },
                               holo::DecayCertificate{c, 1.0});
  }
  if (name == "sech") {
    return holo::rank_one_holo(
        space, x, holo::StripDomain{half_width},
        [](Complex z) { return 2.0 / (std::exp(z) + std::exp(-z)); },
        holo::DecayCertificate{6.0 * space.norm(x), 1.0});
  }
  if (name == "rational") {
    return holo::rank_one_holo(space, x, holo::StripDomain{half_width},
                               [](Complex z) { return 1.0 / (z * z + 4.0); });
  }
  throw InvalidInput("unknown built-in function: " + name);
}

std::vector<ProbeResult> run_strip_chain(const Params& p) {
  const auto space = space_of(p, "lp:2:3");
  Rng rng(p.seed());
  const auto x = random_vector(space.dim(), rng);
  const std::string fn = p.str("function", "gauss");
  const double alpha = p.num("alpha", 0.5);
  const auto f = builtin_function(fn, space, x, alpha);
  holo::StripChainConfig cfg;
  cfg.line_halfwidth = p.num("window", 6.0);
  cfg.line_cells = static_cast<std::size_t>(p.integer("cells", 192));
  cfg.gamma = gamma_config(p, 0x5717);
  if (fn == "rational") cfg.truncation = static_cast<int>(p.integer("truncation", 40));
  auto r = strip_chain_probe(f, p.num("a", 0.0), p.num("b", alpha / 2.0), cfg);
  r.params["function"] = fn;
  return {r};
}

std::vector<ProbeResult> run_y_chain(const Params& p) {
  const auto space = space_of(p, "lp:2:3");
  Rng rng(p.seed());
  const auto x = random_vector(space.dim(), rng);
  const auto f = builtin_function(p.str("function", "gauss"), space, x, p.num("alpha", 0.6));
  holo::YChainConfig cfg;
  cfg.line_halfwidth = p.num("window", 6.0);
  cfg.line_cells = static_cast<std::size_t>(p.integer("cells", 96));
  cfg.gamma = gamma_config(p, 0x9c4a);
  holo::YNorm ynorm;
  if (p.str("ynorm", "lp") == "gamma")
    ynorm.kind = holo::YNorm::Kind::Gamma;
  else
    ynorm.p = p.num("p", 2.0);
  auto r = holo::y_chain_probe(f, p.num("a", 0.1), p.num("b", 0.2), p.num("c", 0.3),
                               p.num("d", 0.4), ynorm, static_cast<int>(p.integer("k", 1)),
                               cfg);
  r.params["function"] = p.str("function", "gauss");
  return {r};
}

std::vector<ProbeResult> run_disk_nesting(const Params& p) {
  const auto f =
      holo::scalar_holo(holo::StripDomain{5.0}, [](Complex z) { return std::exp(z); });
  auto r = holo::disk_nesting_probe(
      f, Complex(0, 0), p.num("r1", 0.5), p.num("r2", 0.75), p.num("r3", 1.0),
      static_cast<int>(p.integer("k", 1)), static_cast<int>(p.integer("l", 1)),
      p.num("p", 2.0), static_cast<std::size_t>(p.integer("cells", 32)),
      gamma_config(p, 0xd15c));
  return {r};
}

std::vector<ProbeResult> run_sinc_identity(const Params& p) {
  const auto space = space_of(p, "lp:4:4");
  const int n = static_cast<int>(p.integer("witnesses", 4));
  Rng rng(p.seed());
  banach::VectorFamily coeffs{banach::SpaceDescriptor::lp(space.exponent(), n), {}};
  for (int i = 0; i < n; ++i) coeffs.vectors.push_back(random_vector(n, rng));
  const auto fam = holo::sinc_witness(n, static_cast<int>(p.integer("base", 2)), 1.0, coeffs);
  const auto grid = fam.window_grid(p.num("window", 40.0), 1.0 / 32.0);
  const auto f = fam.to_holo(2.0);
  gamma::GammaConfig cfg = gamma_config(p, 0x51c);
  cfg.samples = static_cast<std::size_t>(p.integer("samples", 10000));
  const auto lhs = gamma::gamma_norm(holo::sample_line(f, grid, 0.0), cfg);
  const auto avg = banach::randomized_average(
      coeffs, 2.0, banach::Law::GaussianReal,
      banach::MonteCarlo{cfg.samples, splitmix64(p.seed() ^ 0xa46ULL)});
  ProbeResult r;
  r.probe_id = "sinc-gamma-identity";
  r.params["N"] = n;
  r.params["space"] = space.to_string();
  r.seed = p.seed();
  r.lhs = lhs.value;
  r.rhs = std::sqrt(2.0) * avg.value;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.stderr_est =
      std::sqrt(lhs.stderr_est * lhs.stderr_est + 2.0 * avg.stderr_est * avg.stderr_est);
  r.ordering_ok = std::abs(r.lhs - r.rhs) <= 3.0 * r.stderr_est + 0.01 * r.rhs;
  return {r};
}

std::vector<ProbeResult> run_lps(const Params& p) {
  auto op = operator_of(p, "laplacian1d:32");
  if (!op.certify(p.num("sigma", 0.2)).ok)
    throw InvalidInput("lps: operator failed its sectoriality certificate");
  bool adjusted = false;
  const auto space = match_space_dim(space_of(p, "lp:4:32"), op.dim(), &adjusted);
  const auto symbol = calculus::symbol_parse(p.str("symbol", "q"));
  const int trials = static_cast<int>(p.integer("trials", 1));
  const auto points = static_cast<std::size_t>(p.integer("points", 128));

  std::vector<ProbeResult> rows;
  double max_upper = 0.0, max_lower = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(p.seed(), static_cast<std::uint64_t>(trial));
    const auto x = random_vector(op.dim(), rng);
    auto r = calculus::lps_probe(op, symbol, x, space, p.num("p", 2.0), p.num("q", 2.0),
                                 0.0, 0.0, points);
    r.params["trial"] = trial;
    if (adjusted) r.params["space_dim_adjusted"] = true;
    r.seed = p.seed();
    max_upper = std::max(max_upper, r.ratio);
    max_lower = std::max(max_lower, r.params["ratio_lower"].get<double>());
    rows.push_back(std::move(r));
  }
  if (trials > 1) {
    ProbeResult summary;
    summary.probe_id = "lps-summary";
    summary.params["trials"] = trials;
    summary.params["symbol"] = symbol.name;
    summary.params["space"] = space.to_string();
    summary.params["grid_points"] = points;
    summary.seed = p.seed();
    summary.lhs = max_upper;
    summary.rhs = max_lower;
    summary.ratio = std::max(max_upper, max_lower);
    rows.push_back(std::move(summary));
  }
  return rows;
}

std::vector<ProbeResult> run_calibrated_dual(const Params& p) {
  const auto symbol = calculus::symbol_parse(p.str("symbol", "q"));
  const double c = calculus::calibration_constant(symbol);
  const auto dual = calculus::calibrated_dual(symbol);
  const double margin = 40.0;
  const std::size_t pts = 4096;
  const double h = 2.0 * margin / static_cast<double>(pts - 1);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < pts; ++i) {
    const double t = std::exp(-margin + h * static_cast<double>(i));
    acc += h * symbol.eval(t) * dual.eval(t);
  }
  ProbeResult r1;
  r1.probe_id = "calibration-constant";
  r1.params["symbol"] = symbol.name;
  r1.seed = p.seed();
  r1.lhs = c;
  r1.rhs = symbol.name == "q" ? 6.0 : c;
  r1.ratio = safe_ratio(r1.lhs, r1.rhs);
  r1.ordering_ok = symbol.name != "q" || std::abs(c - 6.0) <= 1e-6;
  ProbeResult r2;
  r2.probe_id = "calibration-reproducing";
  r2.params["symbol"] = symbol.name;
  r2.seed = p.seed();
  r2.lhs = std::abs(acc);
  r2.rhs = 1.0;
  r2.ratio = std::abs(acc);
  r2.ordering_ok = std::abs(acc - Complex(1.0)) <= 1e-8;
  return {r1, r2};
}

std::vector<ProbeResult> run_diffusion(const Params& p) {
  const auto op = operator_of(p, "cycle-laplacian:16");
  const auto coord_space = space_of(p, "lp:4:4");
  const auto symbol = calculus::symbol_parse(p.str("symbol", "g:0.5"));
  const int states = op.dim();
  const int trials = static_cast<int>(p.integer("trials", 4));
  std::vector<ProbeResult> rows;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(p.seed(), static_cast<std::uint64_t>(trial));
    calculus::Matrix x(states, coord_space.dim());
    for (int i = 0; i < states; ++i)
      for (int j = 0; j < coord_space.dim(); ++j)
        x(i, j) = Complex(rng.next_gauss(), rng.next_gauss());
    auto r = calculus::diffusion_extend_probe(
        op.matrix(), coord_space, p.num("r", 2.0), symbol, x, p.num("p", 2.0),
        p.num("q", 4.0), Eigen::VectorXd::Constant(states, 1.0 / states), 0.0, 0.0,
        static_cast<std::size_t>(p.integer("points", 96)));
    r.params["trial"] = trial;
    r.seed = p.seed();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ProbeResult> run_interp_chain(const Params& p) {
  auto op = operator_of(p, "diag:1,10,100");
  if (!op.certify(p.num("sigma", 0.2)).ok)
    throw InvalidInput("interp-chain: operator failed its certificate");
  bool adjusted = false;
  const auto space = match_space_dim(space_of(p, "lp:2:3"), op.dim(), &adjusted);
  auto r = interp::interp_chain_probe(op, space, p.num("theta", 0.5), p.num("p", 2.0),
                                      p.num("q", 2.0),
                                      static_cast<int>(p.integer("trials", 8)), p.seed());
  if (adjusted) r.params["space_dim_adjusted"] = true;
  return {r};
}

std::vector<ProbeResult> run_besov_chain(const Params& p) {
  std::vector<std::size_t> sizes;
  {
    std::stringstream ss(p.str("sizes", "16,32,64,128"));
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoul(tok));
  }
  const bool swapped = p.str("swap", "0") == "1";
  std::vector<ProbeResult> rows;
  for (std::size_t n : sizes) {
    interp::BesovConfig cfg;
    cfg.integrability = p.num("r", 4.0);
    cfg.theta = p.num("theta", 0.5);
    cfg.grid_size = n;
    cfg.swap_exponents = swapped;
    rows.push_back(
        interp::besov_chain_probe(cfg, static_cast<int>(p.integer("trials", 8)), p.seed()));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

struct ProbeEntry {
  std::string id;
  std::string description;
  Runner runner;
};

const std::vector<ProbeEntry>& registry() {
  static const std::vector<ProbeEntry> entries = {
      {"type-theorem", "gamma vs L^p line norms for sinc witnesses (strip/sector)",
       [](const Params& p) { return run_theorem(p, banach::ProbeKind::Type); }},
      {"cotype-theorem", "L^q vs gamma line norms for sinc witnesses (strip/sector)",
       [](const Params& p) { return run_theorem(p, banach::ProbeKind::Cotype); }},
      {"gamma-hilbert", "monte-carlo gamma norm against the Hilbert closed form",
       run_hilbert_oracle},
      {"type-constant", "rademacher type ratio of the standard basis",
       [](const Params& p) { return run_type_constant(p, banach::ProbeKind::Type); }},
      {"cotype-constant", "rademacher cotype ratio of the standard basis",
       [](const Params& p) { return run_type_constant(p, banach::ProbeKind::Cotype); }},
      {"witness-search", "heuristic search for extremal type/cotype families",
       run_witness_search},
      {"facts", "translate/dilate/fourier/convolve transform laws", run_facts},
      {"poisson", "strip Poisson kernel mass and interior reconstruction", run_poisson},
      {"strip-chain", "lattice gamma chain on the strip", run_strip_chain},
      {"y-chain", "five-term level-norm chain", run_y_chain},
      {"disk-nesting", "Sobolev / gamma^k comparison on nested disks", run_disk_nesting},
      {"sinc-identity", "witness gamma norm vs sqrt(2) gaussian average", run_sinc_identity},
      {"lps", "Littlewood-Paley-Stein trace norms", run_lps},
      {"calibrated-dual", "dual-symbol calibration constant and reproducing integral",
       run_calibrated_dual},
      {"diffusion", "mixed-norm tensor extension of a diffusion generator", run_diffusion},
      {"interp-chain", "real-interpolation vs fractional-domain embedding chain",
       run_interp_chain},
      {"besov-chain", "periodic-Laplacian Besov embedding sweep", run_besov_chain},
  };
  return entries;
}

std::vector<ProbeResult> run_probe(const Params& p) {
  const std::string id = p.str("probe");
  for (const auto& e : registry())
    if (e.id == id) return e.runner(p);
  throw InvalidInput("unknown probe id: " + id);
}

// ---------------------------------------------------------------------------
// Built-in experiment suite
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> builtin_suite(bool smoke) {
  // experiment = "probe=<id> key=value ..." one-liners; smoke shrinks work
  const std::string hilbert_trials = smoke ? "8" : "50";
  const std::string lps_trials = smoke ? "5" : "100";
  const std::string witness_sizes = smoke ? "4,8" : "4,8,16,32";
  const std::string besov_sizes = smoke ? "16,32" : "16,32,64,128";
  const std::string samples = smoke ? "1500" : "4000";
  return {
      {"gamma-hilbert", "probe=gamma-hilbert trials=" + hilbert_trials + " seed=11"},
      {"facts", "probe=facts trials=" + std::string(smoke ? "25" : "100") + " seed=12"},
      {"poisson", "probe=poisson b=1.0 seed=13"},
      {"sinc-identity", "probe=sinc-identity witnesses=4 samples=" +
                            std::string(smoke ? "4000" : "10000") + " seed=14"},
      {"cotype4-witness", "probe=cotype-theorem space=lp:4:8 q=4 witnesses=" + witness_sizes +
                              " samples=" + samples + " seed=15"},
      {"cotype2-witness", "probe=cotype-theorem space=lp:4:8 q=2 witnesses=" + witness_sizes +
                              " samples=" + samples + " seed=15"},
      {"hilbert-theorem", "probe=type-theorem space=lp:2:8 p=2 witnesses=" + witness_sizes +
                              " samples=" + samples + " seed=16"},
      {"strip-chain", "probe=strip-chain function=gauss alpha=0.5 a=0 b=0.25 samples=" +
                          samples + " seed=17"},
      {"y-chain", "probe=y-chain function=gauss alpha=0.6 samples=" + samples + " seed=18"},
      {"disk-nesting", "probe=disk-nesting seed=19"},
      {"lps", "probe=lps operator=laplacian1d:32 space=lp:4:32 symbol=q p=2 q=4 trials=" +
                  lps_trials + " seed=20"},
      {"calibrated-dual", "probe=calibrated-dual symbol=q seed=21"},
      {"diffusion",
       "probe=diffusion operator=cycle-laplacian:16 space=lp:4:4 symbol=g:0.5 "
       "r=2 p=2 q=4 trials=" +
           std::string(smoke ? "2" : "4") + " seed=22"},
      {"interp-chain", "probe=interp-chain operator=diag:1,10,100 theta=0.5 trials=" +
                           std::string(smoke ? "4" : "12") + " seed=23"},
      {"besov-chain", "probe=besov-chain r=4 theta=0.5 sizes=" + besov_sizes +
                          " trials=" + std::string(smoke ? "4" : "8") + " seed=24"},
      {"besov-swapped", "probe=besov-chain r=4 theta=0.5 swap=1 sizes=" + besov_sizes +
                            " trials=" + std::string(smoke ? "4" : "8") + " seed=24"},
  };
}

Params parse_inline(const std::string& line) {
  Params p;
  std::stringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidInput("bad inline config token: " + tok);
    p.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Report: summary table and SVG curves
// ---------------------------------------------------------------------------

struct CsvRow {
  std::string probe_id;
  nlohmann::json params;
  double lhs, rhs, ratio, stderr_est;
  std::uint64_t seed;
};

std::vector<CsvRow> read_csv_rows(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("probe_id,", 0) == 0) continue;
    }
    if (line.empty()) continue;
    // split respecting the quoted param_json field
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cur.push_back(ch);
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 8) throw InvalidInput("report: malformed CSV row: " + line);
    CsvRow row;
    row.probe_id = fields[0];
    row.params =
        fields[1].empty() ? nlohmann::json::object() : nlohmann::json::parse(fields[1]);
    row.lhs = std::stod(fields[2]);
    row.rhs = std::stod(fields[3]);
    row.ratio = std::stod(fields[4]);
    row.stderr_est = std::stod(fields[5]);
    row.seed = std::stoull(fields[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

double x_param_of(const nlohmann::json& params) {
  for (const char* key : {"N", "cells", "grid_points", "trial", "trials"}) {
    if (params.contains(key) && params[key].is_number()) return params[key].get<double>();
  }
  return 0.0;
}

std::string classify(const std::vector<std::pair<double, double>>& curve) {
  if (curve.size() < 2) return "single-point";
  double lo = curve[0].second, hi = curve[0].second;
  for (const auto& [x, y] : curve) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  int increasing_run = 1, best_run = 1;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    increasing_run = curve[i].second > curve[i - 1].second ? increasing_run + 1 : 1;
    best_run = std::max(best_run, increasing_run);
  }
  if (best_run >= 3 && hi / std::max(lo, 1e-300) > 1.10) return "growing";
  if (lo > 0.0 && hi / lo <= 1.25) return "bounded";
  return "mixed";
}

void write_svg(const std::string& path,
               const std::map<std::string, std::vector<std::pair<double, double>>>& curves) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open svg output: " + path);
  const int w = 720, h = 440, ml = 70, mr = 30, mt = 30, mb = 50;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  if (curves.empty()) {
    out << "<text x='40' y='40'>empty report</text>\n</svg>\n";
    return;
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [id, curve] : curves) {
    for (const auto& [x, y] : curve) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  ymin = std::min(ymin, 0.0);
  ymax *= 1.05;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
  out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  out << "<text x='" << w / 2 << "' y='" << h - 12 << "'>parameter</text>\n";
  out << "<text x='12' y='" << h / 2 << "' transform='rotate(-90 12 " << h / 2
      << ")'>ratio</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  int ci = 0, legend_y = mt + 10;
  for (const auto& [id, curve] : curves) {
    const char* color = colors[ci++ % 8];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : curve) out << px(x) << "," << py(y) << " ";
    out << "'/>\n";
    for (const auto& [x, y] : curve)
      out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='3' fill='" << color
          << "'/>\n";
    out << "<text x='" << w - mr - 260 << "' y='" << legend_y << "' fill='" << color
        << "' font-size='12'>" << id << " [" << classify(curve) << "]</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& svg_path) {
  std::vector<CsvRow> rows;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open report input: " + path);
    auto batch = read_csv_rows(in);
    rows.insert(rows.end(), batch.begin(), batch.end());
  }
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  for (const auto& row : rows)
    curves[row.probe_id].emplace_back(x_param_of(row.params), row.ratio);
  for (auto& [id, curve] : curves)
    std::stable_sort(curve.begin(), curve.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  std::cout << "probe_id,points,min_ratio,max_ratio,classification\n";
  for (const auto& [id, curve] : curves) {
    double lo = 1e300, hi = -1e300;
    for (const auto& [x, y] : curve) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    std::cout << id << "," << curve.size() << "," << format_double(lo) << ","
              << format_double(hi) << "," << classify(curve) << "\n";
  }
  if (!svg_path.empty()) write_svg(svg_path, curves);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gammalab: square-function, type/cotype and functional-calculus probes"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "execute probes and write CSV rows");
  std::string config_path, out_path, json_path, svg_path;
  bool timing = false, smoke = false, use_suite = false;
  run->add_option("--config", config_path, "flat key=value config file");
  run->add_option("--out", out_path, "CSV output path (default stdout)");
  run->add_option("--json", json_path, "also write results as JSON");
  run->add_option("--svg", svg_path, "also plot ratio-vs-parameter curves");
  run->add_flag("--timing", timing, "record wall-clock runtime_ms (off: deterministic 0)");
  run->add_flag("--smoke", smoke, "reduced-size suite variant");
  run->add_flag("--suite", use_suite, "run the built-in experiment suite");
  std::map<std::string, std::string> flag_params;
  for (const char* key :
       {"probe", "space", "operator", "symbol", "geometry", "p", "q", "r", "theta", "alpha",
        "a", "b", "c", "d", "k", "l", "r1", "r2", "r3", "seed", "trials", "samples",
        "witnesses", "base", "window", "cell-h", "cells", "points", "sizes", "swap", "family",
        "budget", "kind", "exponent", "function", "ynorm", "sigma", "truncation"}) {
    run->add_option("--" + std::string(key), flag_params[key]);
  }

  // --- report ---
  auto* report = app.add_subcommand("report", "summarize CSV rows and plot curves");
  std::vector<std::string> report_inputs;
  std::string report_svg;
  report->add_option("--in", report_inputs, "input CSV file(s)")->required();
  report->add_option("--svg", report_svg, "SVG output path");

  // --- list-probes ---
  auto* list = app.add_subcommand("list-probes", "list available probe ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      for (const auto& e : registry()) std::cout << e.id << "\t" << e.description << "\n";
      return 0;
    }
    if (report->parsed()) return cmd_report(report_inputs, report_svg);

    // run
    std::vector<Params> experiments;
    std::vector<std::string> names;
    if (use_suite) {
      for (const auto& [name, line] : builtin_suite(smoke)) {
        experiments.push_back(parse_inline(line));
        names.push_back(name);
      }
    } else {
      Params p;
      if (!config_path.empty()) p = load_config_file(config_path);
      for (const auto& [k, v] : flag_params)
        if (!v.empty()) p.kv[k] = v;  // flags win
      if (!p.has("probe")) throw InvalidInput("run: --probe or --suite required");
      experiments.push_back(std::move(p));
      names.push_back(experiments.back().str("probe"));
    }

    // experiments run concurrently; rows are emitted in config order
    std::vector<std::vector<ProbeResult>> results(experiments.size());
    std::vector<std::int64_t> elapsed(experiments.size(), 0);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    parallel_for(experiments.size(), [&](std::size_t i) {
      try {
        const auto start = std::chrono::steady_clock::now();
        results[i] = run_probe(experiments[i]);
        elapsed[i] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    if (first_error) std::rethrow_exception(first_error);

    std::ostringstream csv;
    csv << ProbeResult::csv_header() << "\n";
    nlohmann::json jout = nlohmann::json::array();
    bool any_assertion_failed = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
      for (const auto& r : results[i]) {
        csv << r.csv_row(timing ? elapsed[i] : 0) << "\n";
        nlohmann::json j = r.to_json();
        j["experiment"] = names[i];
        jout.push_back(std::move(j));
        any_assertion_failed = any_assertion_failed || !r.ordering_ok;
      }
    }
    if (out_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(out_path);
      if (!out) throw InvalidInput("cannot open output: " + out_path);
      out << csv.str();
    }
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) throw InvalidInput("cannot open json output: " + json_path);
      out << jout.dump(2) << "\n";
    }
    if (!svg_path.empty()) {
      std::map<std::string, std::vector<std::pair<double, double>>> curves;
      for (const auto& batch : results)
        for (const auto& r : batch)
          curves[r.probe_id].emplace_back(x_param_of(r.params), r.ratio);
      write_svg(svg_path, curves);
    }
    return any_assertion_failed ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
