#include "gammalab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace gammalab::calculus {

namespace {

double norm1(const Matrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
  return best;
}

// principal branch z^p, valid off the negative real axis
Complex cpow_principal(Complex z, double p) {
  return std::exp(p * std::log(z));
}

}  // namespace

SectorialOperator::SectorialOperator(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() < 1)
    throw InvalidInput("SectorialOperator: square matrix required");
}

SectorialOperator SectorialOperator::from_named(const std::string& spec) {
  auto make_tridiag = [](int n, bool cyclic) {
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = 2.0;
      if (i + 1 < n) {
        m(i, i + 1) = -1.0;
        m(i + 1, i) = -1.0;
      }
    }
    if (cyclic && n > 1) {
      m(0, n - 1) += -1.0;
      m(n - 1, 0) += -1.0;
    }
    return m;
  };
  const auto colon = spec.find(':');
  const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "laplacian1d") return SectorialOperator(make_tridiag(std::stoi(rest), false));
  if (head == "cycle-laplacian") return SectorialOperator(make_tridiag(std::stoi(rest), true));
  if (head == "diag") {
    std::vector<double> entries;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) entries.push_back(std::stod(tok));
    if (entries.empty()) throw InvalidInput("diag operator needs entries");
    Matrix m = Matrix::Zero(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return SectorialOperator(std::move(m));
  }
  throw InvalidInput("unknown operator spec: " + spec);
}

SectorialOperator SectorialOperator::read_csv(std::istream& is) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> fields;
    while (std::getline(ss, tok, ',')) fields.push_back(std::stod(tok));
    if (fields.size() % 2 != 0) throw InvalidInput("operator csv: odd field count");
    std::vector<Complex> row;
    for (std::size_t i = 0; i + 1 < fields.size(); i += 2)
      row.emplace_back(fields[i], fields[i + 1]);
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("operator csv: empty");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("operator csv: not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return SectorialOperator(std::move(m));
}

SectorialOperator SectorialOperator::shifted_if_singular(double tol) const {
  const auto& eig = eigensystem();
  const double max_abs = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double min_abs = eig.eigenvalues.cwiseAbs().minCoeff();
  if (min_abs > tol * std::max(max_abs, 1.0)) return *this;
  SectorialOperator shifted(a_ + Matrix::Identity(dim(), dim()));
  shifted.shifted_ = true;
  return shifted;
}

const Eigendecomposition& SectorialOperator::eigensystem() const {
  if (!eig_) {
    Eigen::ComplexEigenSolver<Matrix> solver(a_);
    if (solver.info() != Eigen::Success)
      throw NumericalFailure("eigendecomposition failed");
    Eigendecomposition e;
    e.v = solver.eigenvectors();
    e.eigenvalues = solver.eigenvalues();
    e.v_inv = e.v.fullPivLu().inverse();
    Eigen::JacobiSVD<Matrix> svd(e.v);
    const auto& sv = svd.singularValues();
    e.condition = sv(0) / sv(sv.size() - 1);
    eig_ = std::move(e);
  }
  return *eig_;
}

double SectorialOperator::spectrum_min_abs() const {
  const auto& ev = eigensystem().eigenvalues;
  const double max_abs = ev.cwiseAbs().maxCoeff();
  double best = max_abs;
  for (int i = 0; i < ev.size(); ++i) {
    const double m = std::abs(ev[i]);
    if (m > 1e-12 * max_abs) best = std::min(best, m);
  }
  return best;
}

double SectorialOperator::spectrum_max_abs() const {
  return eigensystem().eigenvalues.cwiseAbs().maxCoeff();
}

SectorialityCertificate SectorialOperator::certify(double sigma, int ray_samples,
                                                   double blowup_cap) {
  if (!(sigma > 0.0 && sigma < kPi)) throw InvalidInput("certify: angle must be in (0, pi)");
  SectorialityCertificate cert;
  cert.angle = sigma;

  const auto& ev = eigensystem().eigenvalues;
  const double max_abs = ev.cwiseAbs().maxCoeff();
  bool spectrum_ok = true;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= 1e-12 * std::max(max_abs, 1.0)) spectrum_ok = false;  // not injective
    if (std::abs(std::arg(ev[i])) > sigma + 1e-12) spectrum_ok = false;
  }

  const double rho_lo = 1e-4 * spectrum_min_abs();
  const double rho_hi = 1e4 * spectrum_max_abs();
  double sup = 0.0;
  // rays between sigma and pi plus the negative real axis
  const int n_angles = 5;
  for (int ia = 1; ia <= n_angles; ++ia) {
    const double phi = sigma + (kPi - sigma) * static_cast<double>(ia) / n_angles;
    for (int sgn : {-1, 1}) {
      if (phi == kPi && sgn == 1) continue;  // pi and -pi coincide
      for (int is = 0; is < ray_samples; ++is) {
        const double s = std::log(rho_lo) + (std::log(rho_hi) - std::log(rho_lo)) *
                                                static_cast<double>(is) / (ray_samples - 1);
        const Complex z = std::polar(std::exp(s), sgn * phi);
        const Matrix m = Complex(z) * Matrix::Identity(dim(), dim()) - a_;
        Eigen::PartialPivLU<Matrix> lu(m);
        const Matrix res = lu.inverse();
        sup = std::max(sup, std::abs(z) * res.operatorNorm());
        if (sup > blowup_cap) {
          cert.constant = sup;
          cert.ok = false;
          cert_ = cert;
          return cert;
        }
      }
    }
  }
  cert.constant = sup;
  cert.ok = spectrum_ok && sup <= blowup_cap;
  cert_ = cert;
  return cert;
}

Matrix resolvent(const SectorialOperator& a, Complex z, double cond_cap) {
  const Matrix m = z * Matrix::Identity(a.dim(), a.dim()) - a.matrix();
  Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix inv = lu.inverse();
  const double cond = norm1(m) * norm1(inv);
  if (!(cond < cond_cap)) {
    std::ostringstream os;
    os << "resolvent: near-singular solve at z = (" << z.real() << ", " << z.imag()
       << "), condition estimate " << cond;
    throw NumericalFailure(os.str());
  }
  return inv;
}

// --- Symbols ---------------------------------------------------------------------

void Symbol::check_certificate(double angle, int samples, std::uint64_t seed) const {
  if (!h0) return;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(20.0 * (rng.next_unit() - 0.5));
    const double th = angle * 1.9 * (rng.next_unit() - 0.5);
    const Complex z = std::polar(r, th);
    const double re = std::pow(r, h0->epsilon);
    const double bound = h0->constant * re / (1.0 + re * re);
    if (std::abs(eval(z)) > bound * (1.0 + 1e-9) + 1e-300)
      throw NumericalFailure("symbol " + name + " violates its decay certificate");
  }
}

Symbol symbol_w() {
  Symbol s;
  s.name = "w";
  s.admissible_angle = kPi;
  s.h0 = std::nullopt;  // no decay at infinity
  s.eval = [](Complex z) { return z / (1.0 + z); };
  return s;
}

Symbol symbol_q() {
  Symbol s;
  s.name = "q";
  s.admissible_angle = kPi;
  s.h0 = holo::DecayCertificate{4.0, 1.0};
  s.eval = [](Complex z) { return z / ((1.0 + z) * (1.0 + z)); };
  return s;
}

Symbol symbol_v_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidInput("v_theta: theta must be in (0,1)");
  Symbol s;
  s.name = "v:" + format_double(theta);
  s.admissible_angle = kPi;
  s.h0 = holo::DecayCertificate{4.0, std::min(theta, 1.0 - theta)};
  s.eval = [theta](Complex z) { return cpow_principal(z, 1.0 - theta) / (1.0 + z); };
  return s;
}

Symbol symbol_g_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("g_alpha: alpha must be in (0,1)");
  Symbol s;
  s.name = "g:" + format_double(alpha);
  s.admissible_angle = kPi / (2.0 * alpha);
  s.h0 = holo::DecayCertificate{2.0, alpha};
  s.eval = [alpha](Complex z) {
    const Complex za = cpow_principal(z, alpha);
    return za * std::exp(-za);
  };
  return s;
}

Symbol symbol_parse(const std::string& spec) {
  if (spec == "q") return symbol_q();
  if (spec == "w") return symbol_w();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const double par = std::stod(spec.substr(colon + 1));
    if (head == "v") return symbol_v_theta(par);
    if (head == "g") return symbol_g_alpha(par);
  }
  throw InvalidInput("unknown symbol spec: " + spec);
}

// --- Contour cache ----------------------------------------------------------------

namespace {

struct ContourNodes {
  std::vector<Complex> zeta;   // nodes on both rays
  std::vector<Matrix> resolv;  // (zeta - A)^{-1}
  double h = 0.0;
  double nu = 0.0;

  // weight for node i in f(A) = sum_i w_i f(zeta_i) (zeta_i - A)^{-1}:
  // lower-ray nodes carry +, upper-ray nodes carry -.
  std::vector<Complex> weight;
};

double pick_angle(const SectorialOperator& a, const Symbol& f, const ContourConfig& cfg) {
  if (!a.certificate() || !a.certificate()->ok)
    throw InvalidInput("symbol_apply: operator lacks a valid sectoriality certificate");
  const double omega = a.certificate()->angle;
  const double cap = std::min(f.admissible_angle, kPi) - 1e-6;
  double nu = cfg.angle > 0.0 ? cfg.angle : 0.5 * (omega + cap);
  if (!(nu > omega && nu < f.admissible_angle))
    throw InvalidInput("symbol_apply: contour angle must satisfy omega < nu < admissible");
  return nu;
}

ContourNodes build_contour(const SectorialOperator& a, const Symbol& f,
                           const ContourConfig& cfg, double scale_lo, double scale_hi) {
  if (!f.is_h_infty_0())
    throw InvalidInput("symbol_apply: Dunford integral needs an H-infinity-0 symbol");
  const double nu = pick_angle(a, f, cfg);
  const double eps = f.h0->epsilon;
  const double margin = (std::log(1.0 / cfg.tail_drop) + 4.0) / eps;
  const double s_lo = std::log(a.spectrum_min_abs() * scale_lo) - margin;
  const double s_hi = std::log(a.spectrum_max_abs() * scale_hi) + margin;
  const int per_ray = std::max(
      cfg.nodes_per_ray,
      static_cast<int>(std::ceil((s_hi - s_lo) / (62.0 / cfg.nodes_per_ray))));
  const double h = (s_hi - s_lo) / static_cast<double>(per_ray - 1);

  ContourNodes nodes;
  nodes.h = h;
  nodes.nu = nu;
  const Complex two_pi_i(0.0, 2.0 * kPi);
  for (int sgn : {-1, 1}) {
    for (int i = 0; i < per_ray; ++i) {
      const double s = s_lo + h * static_cast<double>(i);
      const Complex zeta = std::polar(std::exp(s), sgn * nu);
      nodes.zeta.push_back(zeta);
      nodes.resolv.push_back(resolvent(a, zeta));
      // + for the lower ray, - for the upper; trapezoid weight h * zeta
      nodes.weight.push_back(static_cast<double>(-sgn) * h * zeta / two_pi_i);
    }
  }
  return nodes;
}

Matrix contour_matrix(const ContourNodes& nodes, const Symbol& f, double t) {
  const int n = static_cast<int>(nodes.resolv[0].rows());
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < nodes.zeta.size(); ++i) {
    const Complex fv = f.eval(t * nodes.zeta[i]);
    if (fv == Complex(0.0, 0.0)) continue;
    acc += (nodes.weight[i] * fv) * nodes.resolv[i];
  }
  return acc;
}

}  // namespace

Matrix symbol_apply(const SectorialOperator& a, const Symbol& f, const ContourConfig& config) {
  if (!f.is_h_infty_0()) {
    if (f.name == "w") {
      // w(A) = A (1 + A)^{-1}
      const Matrix m = Matrix::Identity(a.dim(), a.dim()) + a.matrix();
      return a.matrix() * m.partialPivLu().inverse();
    }
    throw InvalidInput("symbol_apply: symbol " + f.name + " is not H-infinity-0");
  }
  const ContourNodes nodes = build_contour(a, f, config, 1.0, 1.0);
  return contour_matrix(nodes, f, 1.0);
}

Matrix fractional_power(const SectorialOperator& a, double theta, FractionalMethod method) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidInput("fractional_power: theta in (0,1]");
  if (theta == 1.0) return a.matrix();

  const auto& eig = a.eigensystem();
  const bool eig_usable = eig.condition < 1e7;
  if (method == FractionalMethod::Eigen ||
      (method == FractionalMethod::Auto && eig_usable)) {
    const double max_abs = eig.eigenvalues.cwiseAbs().maxCoeff();
    Vector powered(eig.eigenvalues.size());
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
      const Complex lam = eig.eigenvalues[i];
      if (std::abs(lam) < 1e-14 * max_abs ||
          std::abs(std::arg(lam)) > kPi - 1e-9)
        throw InvalidInput("fractional_power: eigenvalue on the branch cut");
      powered[i] = cpow_principal(lam, theta);
    }
    return eig.v * powered.asDiagonal() * eig.v_inv;
  }

  // Balakrishnan: A^theta = sin(pi theta)/pi int_0^inf t^{theta-1} A (t+A)^{-1} dt
  const double lo_margin = 36.0 / theta;
  const double hi_margin = 36.0 / (1.0 - theta);
  const double s_lo = std::log(a.spectrum_min_abs()) - lo_margin;
  const double s_hi = std::log(a.spectrum_max_abs()) + hi_margin;
  const double h = 0.25;
  const int n_nodes = static_cast<int>(std::ceil((s_hi - s_lo) / h)) + 1;
  const Matrix ident = Matrix::Identity(a.dim(), a.dim());
  Matrix acc = Matrix::Zero(a.dim(), a.dim());
  for (int i = 0; i < n_nodes; ++i) {
    const double s = s_lo + h * static_cast<double>(i);
    const double t = std::exp(s);
    // the product form A (t+A)^{-1} keeps full relative accuracy at large t,
    // where the difference form I - t (t+A)^{-1} cancels to rounding noise
    const Matrix r = (t * ident + a.matrix()).partialPivLu().inverse();
    acc += std::exp(theta * s) * (a.matrix() * r);
  }
  return (std::sin(kPi * theta) / kPi) * h * acc;
}

// --- Traces -------------------------------------------------------------------------

namespace {

std::pair<double, double> auto_trace_range(const SectorialOperator& a, const Symbol& f,
                                           double endpoint_tol) {
  const double eps = f.is_h_infty_0() ? f.h0->epsilon : 1.0;
  const double margin = (std::log(1.0 / endpoint_tol) + 4.6) / eps;
  return {std::exp(-margin) / a.spectrum_max_abs(), std::exp(margin) / a.spectrum_min_abs()};
}

}  // namespace

GFunctionTrace g_trace(const SectorialOperator& a, const Symbol& f, const Vector& x,
                       double t_lo, double t_hi, std::size_t points, double endpoint_tol,
                       const ContourConfig& config) {
  if (x.size() != a.dim()) throw InvalidInput("g_trace: vector dimension mismatch");
  if (points < 2) throw InvalidInput("g_trace: need at least two grid points");
  if (t_lo <= 0.0 || t_hi <= 0.0) {
    const auto [lo, hi] = auto_trace_range(a, f, endpoint_tol);
    t_lo = lo;
    t_hi = hi;
  }
  if (!(t_hi > t_lo)) throw InvalidInput("g_trace: need t_lo < t_hi");

  // one contour serves every t: f(tA) = (2 pi i)^{-1} oint f(t zeta)(zeta-A)^{-1} dzeta
  const ContourNodes nodes = build_contour(a, f, config, t_lo, t_hi);
  std::vector<Vector> ray_cache(nodes.zeta.size());
  for (std::size_t i = 0; i < nodes.zeta.size(); ++i)
    ray_cache[i] = nodes.weight[i] * (nodes.resolv[i] * x);

  GFunctionTrace trace;
  trace.t.resize(points);
  trace.values.assign(points, Vector::Zero(a.dim()));
  const double u_lo = std::log(t_lo);
  const double du = (std::log(t_hi) - u_lo) / static_cast<double>(points - 1);
  parallel_for(points, [&](std::size_t k) {
    const double t = std::exp(u_lo + du * static_cast<double>(k));
    trace.t[k] = t;
    Vector acc = Vector::Zero(a.dim());
    for (std::size_t i = 0; i < nodes.zeta.size(); ++i) {
      const Complex fv = f.eval(t * nodes.zeta[i]);
      if (fv != Complex(0.0, 0.0)) acc += fv * ray_cache[i];
    }
    trace.values[k] = acc;
  });

  double peak = 0.0;
  for (const auto& v : trace.values) peak = std::max(peak, v.norm());
  const double ends = std::max(trace.values.front().norm(), trace.values.back().norm());
  trace.endpoint_ratio = peak > 0.0 ? ends / peak : 0.0;
  if (trace.endpoint_ratio > endpoint_tol)
    throw NumericalFailure("g_trace: endpoints have not decayed; widen the t-grid");
  return trace;
}

double trace_lp_norm(const GFunctionTrace& trace, const SpaceDescriptor& space, double p) {
  if (trace.t.size() < 2) throw InvalidInput("trace_lp_norm: trace too short");
  const double du = std::log(trace.t[1] / trace.t[0]);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : trace.values) m = std::max(m, space.norm(v));
    return m;
  }
  double acc = 0.0;
  for (const auto& v : trace.values) acc += du * std::pow(space.norm(v), p);
  return std::pow(acc, 1.0 / p);
}

ProbeResult lps_probe(const SectorialOperator& a, const Symbol& f, const Vector& x,
                      const SpaceDescriptor& space, double p, double q, double t_lo,
                      double t_hi, std::size_t points, const ContourConfig& config) {
  if (space.dim() != a.dim()) throw InvalidInput("lps_probe: space/operator dimension mismatch");
  const GFunctionTrace trace = g_trace(a, f, x, t_lo, t_hi, points, 1e-6, config);
  const double lq = trace_lp_norm(trace, space, q);
  const double lp = trace_lp_norm(trace, space, p);
  const double xnorm = space.norm(x);

  ProbeResult r;
  r.probe_id = "lps";
  r.params["symbol"] = f.name;
  r.params["p"] = p;
  r.params["q"] = std::isinf(q) ? -1.0 : q;
  r.params["space"] = space.to_string();
  r.params["grid_points"] = points;
  r.add_quantity("trace_lq", lq);
  r.add_quantity("x_norm", xnorm);
  r.add_quantity("trace_lp", lp);
  r.params["ratio_lower"] = safe_ratio(xnorm, lp);
  r.lhs = lq;
  r.rhs = xnorm;
  r.ratio = safe_ratio(lq, xnorm);
  return r;
}

double calibration_constant(const Symbol& f, std::size_t points) {
  if (!f.is_h_infty_0())
    throw InvalidInput("calibration: divergent integral for a symbol without decay");
  const double eps = f.h0->epsilon;
  const double margin = 40.0 / eps;
  const double h = 2.0 * margin / static_cast<double>(points - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double s = -margin + h * static_cast<double>(i);
    const double v = std::abs(f.eval(std::exp(s)));
    acc += h * v * v;
  }
  if (!(acc > 0.0)) throw NumericalFailure("calibration: integral vanished");
  return 1.0 / acc;
}

Symbol calibrated_dual(const Symbol& f) {
  if (!f.is_h_infty_0())
    throw InvalidInput("calibrated_dual: symbol must be H-infinity-0");
  const double c = calibration_constant(f);
  Symbol g;
  g.name = "dual-" + f.name;
  g.admissible_angle = f.admissible_angle;
  g.h0 = holo::DecayCertificate{c * f.h0->constant, f.h0->epsilon};
  g.eval = [c, inner = f.eval](Complex z) { return c * std::conj(inner(std::conj(z))); };
  return g;
}

// --- Diffusion --------------------------------------------------------------------

Matrix matrix_exp(const Matrix& m) { return m.exp(); }

DiffusionCheck diffusion_check(const Matrix& q, const std::vector<double>& times, double tol) {
  DiffusionCheck check;
  check.min_entry = 0.0;
  check.max_row_sum = 0.0;
  for (double t : times) {
    const Matrix semi = matrix_exp((-t * q).eval());
    for (int i = 0; i < semi.rows(); ++i) {
      double row_sum = 0.0;
      double col_sum = 0.0;
      for (int j = 0; j < semi.cols(); ++j) {
        const double re = semi(i, j).real();
        if (std::abs(semi(i, j).imag()) > tol) check.nonnegative = false;
        check.min_entry = std::min(check.min_entry, re);
        if (re < -tol) check.nonnegative = false;
        row_sum += std::abs(semi(i, j));
        col_sum += std::abs(semi(j, i));
      }
      check.max_row_sum = std::max({check.max_row_sum, row_sum, col_sum});
      if (row_sum > 1.0 + tol || col_sum > 1.0 + tol) check.substochastic = false;
    }
  }
  return check;
}

ProbeResult diffusion_extend_probe(const Matrix& q, const SpaceDescriptor& coord_space,
                                   double r, const Symbol& f, const Matrix& x, double p,
                                   double q_exp, const Eigen::VectorXd& state_masses,
                                   double t_lo, double t_hi, std::size_t points,
                                   const ContourConfig& config) {
  const int states = static_cast<int>(q.rows());
  if (x.rows() != states || x.cols() != coord_space.dim())
    throw InvalidInput("diffusion_extend_probe: data shape mismatch");
  if (state_masses.size() != states)
    throw InvalidInput("diffusion_extend_probe: state mass count mismatch");

  // semigroup properties at a few sampled times across the spectrum scale
  SectorialOperator op(q);
  const double scale = std::max(op.spectrum_max_abs(), 1e-30);
  const DiffusionCheck check =
      diffusion_check(q, {0.01 / scale, 0.1 / scale, 1.0 / scale, 10.0 / scale});
  if (!check.nonnegative || !check.substochastic)
    throw InvalidInput("diffusion_extend_probe: generator is not a diffusion operator");

  // spectrum inside the right half sector
  const auto& ev = op.eigensystem().eigenvalues;
  const double max_abs = ev.cwiseAbs().maxCoeff();
  bool kernel = false;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= 1e-10 * max_abs)
      kernel = true;
    else if (std::abs(std::arg(ev[i])) > kPi / 2.0 - 1e-9)
      throw InvalidInput("diffusion_extend_probe: spectrum leaves the half-plane sector");
  }

  // project out the kernel (range complement), per the non-injective
  // reduction, and deflate the generator by the kernel projector so every
  // contour resolvent stays well conditioned; on the projected data the two
  // operators act identically
  Matrix x_eff = x;
  Matrix q_run = q;
  if (kernel) {
    const auto& eig = op.eigensystem();
    Matrix proj = Matrix::Zero(states, states);
    for (int i = 0; i < ev.size(); ++i)
      if (std::abs(ev[i]) <= 1e-10 * max_abs)
        proj += eig.v.col(i) * eig.v_inv.row(i);
    x_eff = x - proj * x;
    q_run = q + proj;
  }

  SectorialOperator op_run(q_run);
  SectorialityCertificate cert = op_run.certify(kPi / 2.0 - 1e-6, 24);
  if (!cert.ok)
    throw InvalidInput("diffusion_extend_probe: sectoriality certificate failed");

  if (t_lo <= 0.0 || t_hi <= 0.0) {
    const double eps = f.is_h_infty_0() ? f.h0->epsilon : 1.0;
    const double margin = (std::log(1e6) + 4.6) / eps;
    t_lo = std::exp(-margin) / op.spectrum_max_abs();
    t_hi = std::exp(margin) / op.spectrum_min_abs();
  }

  // trace of the tensor extension: f(t bold-A) x = f(tQ) x
  ContourConfig cfg = config;
  if (cfg.angle <= 0.0 || !(cfg.angle < f.admissible_angle))
    cfg.angle = 0.5 * (cert.angle + std::min(f.admissible_angle, kPi));

  const double u_lo = std::log(t_lo);
  const double du = (std::log(t_hi) - u_lo) / static_cast<double>(points - 1);
  std::vector<Matrix> trace(points);
  {
    // shared contour across t (see g_trace)
    const ContourNodes nodes = build_contour(op_run, f, cfg, t_lo, t_hi);
    std::vector<Matrix> node_prod(nodes.zeta.size());
    for (std::size_t i = 0; i < nodes.zeta.size(); ++i)
      node_prod[i] = nodes.weight[i] * (nodes.resolv[i] * x_eff);
    parallel_for(points, [&](std::size_t k) {
      const double t = std::exp(u_lo + du * static_cast<double>(k));
      Matrix acc = Matrix::Zero(states, coord_space.dim());
      for (std::size_t i = 0; i < nodes.zeta.size(); ++i) {
        const Complex fv = f.eval(t * nodes.zeta[i]);
        if (fv != Complex(0.0, 0.0)) acc += fv * node_prod[i];
      }
      trace[k] = acc;
    });
  }

  // mixed norms: inner L^{p or q}(dt/t; X) per state, outer L^r over states
  auto mixed_norm = [&](double inner_exp) {
    double outer = 0.0;
    for (int w = 0; w < states; ++w) {
      double inner;
      if (std::isinf(inner_exp)) {
        inner = 0.0;
        for (std::size_t k = 0; k < points; ++k)
          inner = std::max(inner, coord_space.norm(trace[k].row(w).transpose()));
      } else {
        double acc = 0.0;
        for (std::size_t k = 0; k < points; ++k)
          acc += du * std::pow(coord_space.norm(trace[k].row(w).transpose()), inner_exp);
        inner = std::pow(acc, 1.0 / inner_exp);
      }
      outer += state_masses[w] * std::pow(inner, r);
    }
    return std::pow(outer, 1.0 / r);
  };
  double x_norm = 0.0;
  for (int w = 0; w < states; ++w)
    x_norm += state_masses[w] * std::pow(coord_space.norm(x_eff.row(w).transpose()), r);
  x_norm = std::pow(x_norm, 1.0 / r);

  const double mixed_q = mixed_norm(q_exp);
  const double mixed_p = mixed_norm(p);

  ProbeResult res;
  res.probe_id = "diffusion-extend";
  res.params["symbol"] = f.name;
  res.params["r"] = r;
  res.params["p"] = p;
  res.params["q"] = std::isinf(q_exp) ? -1.0 : q_exp;
  res.params["states"] = states;
  res.params["space"] = coord_space.to_string();
  res.params["kernel_projected"] = kernel;
  res.params["umd_assumed"] = true;
  res.params["semigroup_min_entry"] = check.min_entry;
  res.params["semigroup_max_row_sum"] = check.max_row_sum;
  res.add_quantity("mixed_lq", mixed_q);
  res.add_quantity("x_norm", x_norm);
  res.add_quantity("mixed_lp", mixed_p);
  res.params["ratio_lower"] = safe_ratio(x_norm, mixed_p);
  res.lhs = mixed_q;
  res.rhs = x_norm;
  res.ratio = safe_ratio(mixed_q, x_norm);
  return res;
}

}  // namespace gammalab::calculus
