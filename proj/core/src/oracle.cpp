#include "conetrace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "conetrace/bessel.hpp"
#include "conetrace/errors.hpp"
#include "conetrace/parallel.hpp"
#include "numeric_util.hpp"

namespace conetrace {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTailLog = 39.2;  // exp(-39.2) ~ 1e-17
}  // namespace

FrontCoordinates front_coordinates(double t, double x, double x_prime) {
  if (!(x > 0.0) || !(x_prime > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "radii must be positive");
  const double r = x + x_prime;
  const double q = t * t - r * r;
  FrontCoordinates f;
  f.u = r - t;
  f.delta = (q > 0 ? 1.0 : (q < 0 ? -1.0 : 0.0)) * std::sqrt(std::abs(q)) / std::sqrt(x * x_prime);
  return f;
}

FlatConeSineSeries::FlatConeSineSeries(const FlatConeSeriesConfig& cfg) : cfg_(cfg) {
  if (!(cfg.rho > 0.0) || !(cfg.wall_R > 0.0) || !(cfg.Lambda > 0.0))
    throw Error(ErrorKind::InvalidArgument, "cone series needs positive rho, wall and damping");
  if (!(cfg.x > 0.0) || !(cfg.x_prime > 0.0) || cfg.x >= cfg.wall_R || cfg.x_prime >= cfg.wall_R)
    throw Error(ErrorKind::NonPositiveRadius, "radii must lie in (0, wall)");
  const double alpha = 2.0 * kPi / cfg.rho;
  const double lmax = cfg.Lambda * std::sqrt(2.0 * kTailLog);
  const double xm = std::max(cfg.x, cfg.x_prime);
  long K = cfg.mode_cutoff;
  if (K <= 0) {
    // J_nu(lambda x) is negligible once nu well exceeds lambda x.
    K = static_cast<long>(std::floor((lmax * xm * 1.05 + 20.0) / alpha));
  }
  modes_ = K + 1;
  const double dy = cfg.y - cfg.y_prime;
  const double R = cfg.wall_R;
  std::vector<std::vector<double>> lam(modes_), cf(modes_);
  parallel_for(static_cast<std::size_t>(modes_), [&](std::size_t kk) {
    const long k = static_cast<long>(kk);
    const double nu = alpha * k;
    std::vector<double> zs = cfg.zero_cutoff > 0 ? bessel_j_zeros(nu, static_cast<int>(cfg.zero_cutoff))
                                                 : bessel_j_zeros_below(nu, lmax * R);
    const double ang = (k == 0 ? 1.0 : 2.0 * std::cos(k * alpha * dy)) / cfg.rho;
    for (double j : zs) {
      const double l = j / R;
      const BesselJ d = bessel_j_with_derivative(nu, j);
      const double c = 2.0 * bessel_j(nu, l * cfg.x) * bessel_j(nu, l * cfg.x_prime) / (R * R * d.jp * d.jp) *
                       ang * std::exp(-0.5 * l * l / (cfg.Lambda * cfg.Lambda)) / l;
      lam[kk].push_back(l);
      cf[kk].push_back(c);
    }
  });
  for (long k = 0; k < modes_; ++k) {
    lambda_.insert(lambda_.end(), lam[k].begin(), lam[k].end());
    coef_.insert(coef_.end(), cf[k].begin(), cf[k].end());
  }
}

void FlatConeSineSeries::check_wall(double t) const {
  if (cfg_.x + cfg_.x_prime + std::abs(t) > 2.0 * cfg_.wall_R - cfg_.wall_margin)
    throw Error(ErrorKind::WallInfluence, "wall reflections reach the evaluation point");
}

double FlatConeSineSeries::operator()(double t) const {
  check_wall(t);
  detail::CompensatedSum<double> s;
  for (std::size_t i = 0; i < lambda_.size(); ++i) s.add(coef_[i] * std::sin(t * lambda_[i]));
  return s.value();
}

std::vector<double> FlatConeSineSeries::sample(const std::vector<double>& t) const {
  for (double v : t) check_wall(v);
  std::vector<double> out(t.size());
  parallel_for(t.size(), [&](std::size_t i) { out[i] = (*this)(t[i]); });
  return out;
}

cplx flat_cone_sine_kernel_series(double rho, double wall_R, double t, double x, double y, double x_prime,
                                  double y_prime, long mode_cutoff, long zero_cutoff, double Lambda) {
  FlatConeSeriesConfig c;
  c.rho = rho;
  c.wall_R = wall_R;
  c.x = x;
  c.y = y;
  c.x_prime = x_prime;
  c.y_prime = y_prime;
  c.mode_cutoff = mode_cutoff;
  c.zero_cutoff = zero_cutoff;
  c.Lambda = Lambda;
  return FlatConeSineSeries(c)(t);
}

// ---------------------------------------------------------------------------
// Front fit

int front_basis_size(const FrontFitOptions& opt) { return opt.poly_degree + 1 + 1 + 2 * opt.front_order + 1; }

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

// Columns in the scaled variable z = (t - t0) / window.
enum class ColKind { Poly, Jump, JumpLog, JumpPow, Log };
struct Col {
  ColKind kind;
  int n;
};

Col column(int c, const FrontFitOptions& opt) {
  if (c <= opt.poly_degree) return {ColKind::Poly, c};
  c -= opt.poly_degree + 1;
  if (c == 0) return {ColKind::Jump, 0};
  c -= 1;
  if (c < 2 * opt.front_order) return {c % 2 == 0 ? ColKind::JumpLog : ColKind::JumpPow, c / 2 + 1};
  return {ColKind::Log, 0};
}

double raw_basis(const Col& col, double z) {
  switch (col.kind) {
    case ColKind::Poly: return std::pow(z, col.n);
    case ColKind::Jump: return z > 0 ? 1.0 : 0.0;
    case ColKind::JumpPow: return z > 0 ? std::pow(z, col.n) : 0.0;
    case ColKind::JumpLog: return z > 0 ? std::pow(z, col.n) * std::log(z) : 0.0;
    case ColKind::Log: return z != 0 ? std::log(std::abs(z)) : 0.0;
  }
  return 0.0;
}

// Gaussian moments E[(a + sig Z)^n] and E[(a + sig Z)^n ; a + sig Z > 0].
double gauss_moment(int n, double a, double sig, bool positive_part) {
  double m0, m1;
  if (positive_part) {
    m0 = sig > 0 ? normal_cdf(a / sig) : (a > 0 ? 1.0 : 0.0);
    m1 = a * m0 + (sig > 0 ? sig * normal_pdf(a / sig) : 0.0);
  } else {
    m0 = 1.0;
    m1 = a;
  }
  if (n == 0) return m0;
  if (n == 1) return m1;
  double mm2 = m0, mm1 = m1, m = 0.0;
  for (int k = 2; k <= n; ++k) {
    m = a * mm1 + (k - 1) * sig * sig * mm2;
    mm2 = mm1;
    mm1 = m;
  }
  return m;
}

double smoothed_column(const Col& col, double a, double sig) {
  if (col.kind == ColKind::Poly) return gauss_moment(col.n, a, sig, false);
  if (col.kind == ColKind::Jump) return gauss_moment(0, a, sig, true);
  if (col.kind == ColKind::JumpPow) return gauss_moment(col.n, a, sig, true);
  if (!(sig > 0.0)) return raw_basis(col, a);
  // Logarithmic columns: quadrature in w with z = a + sig w, split at z = 0.
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  const double wmax = 8.5;
  const double ws = -a / sig;
  auto f = [&](double w) { return raw_basis(col, a + sig * w) * normal_pdf(w); };
  double v = 0.0;
  const double tol = 1e-13;
  if (ws > -wmax && ws < wmax) {
    if (col.kind == ColKind::Log) v += ts.integrate(f, -wmax, ws, tol);
    v += ts.integrate(f, ws, wmax, tol);
  } else if (ws <= -wmax) {
    v = ts.integrate(f, -wmax, wmax, tol);
  } else if (col.kind == ColKind::Log) {
    v = ts.integrate(f, -wmax, wmax, tol);
  }
  return v;
}

}  // namespace

double smoothed_front_basis(int column_index, double t, const FrontFitOptions& opt) {
  const double W = opt.window;
  return smoothed_column(column(column_index, opt), (t - opt.t0) / W, opt.smoothing / W);
}

FrontFit extract_front_coefficients(const std::vector<double>& t, const std::vector<double>& samples,
                                    const FrontFitOptions& opt) {
  if (t.size() != samples.size()) throw Error(ErrorKind::InvalidArgument, "t and samples differ in length");
  if (!(opt.window > opt.blind) || opt.poly_degree < 0 || opt.front_order < 0)
    throw Error(ErrorKind::InvalidArgument, "bad front fit options");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = std::abs(t[i] - opt.t0);
    if (s <= opt.window && s >= opt.blind) rows.push_back(i);
  }
  const int p = front_basis_size(opt);
  if (rows.size() < static_cast<std::size_t>(2 * p))
    throw Error(ErrorKind::IllConditioned, "too few samples in the fit window");
  Eigen::MatrixXd A(rows.size(), p);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    b(r) = samples[rows[r]];
    for (int c = 0; c < p; ++c) A(r, c) = smoothed_front_basis(c, t[rows[r]], opt);
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < p; ++c) {
    if (!(scale(c) > 0.0)) throw Error(ErrorKind::IllConditioned, "empty basis column");
    A.col(c) /= scale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  FrontFit out;
  out.rows = rows.size();
  out.condition = sv(0) / sv(p - 1);
  if (!(out.condition <= opt.max_condition))
    throw Error(ErrorKind::IllConditioned, "front fit condition number " + std::to_string(out.condition));
  Eigen::VectorXd x = svd.solve(b);
  const Eigen::VectorXd res = b - A * x;
  out.residual = std::sqrt(res.squaredNorm() / rows.size());
  const double s2 = res.squaredNorm() / std::max<double>(1.0, double(rows.size()) - p);
  // cov = s2 V S^-2 V^T in the equilibrated columns
  const Eigen::MatrixXd Vs = svd.matrixV() * sv.cwiseInverse().asDiagonal();
  const int iH = opt.poly_degree + 1, iL = p - 1;
  out.c_H = x(iH) / scale(iH);
  out.c_log = x(iL) / scale(iL);
  out.se_H = std::sqrt(s2 * Vs.row(iH).squaredNorm()) / scale(iH);
  out.se_log = std::sqrt(s2 * Vs.row(iL).squaredNorm()) / scale(iL);
  return out;
}

ComplexFrontFit extract_front_coefficients(const std::vector<double>& t, const std::vector<cplx>& samples,
                                           const FrontFitOptions& opt) {
  std::vector<double> re(samples.size()), im(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) re[i] = samples[i].real(), im[i] = samples[i].imag();
  ComplexFrontFit f;
  f.re = extract_front_coefficients(t, re, opt);
  f.im = extract_front_coefficients(t, im, opt);
  f.c_H = {f.re.c_H, f.im.c_H};
  f.c_log = {f.re.c_log, f.im.c_log};
  return f;
}

// ---------------------------------------------------------------------------
// Spectra and traces

std::vector<double> doubled_square_spectrum(double lambda_max) {
  if (!(lambda_max >= 0.0) || lambda_max > 5000.0)
    throw Error(ErrorKind::InvalidArgument, "lambda_max must lie in [0, 5000]");
  std::vector<double> ev;
  const long M = static_cast<long>(std::floor(lambda_max / kPi));
  for (long m = 0; m <= M; ++m)
    for (long n = 0; n <= M; ++n) {
      const double l = kPi * std::sqrt(double(m * m + n * n));
      if (l > lambda_max) continue;
      ev.push_back(l);                   // Neumann
      if (m >= 1 && n >= 1) ev.push_back(l);  // Dirichlet
    }
  std::sort(ev.begin(), ev.end());
  return ev;
}

SmoothedTrace smoothed_wave_trace(const std::vector<double>& eigenvalues, double sigma,
                                  const std::vector<double>& t_grid) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  SmoothedTrace tr;
  tr.eigenvalues = eigenvalues;
  tr.sigma = sigma;
  tr.t = t_grid;
  std::vector<double> lam, w;
  for (double l : eigenvalues) {
    const double a = 0.5 * l * l / (sigma * sigma);
    if (a > kTailLog) continue;
    lam.push_back(l);
    w.push_back(std::exp(-a));
  }
  tr.samples.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    std::vector<cplx> terms(lam.size());
    for (std::size_t j = 0; j < lam.size(); ++j) terms[j] = std::polar(w[j], -t_grid[i] * lam[j]);
    tr.samples[i] = detail::pairwise_sum<cplx>(terms.begin(), terms.end());
  });
  return tr;
}

TraceFit fit_trace_singularity(const SmoothedTrace& trace, double L, const std::vector<cplx>& model,
                               double window, double max_condition) {
  if (model.size() != trace.t.size()) throw Error(ErrorKind::InvalidArgument, "model and trace grids differ");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < trace.t.size(); ++i)
    if (std::abs(trace.t[i] - L) <= window) rows.push_back(i);
  if (rows.size() < 6) throw Error(ErrorKind::IllConditioned, "too few samples in the fit window");
  Eigen::MatrixXcd A(rows.size(), 3);
  Eigen::VectorXcd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = rows[r];
    A(r, 0) = model[i];
    A(r, 1) = 1.0;
    A(r, 2) = (trace.t[i] - L) / window;
    b(r) = trace.samples[i];
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < 3; ++c) {
    if (!(scale(c) > 0.0)) throw Error(ErrorKind::IllConditioned, "empty basis column");
    A.col(c) /= scale(c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TraceFit f;
  f.condition = svd.singularValues()(0) / svd.singularValues()(2);
  if (!(f.condition <= max_condition)) throw Error(ErrorKind::IllConditioned, "trace fit is ill conditioned");
  Eigen::VectorXcd x = svd.solve(b);
  f.C = x(0) / scale(0);
  f.residual = std::sqrt((b - A * x).squaredNorm() / rows.size());
  return f;
}

}  // namespace conetrace
