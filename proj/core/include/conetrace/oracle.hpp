#pragma once

#include <vector>

#include "conetrace/amplitude.hpp"
#include "conetrace/link_spectrum.hpp"

namespace conetrace {

struct FrontCoordinates {
  double u = 0.0;      // (x + x') - t
  double delta = 0.0;  // sgn(t^2 - (x+x')^2) |t^2 - (x+x')^2|^{1/2} / (x x')^{1/2}
};
FrontCoordinates front_coordinates(double t, double x, double x_prime);

struct FlatConeSeriesConfig {
  double rho = 0.0;
  double wall_R = 0.0;
  double x = 0.0, y = 0.0, x_prime = 0.0, y_prime = 0.0;
  double Lambda = 200.0;    // frequency damping exp(-lambda^2 / (2 Lambda^2))
  long mode_cutoff = 0;     // max |k|; 0 picks it from Lambda and the radii
  long zero_cutoff = 0;     // max radial zeros per mode; 0 picks lambda_max
  double wall_margin = 0.1;
};

// Eigenfunction expansion of sin(t sqrt(Delta)) / sqrt(Delta) on the flat cone
// of circumference rho, truncated at x = wall_R with a Dirichlet wall.
class FlatConeSineSeries {
 public:
  explicit FlatConeSineSeries(const FlatConeSeriesConfig& cfg);

  double operator()(double t) const;
  std::vector<double> sample(const std::vector<double>& t) const;
  double Lambda() const { return cfg_.Lambda; }
  std::size_t term_count() const { return lambda_.size(); }
  long angular_modes() const { return modes_; }

 private:
  void check_wall(double t) const;
  FlatConeSeriesConfig cfg_;
  std::vector<double> lambda_, coef_;
  long modes_ = 0;
};

cplx flat_cone_sine_kernel_series(double rho, double wall_R, double t, double x, double y, double x_prime,
                                  double y_prime, long mode_cutoff, long zero_cutoff, double Lambda = 200.0);

struct FrontFitOptions {
  double t0 = 0.0;
  double window = 0.1;        // |t - t0| <= window
  double blind = 0.015;       // |t - t0| >= blind
  double smoothing = 0.0;     // Gaussian std in t applied to every basis function (1 / Lambda)
  int poly_degree = 4;        // smooth part: s^0 .. s^poly_degree
  int front_order = 3;        // post-front part: H, and H s^n log s, H s^n for n = 1..front_order
  double max_condition = 1e8;
};

struct FrontFit {
  double c_H = 0.0;
  double c_log = 0.0;
  double se_H = 0.0, se_log = 0.0;  // least-squares standard errors
  double residual = 0.0;            // rms
  double condition = 0.0;
  std::size_t rows = 0;
};

// Least squares against the smoothed basis; the jump column is the post-front
// indicator H(t - t0) and log|t - t0| is shared by both sides.
FrontFit extract_front_coefficients(const std::vector<double>& t, const std::vector<double>& samples,
                                    const FrontFitOptions& opt);

struct ComplexFrontFit {
  cplx c_H, c_log;
  FrontFit re, im;
};
ComplexFrontFit extract_front_coefficients(const std::vector<double>& t, const std::vector<cplx>& samples,
                                           const FrontFitOptions& opt);

// Gaussian convolution (std sigma) of the fit basis functions, exposed for tests.
double smoothed_front_basis(int column, double t, const FrontFitOptions& opt);
int front_basis_size(const FrontFitOptions& opt);

// Neumann (m, n >= 0) and Dirichlet (m, n >= 1) eigenvalues pi sqrt(m^2 + n^2)
// of the unit square, merged and sorted: the doubled square.
std::vector<double> doubled_square_spectrum(double lambda_max);

struct SmoothedTrace {
  std::vector<double> eigenvalues;
  double sigma = 0.0;
  std::vector<double> t;
  std::vector<cplx> samples;
};

SmoothedTrace smoothed_wave_trace(const std::vector<double>& eigenvalues, double sigma,
                                  const std::vector<double>& t_grid);

struct TraceFit {
  cplx C{};
  double residual = 0.0;
  double condition = 0.0;
};

// Complex least squares of the samples near L against {model, 1, t - L}.
TraceFit fit_trace_singularity(const SmoothedTrace& trace, double L, const std::vector<cplx>& model,
                               double window, double max_condition = 1e8);

}  // namespace conetrace
