#pragma once

#include <vector>

namespace conetrace {

struct BesselJ {
  double j;
  double jp;
};

// J_nu(x) and its x-derivative for real nu >= 0, x >= 0.
BesselJ bessel_j_with_derivative(double nu, double x);
double bessel_j(double nu, double x);

// Positive zeros of J_nu below `upper`, ascending.
std::vector<double> bessel_j_zeros_below(double nu, double upper);
// First `count` positive zeros of J_nu.
std::vector<double> bessel_j_zeros(double nu, int count);

}  // namespace conetrace
