#pragma once

#include <cmath>
#include <complex>

namespace conetrace::detail {

// Neumaier compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + c_; }

 private:
  T sum_{};
  T c_{};
};

template <>
class CompensatedSum<std::complex<double>> {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_, im_;
};

// Fixed-order pairwise reduction; result depends only on the input order.
template <class T, class It>
T pairwise_sum(It first, It last) {
  auto n = last - first;
  if (n <= 16) {
    T s{};
    for (; first != last; ++first) s += *first;
    return s;
  }
  auto mid = first + n / 2;
  return pairwise_sum<T>(first, mid) + pairwise_sum<T>(mid, last);
}

inline double wrap_symmetric(double v, double period) {
  double r = std::remainder(v, period);
  if (r <= -period / 2) r += period;
  return r;
}

}  // namespace conetrace::detail
