#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "twoeq/errors.hpp"

namespace twoeq {

/// Test function phi(c) = sum_i coeffs[i] c^i of degree <= 6.
class Polynomial {
 public:
  static constexpr std::size_t kMaxDegree = 6;

  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    if (coeffs_.size() > kMaxDegree + 1) {
      throw ValidationError("test polynomial degree must be <= 6");
    }
  }
  Polynomial(std::initializer_list<double> coeffs)
      : Polynomial(std::vector<double>(coeffs)) {}

  double operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      d[i - 1] = static_cast<double>(i) * coeffs_[i];
    }
    return Polynomial(std::move(d));
  }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace twoeq
