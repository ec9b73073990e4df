#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shellheat/errors.hpp"

namespace shellheat {

/// Small dense row-major matrix. The plant system is 45x45, so a plain dense
/// LU with partial pivoting is all the linear algebra this project needs.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

private:
  int n_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting, factored once and reused for every
/// time step (the implicit system matrix is constant for fixed parameters).
class LuSolver {
public:
  LuSolver() = default;

  explicit LuSolver(Matrix m) : lu_(std::move(m)), piv_(lu_.size()) {
    const int n = lu_.size();
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::fabs(lu_.at(k, k));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::fabs(lu_.at(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best == 0.0 || !std::isfinite(best))
        throw numeric_error("singular system matrix at pivot column " + std::to_string(k));
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_.at(p, j), lu_.at(k, j));
        std::swap(piv_[p], piv_[k]);
      }
      const double inv = 1.0 / lu_.at(k, k);
      for (int i = k + 1; i < n; ++i) {
        const double f = lu_.at(i, k) * inv;
        lu_.at(i, k) = f;
        if (f == 0.0) continue;
        for (int j = k + 1; j < n; ++j) lu_.at(i, j) -= f * lu_.at(k, j);
      }
    }
  }

  /// Solves A x = b; returns x.
  std::vector<double> solve(std::span<const double> b) const {
    const int n = lu_.size();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[static_cast<std::size_t>(piv_[i])];
    for (int i = 1; i < n; ++i) {
      double s = x[i];
      for (int j = 0; j < i; ++j) s -= lu_.at(i, j) * x[j];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int j = i + 1; j < n; ++j) s -= lu_.at(i, j) * x[j];
      x[i] = s / lu_.at(i, i);
    }
    return x;
  }

private:
  Matrix lu_;
  std::vector<int> piv_;
};

}  // namespace shellheat
