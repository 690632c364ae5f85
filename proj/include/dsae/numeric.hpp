/* Copyright 2026 The dsae Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DSAE_NUMERIC_HPP_
#define DSAE_NUMERIC_HPP_

// Numeric kernels shared by the three trainable model families: log-domain
// helpers, a flat parameter vector with named slices, Adam, elastic-net,
// L-BFGS (orthant-wise when an L1 term is present) and finite-difference
// gradient checking. Everything is float64.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dsae::numeric {

// log(sum(exp(v))) with max-shift. Throws NumericError on empty input.
double logsumexp(std::span<const double> values);

// Flat parameter storage partitioned into contiguous named slices.
class ParamVector {
 public:
  struct Slice {
    std::string name;
    std::size_t offset = 0;
    std::size_t size = 0;
  };

  // Appends a zero-initialised slice and returns its offset.
  std::size_t add_slice(const std::string& name, std::size_t size);

  std::span<double> slice(const std::string& name);
  std::span<const double> slice(const std::string& name) const;
  const Slice& slice_info(const std::string& name) const;
  // Name of the slice containing flat index `i`.
  const std::string& slice_of(std::size_t i) const;

  const std::vector<Slice>& slices() const { return slices_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // A vector with the same layout, all zeros.
  ParamVector zeros_like() const;

 private:
  std::vector<Slice> slices_;
  std::vector<double> values_;
};

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  long long t = 0;
  std::vector<double> m;
  std::vector<double> v;
};

AdamState make_adam(std::size_t n, double lr, double weight_decay);

// Bias-corrected Adam update followed by decoupled weight decay
// (p <- p - lr * weight_decay * p). A non-finite gradient raises NumericError
// naming the owning slice; params and state are untouched in that case.
void adam_step(ParamVector& params, std::span<const double> grads,
               AdamState& state);

struct ElasticNet {
  double penalty = 0.0;
  std::vector<double> subgradient;
};

// c1 * sum|w| + (c2 / 2) * sum w^2, subgradient c1*sign(w) + c2*w with
// sign(0) = 0.
ElasticNet elastic_net(std::span<const double> w, double c1, double c2);

// Smooth objective: returns the value and writes the gradient.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsConfig {
  int memory = 10;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 30;
  // L1 coefficient applied orthant-wise on top of the smooth objective.
  double l1 = 0.0;
  // Optional per-coordinate L1 mask (empty = every coordinate).
  std::vector<bool> l1_mask;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective value at every accepted iterate, starting with x0.
  std::vector<double> history;
};

// Minimises objective(x) + l1 * |x|_1. With l1 > 0 this is OWL-QN: the
// pseudo-gradient replaces the gradient, search directions and trial points
// are projected onto the current orthant, so coordinates land on exact zeros.
// Converged when the (pseudo-)gradient infinity norm is below tolerance.
LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsConfig& config);

// Central differences per coordinate; returns
// max_i |g_fd - g| / max(1, |g_fd|, |g|).
double grad_check(const Objective& objective, std::span<const double> x,
                  double eps = 1e-5);

// Same, but only over the listed coordinates (for large parameter vectors).
double grad_check(const Objective& objective, std::span<const double> x,
                  std::span<const std::size_t> coords, double eps = 1e-5);

double sigmoid(double x);

// Row-major dense matrix for the small shapes used by the neural models.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// y += A x where A is rows x cols stored row-major in `a`.
void gemv_acc(std::span<const double> a, std::size_t rows, std::size_t cols,
              std::span<const double> x, std::span<double> y);
// x_grad += A^T dy
void gemv_t_acc(std::span<const double> a, std::size_t rows, std::size_t cols,
                std::span<const double> dy, std::span<double> x_grad);
// A_grad += dy x^T
void outer_acc(std::span<double> a_grad, std::size_t rows, std::size_t cols,
               std::span<const double> dy, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace dsae::numeric

#endif  // DSAE_NUMERIC_HPP_
