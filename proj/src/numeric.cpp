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

#include "dsae/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsae/error.hpp"

namespace dsae::numeric {

double logsumexp(std::span<const double> values) {
  if (values.empty()) throw NumericError("logsumexp of an empty array");
  double m = values[0];
  for (double v : values) m = std::max(m, v);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

std::size_t ParamVector::add_slice(const std::string& name, std::size_t size) {
  for (const auto& s : slices_)
    if (s.name == name) throw InvalidArgument("duplicate slice " + name);
  const std::size_t offset = values_.size();
  slices_.push_back({name, offset, size});
  values_.resize(offset + size, 0.0);
  return offset;
}

const ParamVector::Slice& ParamVector::slice_info(const std::string& name) const {
  for (const auto& s : slices_)
    if (s.name == name) return s;
  throw InvalidArgument("no parameter slice named " + name);
}

std::span<double> ParamVector::slice(const std::string& name) {
  const auto& s = slice_info(name);
  return {values_.data() + s.offset, s.size};
}

std::span<const double> ParamVector::slice(const std::string& name) const {
  const auto& s = slice_info(name);
  return {values_.data() + s.offset, s.size};
}

const std::string& ParamVector::slice_of(std::size_t i) const {
  for (const auto& s : slices_)
    if (i >= s.offset && i < s.offset + s.size) return s.name;
  throw InvalidArgument("index outside every slice");
}

ParamVector ParamVector::zeros_like() const {
  ParamVector z;
  z.slices_ = slices_;
  z.values_.assign(values_.size(), 0.0);
  return z;
}

AdamState make_adam(std::size_t n, double lr, double weight_decay) {
  AdamState s;
  s.lr = lr;
  s.weight_decay = weight_decay;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

void adam_step(ParamVector& params, std::span<const double> grads,
               AdamState& state) {
  const std::size_t n = params.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n)
    throw InvalidArgument("adam_step: parameter, gradient and state sizes differ");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(grads[i]))
      throw NumericError("non-finite gradient in slice '" + params.slice_of(i) +
                         "'");

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  auto& p = params.values();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    p[i] -= state.lr * state.weight_decay * p[i];
  }
}

ElasticNet elastic_net(std::span<const double> w, double c1, double c2) {
  if (c1 < 0.0 || c2 < 0.0)
    throw InvalidArgument("elastic-net coefficients must be non-negative");
  ElasticNet out;
  out.subgradient.resize(w.size());
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double sign = (w[i] > 0.0) - (w[i] < 0.0);
    l1 += std::fabs(w[i]);
    l2 += w[i] * w[i];
    out.subgradient[i] = c1 * sign + c2 * w[i];
  }
  out.penalty = c1 * l1 + 0.5 * c2 * l2;
  return out;
}

namespace {

bool l1_on(const LbfgsConfig& c, std::size_t i) {
  return c.l1 > 0.0 && (c.l1_mask.empty() || c.l1_mask[i]);
}

double l1_term(const LbfgsConfig& c, std::span<const double> x) {
  if (c.l1 <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (l1_on(c, i)) s += std::fabs(x[i]);
  return c.l1 * s;
}

void pseudo_gradient(const LbfgsConfig& c, std::span<const double> x,
                     std::span<const double> g, std::span<double> pg) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!l1_on(c, i)) {
      pg[i] = g[i];
    } else if (x[i] < 0.0) {
      pg[i] = g[i] - c.l1;
    } else if (x[i] > 0.0) {
      pg[i] = g[i] + c.l1;
    } else if (g[i] + c.l1 < 0.0) {
      pg[i] = g[i] + c.l1;
    } else if (g[i] - c.l1 > 0.0) {
      pg[i] = g[i] - c.l1;
    } else {
      pg[i] = 0.0;
    }
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsConfig& config) {
  if (config.memory <= 0 || config.max_iterations <= 0 ||
      config.gradient_tolerance <= 0.0 || config.armijo_c <= 0.0 ||
      config.backtrack <= 0.0 || config.backtrack >= 1.0 || config.l1 < 0.0)
    throw InvalidArgument("invalid L-BFGS configuration");
  const std::size_t n = x0.size();
  if (!config.l1_mask.empty() && config.l1_mask.size() != n)
    throw InvalidArgument("L1 mask length differs from parameter count");

  LbfgsResult res;
  std::vector<double> x = std::move(x0), g(n), pg(n), d(n), xn(n), gn(n);
  double f = objective(x, g) + l1_term(config, x);
  if (!std::isfinite(f)) throw NumericError("objective is not finite at x0");
  res.history.push_back(f);

  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  std::vector<double> alpha(static_cast<std::size_t>(config.memory));

  pseudo_gradient(config, x, g, pg);
  for (int iter = 0;; ++iter) {
    if (inf_norm(pg) < config.gradient_tolerance) {
      res.converged = true;
      break;
    }
    if (iter >= config.max_iterations) break;

    // Two-loop recursion on the pseudo-gradient.
    for (std::size_t i = 0; i < n; ++i) d[i] = -pg[i];
    const std::size_t k = s_hist.size();
    for (std::size_t j = k; j-- > 0;) {
      alpha[j] = rho_hist[j] * dot(s_hist[j], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[j] * y_hist[j][i];
    }
    if (k > 0) {
      const double gamma =
          dot(s_hist[k - 1], y_hist[k - 1]) / dot(y_hist[k - 1], y_hist[k - 1]);
      for (double& di : d) di *= gamma;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double beta = rho_hist[j] * dot(y_hist[j], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[j][i] * (alpha[j] - beta);
    }
    if (config.l1 > 0.0)
      for (std::size_t i = 0; i < n; ++i)
        if (d[i] * pg[i] >= 0.0) d[i] = 0.0;

    double slope = dot(pg, d);
    if (!(slope < 0.0)) {
      // Lost descent: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -pg[i];
      slope = dot(pg, d);
    }

    double step = 1.0;
    if (s_hist.empty()) {
      double norm = std::sqrt(dot(d, d));
      step = norm > 0.0 ? 1.0 / norm : 1.0;
    }

    bool accepted = false;
    double fn = 0.0;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) {
        xn[i] = x[i] + step * d[i];
        if (l1_on(config, i)) {
          const double orthant = x[i] != 0.0 ? x[i] : -pg[i];
          if (xn[i] * orthant <= 0.0) xn[i] = 0.0;
        }
      }
      fn = objective(xn, gn) + l1_term(config, xn);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += pg[i] * (xn[i] - x[i]);
      if (std::isfinite(fn) && fn <= f + config.armijo_c * decrease) {
        accepted = true;
        break;
      }
      step *= config.backtrack;
    }
    if (!accepted) break;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y)) && sy > 0.0) {
      if (s_hist.size() == static_cast<std::size_t>(config.memory)) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x.swap(xn);
    g.swap(gn);
    f = fn;
    res.history.push_back(f);
    res.iterations = iter + 1;
    pseudo_gradient(config, x, g, pg);
  }
  res.x = std::move(x);
  res.value = f;
  return res;
}

double grad_check(const Objective& objective, std::span<const double> x,
                  std::span<const std::size_t> coords, double eps) {
  std::vector<double> xv(x.begin(), x.end());
  std::vector<double> g(xv.size()), scratch(xv.size());
  objective(xv, g);
  double worst = 0.0;
  for (std::size_t i : coords) {
    const double orig = xv[i];
    xv[i] = orig + eps;
    const double fp = objective(xv, scratch);
    xv[i] = orig - eps;
    const double fm = objective(xv, scratch);
    xv[i] = orig;
    const double fd = (fp - fm) / (2.0 * eps);
    const double denom = std::max({1.0, std::fabs(fd), std::fabs(g[i])});
    worst = std::max(worst, std::fabs(fd - g[i]) / denom);
  }
  return worst;
}

double grad_check(const Objective& objective, std::span<const double> x,
                  double eps) {
  std::vector<std::size_t> all(x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return grad_check(objective, x, all, eps);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void gemv_acc(std::span<const double> a, std::size_t rows, std::size_t cols,
              std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ar = a.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += ar[c] * x[c];
    y[r] += acc;
  }
}

void gemv_t_acc(std::span<const double> a, std::size_t rows, std::size_t cols,
                std::span<const double> dy, std::span<double> x_grad) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ar = a.data() + r * cols;
    const double d = dy[r];
    if (d == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) x_grad[c] += ar[c] * d;
  }
}

void outer_acc(std::span<double> a_grad, std::size_t rows, std::size_t cols,
               std::span<const double> dy, std::span<const double> x) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double d = dy[r];
    if (d == 0.0) continue;
    double* ar = a_grad.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) ar[c] += d * x[c];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace dsae::numeric
