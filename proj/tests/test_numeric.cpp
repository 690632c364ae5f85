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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dsae/error.hpp"
#include "dsae/numeric.hpp"
#include "dsae/rng.hpp"

using namespace dsae;
using namespace dsae::numeric;

namespace {

long double logsumexp_ld(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += std::exp(static_cast<long double>(x));
  return std::log(s);
}

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST_CASE("logsumexp basic values and overflow safety") {
  CHECK(logsumexp(std::vector<double>{0.0, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(logsumexp(std::vector<double>{1000.0, 1000.0}) ==
        doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(logsumexp(std::vector<double>{-INFINITY, 0.0}) == 0.0);
  CHECK_THROWS_AS(logsumexp(std::vector<double>{}), NumericError);
}

TEST_CASE("logsumexp matches extended precision and is shift invariant") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.below(20));
    for (double& x : v) x = rng.uniform(-30.0, 30.0);
    const double got = logsumexp(v);
    CHECK(std::abs(got - static_cast<double>(logsumexp_ld(v))) < 1e-12);
    const double c = rng.uniform(-100.0, 100.0);
    std::vector<double> w = v;
    for (double& x : w) x += c;
    CHECK(std::abs(logsumexp(w) - (got + c)) < 1e-10);
  }
}

TEST_CASE("ParamVector slices partition the storage") {
  ParamVector p;
  p.add_slice("a", 3);
  p.add_slice("b", 0);
  p.add_slice("c", 5);
  CHECK(p.size() == 8);
  std::size_t next = 0;
  for (const auto& s : p.slices()) {
    CHECK(s.offset == next);
    next += s.size;
  }
  CHECK(next == p.size());
  CHECK(p.slice_of(2) == "a");
  CHECK(p.slice_of(3) == "c");
  p.slice("c")[0] = 4.0;
  CHECK(p[3] == 4.0);
}

TEST_CASE("adam_step edge cases") {
  ParamVector p;
  p.add_slice("w", 4);
  for (std::size_t i = 0; i < 4; ++i) p[i] = 0.5 * static_cast<double>(i) - 1.0;
  const auto before = p.values();

  SUBCASE("zero gradient, no decay leaves parameters unchanged") {
    auto st = make_adam(4, 0.01, 0.0);
    adam_step(p, std::vector<double>(4, 0.0), st);
    CHECK(p.values() == before);
  }
  SUBCASE("lr zero is the identity") {
    auto st = make_adam(4, 0.0, 0.3);
    adam_step(p, std::vector<double>{1, -2, 3, -4}, st);
    CHECK(p.values() == before);
  }
  SUBCASE("first step moves each coordinate by lr against the gradient sign") {
    const double lr = 0.01;
    auto st = make_adam(4, lr, 0.0);
    // |g| well above eps / 1e-6 so the eps term stays below tolerance.
    const std::vector<double> g{0.3, -7.0, 0.05, -0.02};
    adam_step(p, g, st);
    for (std::size_t i = 0; i < 4; ++i) {
      const double update = p[i] - before[i];
      const double sign = g[i] > 0 ? 1.0 : -1.0;
      CHECK(std::abs(update + lr * sign) < lr * 1e-6);
    }
  }
  SUBCASE("non-finite gradient names the slice and leaves state alone") {
    auto st = make_adam(4, 0.01, 0.0);
    try {
      adam_step(p, std::vector<double>{0, NAN, 0, 0}, st);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find("w") != std::string::npos);
    }
    CHECK(p.values() == before);
    CHECK(st.t == 0);
  }
}

TEST_CASE("adam drives a quadratic to the origin") {
  ParamVector p;
  p.add_slice("x", 2);
  p[0] = p[1] = 5.0;
  auto st = make_adam(2, 0.1, 0.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> g{2 * p[0], 2 * p[1]};
    adam_step(p, g, st);
  }
  CHECK(std::hypot(p[0], p[1]) < 1e-2);
}

TEST_CASE("adam matches a scalar reference implementation") {
  const double lr = 0.05, wd = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ParamVector p;
  p.add_slice("x", 1);
  p[0] = 3.0;
  auto st = make_adam(1, lr, wd);
  double x = 3.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 50; ++t) {
    const double g = 2.0 * x + 1.0;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t)), vh = v / (1 - std::pow(b2, t));
    x -= lr * mh / (std::sqrt(vh) + eps);
    x -= lr * wd * x;
    adam_step(p, std::vector<double>{2.0 * p[0] + 1.0}, st);
    CHECK(p[0] == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("elastic_net closed forms and oracle") {
  auto z = elastic_net(std::vector<double>{0.0, 0.0}, 0.7, 0.3);
  CHECK(z.penalty == 0.0);
  CHECK(z.subgradient == std::vector<double>{0.0, 0.0});
  auto one = elastic_net(std::vector<double>{2.0}, 1.0, 1.0);
  CHECK(one.penalty == 4.0);
  CHECK(one.subgradient[0] == 3.0);
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(1 + rng.below(30));
    for (double& x : w) x = rng.normal();
    const double c1 = rng.uniform(), c2 = rng.uniform();
    double l1 = 0, l2 = 0;
    for (double x : w) {
      l1 += std::abs(x);
      l2 += x * x;
    }
    CHECK(std::abs(elastic_net(w, c1, c2).penalty - (c1 * l1 + 0.5 * c2 * l2)) < 1e-12);
  }
}

TEST_CASE("lbfgs on a quadratic and on Rosenbrock") {
  LbfgsConfig cfg;
  auto quad = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * (x[0] - 2);
    return (x[0] - 2) * (x[0] - 2);
  };
  auto r = lbfgs_minimize(quad, {10.0}, cfg);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 2.0) < 1e-8);

  auto rb = lbfgs_minimize(rosenbrock, {-1.2, 1.0}, cfg);
  CHECK(rb.iterations <= 200);
  CHECK(std::abs(rb.x[0] - 1.0) < 1e-4);
  CHECK(std::abs(rb.x[1] - 1.0) < 1e-4);
  for (std::size_t i = 1; i < rb.history.size(); ++i) CHECK(rb.history[i] <= rb.history[i - 1]);
}

TEST_CASE("orthant-wise L1 soft-thresholds to exact zero") {
  LbfgsConfig cfg;
  cfg.l1 = 0.1;
  auto f = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0] - 0.05;
    return 0.5 * (x[0] - 0.05) * (x[0] - 0.05);
  };
  for (double x0 : {1.0, -1.0, 0.04, 0.0}) {
    auto r = lbfgs_minimize(f, {x0}, cfg);
    CHECK(r.x[0] == 0.0);
  }
  // Above the threshold the solution is shifted by exactly c1.
  auto g = [](std::span<const double> x, std::span<double> gr) {
    gr[0] = x[0] - 0.5;
    return 0.5 * (x[0] - 0.5) * (x[0] - 0.5);
  };
  auto r = lbfgs_minimize(g, {0.0}, cfg);
  CHECK(r.x[0] == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("grad_check accepts a correct gradient and flags a wrong one") {
  auto sq = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * x[0];
    return x[0] * x[0];
  };
  CHECK(grad_check(sq, std::vector<double>{3.0}) < 1e-8);
  auto wrong = [](std::span<const double> x, std::span<double> g) {
    g[0] = 3 * x[0];
    return x[0] * x[0];
  };
  CHECK(grad_check(wrong, std::vector<double>{3.0}) > 0.1);
  const std::vector<std::size_t> coords{1};
  auto two = [](std::span<const double> x, std::span<double> g) {
    g[0] = 0.0;  // deliberately wrong, not checked
    g[1] = std::cos(x[1]);
    return x[0] + std::sin(x[1]);
  };
  CHECK(grad_check(two, std::vector<double>{1.0, 0.3}, coords) < 1e-8);
}

TEST_CASE("Rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    (void)c;
  }
  Rng d(42);
  Rng e(43);
  CHECK(d.next_u64() != e.next_u64());
}
