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

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "dsae/error.hpp"
#include "dsae/evaluate.hpp"
#include "dsae/rng.hpp"

using namespace dsae;
using namespace dsae::evaluate;

namespace {

EntitySpan span(EntityType type, std::size_t start, std::size_t end) {
  EntitySpan e;
  e.type = type;
  e.char_start = e.token_start = start;
  e.char_end = e.token_end = end;
  return e;
}

std::size_t overlap(const EntitySpan& a, const EntitySpan& b) {
  const auto lo = std::max(a.char_start, b.char_start);
  const auto hi = std::min(a.char_end, b.char_end);
  return hi > lo ? hi - lo : 0;
}

// Tier counts (exact same, exact other, overlap same, overlap other) plus
// total overlap of the lexicographically best matching, by enumeration.
using Score = std::array<long, 5>;

void best_matching(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred,
                   std::size_t g, std::vector<bool>& used, Score cur, Score& best) {
  if (g == gold.size()) {
    best = std::max(best, cur);
    return;
  }
  best_matching(gold, pred, g + 1, used, cur, best);
  for (std::size_t p = 0; p < pred.size(); ++p) {
    const auto ov = overlap(gold[g], pred[p]);
    if (used[p] || ov == 0) continue;
    const bool exact = gold[g].char_start == pred[p].char_start &&
                       gold[g].char_end == pred[p].char_end;
    const bool same = gold[g].type == pred[p].type;
    Score next = cur;
    next[exact ? (same ? 0 : 1) : (same ? 2 : 3)] += 1;
    next[4] += static_cast<long>(ov);
    used[p] = true;
    best_matching(gold, pred, g + 1, used, next, best);
    used[p] = false;
  }
}

std::vector<EntitySpan> random_spans(Rng& rng, std::size_t count, bool no_same_type_overlap) {
  std::vector<EntitySpan> out;
  int attempts = 0;
  while (out.size() < count && attempts++ < 200) {
    const std::size_t s = rng.below(20);
    const auto e = span(kEntityTypes[rng.below(3)], s, s + 1 + rng.below(5));
    bool ok = true;
    for (const auto& o : out) {
      if (o.char_start == e.char_start && o.char_end == e.char_end && o.type == e.type) ok = false;
      if (no_same_type_overlap && o.type == e.type && overlap(o, e) > 0) ok = false;
    }
    if (ok) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("the five scoring scenarios") {
  // "flaxseed and vitamin c and folate gave headache then headache"
  const auto S = EntityType::Supplement;
  const auto Y = EntityType::Symptom;
  const std::vector<EntitySpan> gold = {span(S, 0, 8), span(S, 13, 22), span(S, 27, 33),
                                        span(Y, 39, 47)};
  const std::vector<EntitySpan> pred = {span(Y, 53, 61), span(S, 13, 20), span(S, 27, 33),
                                        span(S, 39, 47)};
  const auto c = align_spans(gold, pred);
  CHECK(c.cor == 1);
  CHECK(c.inc == 1);
  CHECK(c.par == 1);
  CHECK(c.mis == 1);
  CHECK(c.spu == 1);
  const auto m = metrics(c);
  CHECK(m.precision == 0.375);
  CHECK(m.recall == 0.375);
  CHECK(m.f1 == 0.375);

  // Per type: the INC counts against Supplement precision and Symptom recall.
  CHECK(c.of(S).inc_pred == 1);
  CHECK(c.of(Y).inc_gold == 1);
  CHECK(metrics(c, Y).precision == 0.0);

  const auto same = align_spans(gold, gold);
  CHECK(same.cor == 4);
  CHECK(metrics(same).f1 == 1.0);
  CHECK(metrics(0, 0, 0, 0, 0, 0).f1 == 0.0);

  const std::vector<EntitySpan> bad = {span(S, 0, 5), span(S, 3, 8)};
  CHECK_THROWS_AS(align_spans(bad, pred), InvalidArgument);
}

TEST_CASE("align_spans matches the exhaustive priority oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto gold = random_spans(rng, rng.below(7), true);
    const auto pred = random_spans(rng, rng.below(7), false);
    Score best{};
    std::vector<bool> used(pred.size(), false);
    best_matching(gold, pred, 0, used, Score{}, best);
    const auto c = align_spans(gold, pred);
    const long matched = best[0] + best[1] + best[2] + best[3];
    CHECK(c.cor == best[0]);
    CHECK(c.inc == best[1] + best[3]);
    CHECK(c.par == best[2]);
    CHECK(c.mis == static_cast<long>(gold.size()) - matched);
    CHECK(c.spu == static_cast<long>(pred.size()) - matched);
    long inc_p = 0, inc_g = 0;
    for (const auto& t : c.per_type) {
      inc_p += t.inc_pred;
      inc_g += t.inc_gold;
    }
    CHECK(inc_p == c.inc);
    CHECK(inc_g == c.inc);
  }
}

TEST_CASE("metrics properties") {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    long v[5];
    for (auto& x : v) x = static_cast<long>(rng.below(6));
    const auto m = metrics(v[0], v[1], v[1], v[2], v[3], v[4]);
    const auto up = metrics(v[0] + 1, v[1], v[1], v[2], v[3], v[4]);
    for (double x : {m.precision, m.recall, m.f1}) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
    CHECK(up.precision >= m.precision);
    CHECK(up.recall >= m.recall);
    CHECK(up.f1 >= m.f1);
  }
  CHECK(metrics(7, 0, 0, 0, 0, 0).f1 == 1.0);
  const auto f = from_counts(3, 1, 2);
  CHECK(f.precision == 0.75);
  CHECK(f.recall == 0.6);
  CHECK(f.f1 == doctest::Approx(2 * 0.75 * 0.6 / 1.35));
}

TEST_CASE("relation metrics equal a direct tally") {
  Rng rng(4);
  const RelationLabel labels[] = {RelationLabel::Indication, RelationLabel::AdverseEvent};
  auto make = [](int doc, int head, int tail, RelationLabel l) {
    RelationInstance r;
    r.doc_id = "d" + std::to_string(doc);
    r.head = span(EntityType::Supplement, head * 10, head * 10 + 4);
    r.tail = span(EntityType::Symptom, 100 + tail * 10, 104 + tail * 10);
    r.label = l;
    return r;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::set<std::tuple<int, int, int>> gkeys, pkeys;
    std::vector<RelationInstance> gold, pred;
    std::set<std::tuple<int, int, int, int>> gset, pset;
    for (int i = 0; i < 8; ++i) {
      const int d = static_cast<int>(rng.below(2)), h = static_cast<int>(rng.below(3)),
                t = static_cast<int>(rng.below(3)), l = static_cast<int>(rng.below(2));
      if (gkeys.insert({d, h, t}).second) {
        gold.push_back(make(d, h, t, labels[l]));
        gset.insert({d, h, t, l});
      }
    }
    for (int i = 0; i < 8; ++i) {
      const int d = static_cast<int>(rng.below(2)), h = static_cast<int>(rng.below(3)),
                t = static_cast<int>(rng.below(3)), l = static_cast<int>(rng.below(2));
      if (pkeys.insert({d, h, t}).second) {
        pred.push_back(make(d, h, t, labels[l]));
        pset.insert({d, h, t, l});
      }
    }
    const auto got = relation_metrics(gold, pred);
    for (int l = 0; l < 2; ++l) {
      long tp = 0, np = 0, ng = 0;
      for (const auto& k : pset)
        if (std::get<3>(k) == l) {
          ++np;
          tp += gset.count(k);
        }
      for (const auto& k : gset) ng += std::get<3>(k) == l;
      const auto& s = got.at(labels[l]);
      CHECK(s.tp == tp);
      CHECK(s.fp == np - tp);
      CHECK(s.fn == ng - tp);
    }
  }
  // Correct pair with the wrong label: FP for one label, FN for the other.
  const std::vector<RelationInstance> g = {make(0, 0, 0, RelationLabel::Indication)};
  const std::vector<RelationInstance> p = {make(0, 0, 0, RelationLabel::AdverseEvent)};
  const auto s = relation_metrics(g, p);
  CHECK(s.at(RelationLabel::AdverseEvent).fp == 1);
  CHECK(s.at(RelationLabel::Indication).fn == 1);
  CHECK(relation_metrics(g, g).at(RelationLabel::Indication).m.f1 == 1.0);
}

TEST_CASE("Cohen's kappa") {
  std::vector<int> a, b;
  auto push = [&](int x, int y, int n) {
    for (int i = 0; i < n; ++i) {
      a.push_back(x);
      b.push_back(y);
    }
  };
  push(0, 0, 20);
  push(0, 1, 5);
  push(1, 0, 10);
  push(1, 1, 15);
  CHECK(cohen_kappa(a, b) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(cohen_kappa(a, a) == 1.0);
  // Consistent relabelling leaves kappa unchanged.
  std::vector<int> a2 = a, b2 = b;
  for (auto& x : a2) x = 7 - x;
  for (auto& x : b2) x = 7 - x;
  CHECK(cohen_kappa(a2, b2) == doctest::Approx(0.4).epsilon(1e-12));
  const std::vector<int> ones(4, 1);
  CHECK(cohen_kappa(ones, ones) == 1.0);
  CHECK_THROWS(cohen_kappa(std::vector<int>{}, std::vector<int>{}));
  CHECK_THROWS(cohen_kappa(std::vector<int>{1}, std::vector<int>{1, 2}));

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> x(10), y(10);
    for (auto& v : x) v = static_cast<int>(rng.below(3));
    for (auto& v : y) v = static_cast<int>(rng.below(3));
    if (x == y) continue;
    try {
      const double k = cohen_kappa(x, y);
      CHECK(k >= -1.0);
      CHECK(k < 1.0);
    } catch (const InvalidArgument&) {
    }
  }
}

TEST_CASE("Student t distribution against boost") {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = rng.uniform(0.2, 30.0), b = rng.uniform(0.2, 30.0), x = rng.uniform();
    CHECK(std::abs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-10);
    const double df = 1.0 + static_cast<double>(rng.below(40));
    const double t = rng.uniform(-12.0, 12.0);
    const boost::math::students_t dist(df);
    CHECK(std::abs(student_t_cdf(t, df) - boost::math::cdf(dist, t)) < 1e-8);
  }
}

TEST_CASE("paired t-test") {
  const std::vector<double> a = {2, 4, 6, 8}, b = {1, 2, 3, 4};
  const auto r = paired_t_test(a, b);
  const double t_oracle = 2.5 / (std::sqrt(5.0 / 3.0) / 2.0);
  const boost::math::students_t dist(3.0);
  const double p_oracle = 2.0 * boost::math::cdf(boost::math::complement(dist, t_oracle));
  CHECK(r.t == doctest::Approx(t_oracle).epsilon(1e-12));
  CHECK(r.t == doctest::Approx(3.873).epsilon(1e-3));
  CHECK(r.df == 3.0);
  CHECK(std::abs(r.p - p_oracle) < 1e-10);
  CHECK(r.p == doctest::Approx(0.0305).epsilon(1e-2));
  CHECK_FALSE(r.significant);

  const auto swapped = paired_t_test(b, a);
  CHECK(swapped.t == doctest::Approx(-r.t));
  CHECK(swapped.p == doctest::Approx(r.p));

  const auto same = paired_t_test(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);

  const std::vector<double> shifted = {3, 5, 7, 9};
  const auto deg = paired_t_test(shifted, a);
  CHECK(deg.degenerate);
  CHECK(deg.p == 0.0);
}

TEST_CASE("replicate and summaries") {
  const auto two = replicate([](std::uint64_t s) { return RunMetrics{{"f1", s ? 0.9 : 0.7}}; }, 2, 0);
  CHECK(two.summary.at("f1").mean == doctest::Approx(0.8));
  CHECK(two.summary.at("f1").std == doctest::Approx(std::sqrt(0.02)));
  CHECK(two.seeds == std::vector<std::uint64_t>{0, 1});

  const auto constant = replicate([](std::uint64_t) { return RunMetrics{{"f1", 0.5}}; }, 20, 3);
  CHECK(constant.n() == 20);
  CHECK(constant.summary.at("f1").std == 0.0);
  CHECK(constant.seeds.front() == 3);

  auto noisy = [](std::uint64_t s) {
    Rng rng(s);
    return RunMetrics{{"f1", rng.uniform()}};
  };
  const auto r1 = replicate(noisy, 5, 10), r2 = replicate(noisy, 5, 10);
  for (std::size_t i = 0; i < 5; ++i) CHECK(r1.runs[i] == r2.runs[i]);

  try {
    replicate([](std::uint64_t s) -> RunMetrics {
      if (s == 4) throw NumericError("nan");
      return {{"f1", 1.0}};
    }, 10, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("seed 4") != std::string::npos);
  }
  CHECK(summarize(std::vector<double>{1.0}).std == 0.0);
}

TEST_CASE("metrics TSV") {
  const std::vector<MetricsRow> rows = {{"ner:crf:test", "Supplement", 0.5, 0.25, 1.0 / 3, 0.0, 0.0, 1}};
  const auto tsv = metrics_tsv(rows);
  CHECK(tsv.rfind("scope\tlabel\tprecision\trecall\tf1\tmean\tstd\tn\n", 0) == 0);
  CHECK(tsv.find("ner:crf:test\tSupplement\t0.5\t0.25\t0.3333333333333333\t0\t0\t1\n") !=
        std::string::npos);
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}
