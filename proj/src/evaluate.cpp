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

#include "dsae/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "dsae/error.hpp"

namespace dsae::evaluate {

EvalCounts& EvalCounts::operator+=(const EvalCounts& o) {
  for (std::size_t t = 0; t < per_type.size(); ++t) {
    per_type[t].cor += o.per_type[t].cor;
    per_type[t].inc_pred += o.per_type[t].inc_pred;
    per_type[t].inc_gold += o.per_type[t].inc_gold;
    per_type[t].par += o.per_type[t].par;
    per_type[t].mis += o.per_type[t].mis;
    per_type[t].spu += o.per_type[t].spu;
  }
  cor += o.cor;
  inc += o.inc;
  par += o.par;
  mis += o.mis;
  spu += o.spu;
  return *this;
}

namespace {

std::size_t overlap(const EntitySpan& a, const EntitySpan& b) {
  const std::size_t s = std::max(a.char_start, b.char_start);
  const std::size_t e = std::min(a.char_end, b.char_end);
  return e > s ? e - s : 0;
}

// Priority tier of a (gold, predicted) pair: 1..4, or 0 when disjoint.
int tier(const EntitySpan& g, const EntitySpan& p) {
  const bool exact = g.char_start == p.char_start && g.char_end == p.char_end;
  if (exact) return g.type == p.type ? 1 : 2;
  if (overlap(g, p) == 0) return 0;
  return g.type == p.type ? 3 : 4;
}

// Minimum-cost perfect assignment on a square matrix (Kuhn-Munkres with
// potentials). Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<long long>>& cost) {
  const std::size_t n = cost.size();
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      long long delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

EvalCounts align_spans(std::span<const EntitySpan> gold,
                       std::span<const EntitySpan> predicted) {
  for (std::size_t i = 0; i < gold.size(); ++i)
    for (std::size_t j = i + 1; j < gold.size(); ++j)
      if (gold[i].type == gold[j].type && overlap(gold[i], gold[j]) > 0)
        throw InvalidArgument("overlapping same-type gold spans");

  const std::size_t n = gold.size(), m = predicted.size();
  const std::size_t N = std::max(n, m);
  EvalCounts c;
  std::vector<bool> gold_used(n, false), pred_used(m, false);

  if (N > 0) {
    // Lexicographic tier weights; total overlap is the final tie-breaker.
    long long slack = 1;
    for (const auto& g : gold) slack += static_cast<long long>(g.char_end - g.char_start);
    const __int128 base = static_cast<__int128>(N) + 1;
    const __int128 top = static_cast<__int128>(slack) * base * base * base * base;
    if (top > static_cast<__int128>(std::numeric_limits<long long>::max() / 4))
      throw InvalidArgument("too many spans to align in one document");
    std::array<long long, 5> weight{};
    weight[4] = slack;
    weight[3] = static_cast<long long>(slack * base);
    weight[2] = static_cast<long long>(slack * base * base);
    weight[1] = static_cast<long long>(slack * base * base * base);

    std::vector<std::vector<long long>> cost(N, std::vector<long long>(N, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const int t = tier(gold[i], predicted[j]);
        if (t > 0)
          cost[i][j] = -(weight[static_cast<std::size_t>(t)] +
                         static_cast<long long>(overlap(gold[i], predicted[j])));
      }
    const auto assign = hungarian(cost);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = assign[i];
      if (j >= m) continue;
      const int t = tier(gold[i], predicted[j]);
      if (t == 0) continue;
      gold_used[i] = pred_used[j] = true;
      auto& gt = c.per_type[static_cast<std::size_t>(gold[i].type)];
      auto& pt = c.per_type[static_cast<std::size_t>(predicted[j].type)];
      if (t == 1) {
        ++gt.cor;
        ++c.cor;
      } else if (t == 3) {
        ++gt.par;
        ++c.par;
      } else {
        ++gt.inc_gold;
        ++pt.inc_pred;
        ++c.inc;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!gold_used[i]) {
      ++c.per_type[static_cast<std::size_t>(gold[i].type)].mis;
      ++c.mis;
    }
  for (std::size_t j = 0; j < m; ++j)
    if (!pred_used[j]) {
      ++c.per_type[static_cast<std::size_t>(predicted[j].type)].spu;
      ++c.spu;
    }
  return c;
}

namespace {
double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }
Metrics harmonic(double p, double r) {
  return {p, r, p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0};
}
}  // namespace

Metrics metrics(long cor, long inc_p, long inc_g, long par, long mis, long spu) {
  const double credit = static_cast<double>(cor) + 0.5 * static_cast<double>(par);
  const double p = ratio(credit, static_cast<double>(cor + inc_p + par + spu));
  const double r = ratio(credit, static_cast<double>(cor + inc_g + par + mis));
  return harmonic(p, r);
}

Metrics metrics(const EvalCounts& c) {
  return metrics(c.cor, c.inc, c.inc, c.par, c.mis, c.spu);
}

Metrics metrics(const EvalCounts& c, EntityType t) {
  const auto& k = c.of(t);
  return metrics(k.cor, k.inc_pred, k.inc_gold, k.par, k.mis, k.spu);
}

Metrics from_counts(long tp, long fp, long fn) {
  return harmonic(ratio(static_cast<double>(tp), static_cast<double>(tp + fp)),
                  ratio(static_cast<double>(tp), static_cast<double>(tp + fn)));
}

namespace {
using RelKey = std::tuple<std::string, int, std::size_t, std::size_t, int,
                          std::size_t, std::size_t>;
RelKey key_of(const RelationInstance& r) {
  return {r.doc_id,
          static_cast<int>(r.head.type), r.head.char_start, r.head.char_end,
          static_cast<int>(r.tail.type), r.tail.char_start, r.tail.char_end};
}
}  // namespace

std::map<RelationLabel, LabelScore> relation_metrics(
    std::span<const RelationInstance> gold,
    std::span<const RelationInstance> predicted) {
  std::map<RelationLabel, LabelScore> out;
  for (RelationLabel l : {RelationLabel::Indication, RelationLabel::AdverseEvent}) {
    std::set<RelKey> g, p;
    for (const auto& r : gold)
      if (r.label == l) g.insert(key_of(r));
    for (const auto& r : predicted)
      if (r.label == l) p.insert(key_of(r));
    LabelScore s;
    for (const auto& k : p) s.tp += g.count(k) ? 1 : 0;
    s.fp = static_cast<long>(p.size()) - s.tp;
    s.fn = static_cast<long>(g.size()) - s.tp;
    s.m = from_counts(s.tp, s.fp, s.fn);
    out[l] = s;
  }
  return out;
}

double cohen_kappa(std::span<const int> a, std::span<const int> b) {
  if (a.empty()) throw InvalidArgument("kappa of empty label sequences");
  if (a.size() != b.size()) throw InvalidArgument("kappa inputs differ in length");
  std::map<int, double> ca, cb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    agree += a[i] == b[i] ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(a.size());
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [label, count] : ca)
    if (auto it = cb.find(label); it != cb.end()) pe += (count / n) * (it->second / n);
  if (pe >= 1.0) {
    if (po == 1.0) return 1.0;
    throw NumericError("kappa undefined: chance agreement is 1");
  }
  return (po - pe) / (1.0 - pe);
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-16;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

TTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("paired samples differ in length");
  if (a.size() < 2) throw InvalidArgument("paired t-test needs n >= 2");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const Summary s = summarize(d);
  TTest r;
  r.df = static_cast<double>(d.size() - 1);
  if (s.std == 0.0) {
    if (s.mean == 0.0) return r;  // t = 0, p = 1
    r.degenerate = true;
    r.t = s.mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.significant = true;
    return r;
  }
  r.t = s.mean / (s.std / std::sqrt(static_cast<double>(d.size())));
  r.p = incomplete_beta(0.5 * r.df, 0.5, r.df / (r.df + r.t * r.t));
  r.significant = r.p < 0.001;
  return r;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return s;
}

RunStats replicate(const Experiment& experiment, std::size_t n,
                   std::uint64_t base_seed) {
  RunStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = base_seed + i;
    try {
      stats.runs.push_back(experiment(seed));
    } catch (const std::exception& e) {
      throw Error("run with seed " + std::to_string(seed) + " failed: " + e.what());
    }
    stats.seeds.push_back(seed);
  }
  std::map<std::string, std::vector<double>> columns;
  for (const auto& run : stats.runs)
    for (const auto& [k, v] : run) columns[k].push_back(v);
  for (const auto& [k, vs] : columns) stats.summary[k] = summarize(vs);
  return stats;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string metrics_tsv(std::span<const MetricsRow> rows) {
  std::ostringstream os;
  os << "scope\tlabel\tprecision\trecall\tf1\tmean\tstd\tn\n";
  for (const auto& r : rows)
    os << r.scope << '\t' << r.label << '\t' << format_double(r.precision) << '\t'
       << format_double(r.recall) << '\t' << format_double(r.f1) << '\t'
       << format_double(r.mean) << '\t' << format_double(r.std) << '\t' << r.n
       << '\n';
  return os.str();
}

}  // namespace dsae::evaluate
