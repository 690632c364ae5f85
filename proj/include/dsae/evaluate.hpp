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

#ifndef DSAE_EVALUATE_HPP_
#define DSAE_EVALUATE_HPP_

// Partial-match entity scoring (COR / INC / PAR / MIS / SPU), relation
// precision/recall/F1, Cohen's kappa, paired t-tests and multi-run summaries.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsae/annotation.hpp"
#include "dsae/types.hpp"

namespace dsae::evaluate {

using annotation::EntitySpan;
using annotation::RelationInstance;

struct TypeCounts {
  long cor = 0;
  long inc_pred = 0;  // predicted as this type, gold type differs
  long inc_gold = 0;  // gold of this type, predicted type differs
  long par = 0;
  long mis = 0;
  long spu = 0;
};

struct EvalCounts {
  std::array<TypeCounts, kNumEntityTypes> per_type{};
  long cor = 0, inc = 0, par = 0, mis = 0, spu = 0;

  const TypeCounts& of(EntityType t) const {
    return per_type[static_cast<std::size_t>(t)];
  }
  EvalCounts& operator+=(const EvalCounts& o);
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// One-to-one alignment maximising, in strict priority order, the number of
// (1) exact same-type, (2) exact other-type, (3) overlapping same-type and
// (4) overlapping other-type pairs; larger total overlap breaks remaining
// ties. Throws InvalidArgument when same-type gold spans overlap.
EvalCounts align_spans(std::span<const EntitySpan> gold,
                       std::span<const EntitySpan> predicted);

// (COR + 0.5 PAR) / (COR + INC + PAR + SPU) and
// (COR + 0.5 PAR) / (COR + INC + PAR + MIS); 0/0 is 0.
Metrics metrics(long cor, long inc_p, long inc_g, long par, long mis, long spu);
Metrics metrics(const EvalCounts& c);               // micro
Metrics metrics(const EvalCounts& c, EntityType t);  // per type
Metrics from_counts(long tp, long fp, long fn);

struct LabelScore {
  long tp = 0, fp = 0, fn = 0;
  Metrics m;
};

// Per relation label (Indication, AdverseEvent). A prediction is correct iff
// the document, label and both endpoint spans (type and offsets) match.
std::map<RelationLabel, LabelScore> relation_metrics(
    std::span<const RelationInstance> gold,
    std::span<const RelationInstance> predicted);

// kappa = (po - pe) / (1 - pe). Throws on empty or unequal inputs, and when
// pe == 1 without perfect agreement.
double cohen_kappa(std::span<const int> a, std::span<const int> b);

// Regularised incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);

struct TTest {
  double t = 0.0;
  double p = 1.0;  // two-sided
  double df = 0.0;
  bool significant = false;  // p < 0.001
  bool degenerate = false;   // zero-variance differences with nonzero mean
};

TTest paired_t_test(std::span<const double> a, std::span<const double> b);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 when n < 2
};

Summary summarize(std::span<const double> values);

using RunMetrics = std::map<std::string, double>;
using Experiment = std::function<RunMetrics(std::uint64_t seed)>;

struct RunStats {
  std::vector<std::uint64_t> seeds;
  std::vector<RunMetrics> runs;
  std::map<std::string, Summary> summary;
  std::size_t n() const { return runs.size(); }
};

// Runs seeds base..base+n-1 in order. A failing run aborts with an Error
// naming its seed.
RunStats replicate(const Experiment& experiment, std::size_t n = 20,
                   std::uint64_t base_seed = 0);

struct MetricsRow {
  std::string scope;
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 1;
};

// Header plus one line per row: scope, label, precision, recall, f1, mean,
// std, n.
std::string metrics_tsv(std::span<const MetricsRow> rows);
std::string format_double(double v);

}  // namespace dsae::evaluate

#endif  // DSAE_EVALUATE_HPP_
