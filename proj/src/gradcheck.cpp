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

#include "dsae/gradcheck.hpp"

#include <algorithm>
#include <sstream>

#include "dsae/evaluate.hpp"
#include "dsae/ner.hpp"
#include "dsae/numeric.hpp"
#include "dsae/relation.hpp"
#include "dsae/rng.hpp"

namespace dsae::gradcheck {

namespace {

// Up to `budget` coordinates, spread evenly over the slices of `p`.
std::vector<std::size_t> sample_coords(const numeric::ParamVector& p, std::size_t budget,
                                       Rng& rng) {
  std::vector<std::size_t> out;
  if (budget == 0 || budget >= p.size()) {
    out.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = i;
    return out;
  }
  const std::size_t per = std::max<std::size_t>(1, budget / p.slices().size());
  for (const auto& s : p.slices()) {
    if (s.size <= per) {
      for (std::size_t i = 0; i < s.size; ++i) out.push_back(s.offset + i);
      continue;
    }
    for (std::size_t i = 0; i < per; ++i) out.push_back(s.offset + rng.below(s.size));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Row check_crf(const Options& o, Rng& rng) {
  Row row{"crf", o.instances, 0, 0, 0.0};
  for (std::size_t n = 0; n < o.instances; ++n) {
    ner::CrfModel m;
    m.num_labels = 3;
    m.embedding_dim = 3;
    for (int f = 0; f < 10; ++f) m.registry.add("f" + std::to_string(f));
    m.registry.freeze();
    m.weights.resize(m.unary_size() + 9);
    for (double& w : m.weights) w = 0.5 * rng.normal();
    const std::size_t L = 5;
    ner::EncodedSeq seq;
    seq.active.resize(L);
    seq.dense = numeric::Matrix(L, m.dense_dim());
    std::vector<int> gold(L);
    for (std::size_t t = 0; t < L; ++t) {
      for (std::uint32_t f = 0; f < 10; ++f)
        if (rng.bernoulli(0.3)) seq.active[t].push_back(f);
      for (std::size_t j = 0; j < m.embedding_dim; ++j) seq.dense(t, j) = rng.normal();
      seq.dense(t, m.embedding_dim) = rng.bernoulli(0.2) ? 1.0 : 0.0;
      gold[t] = static_cast<int>(rng.below(3));
    }
    numeric::Objective f = [&](std::span<const double> x, std::span<double> g) {
      std::copy(x.begin(), x.end(), m.weights.begin());
      std::fill(g.begin(), g.end(), 0.0);
      return ner::crf_neg_log_likelihood(m, seq, gold, g);
    };
    const std::vector<double> x0 = m.weights;
    row.max_rel_error = std::max(row.max_rel_error, numeric::grad_check(f, x0, o.eps));
    row.coordinates += x0.size();
  }
  return row;
}

Row check_lstm(const Options& o, Rng& rng) {
  Row row{"lstm-crf", o.instances, 0, 0, 0.0};
  for (std::size_t n = 0; n < o.instances; ++n) {
    ner::LstmCrfConfig cfg;
    cfg.hidden = o.lstm_hidden;
    cfg.seed = rng.next_u64();
    const std::size_t d = 6, L = 3;
    ner::LstmCrfModel m = ner::lstm_crf_init(d, cfg);
    for (double& v : m.params.slice("trans")) v = 0.3 * rng.normal();
    for (double& v : m.params.slice("proj.b")) v = 0.3 * rng.normal();
    numeric::Matrix x(L, d);
    for (double& v : x.data) v = rng.normal();
    std::vector<int> gold(L);
    for (int& g : gold) g = static_cast<int>(rng.below(m.num_labels));
    numeric::Objective f = [&](std::span<const double> p, std::span<double> g) {
      std::copy(p.begin(), p.end(), m.params.values().begin());
      std::fill(g.begin(), g.end(), 0.0);
      return ner::lstm_crf_nll(m, x, gold, g);
    };
    const std::vector<double> x0 = m.params.values();
    const auto coords = sample_coords(m.params, o.coords_per_instance, rng);
    row.max_rel_error = std::max(row.max_rel_error, numeric::grad_check(f, x0, coords, o.eps));
    row.coordinates += coords.size();
  }
  return row;
}

// True when moving coordinate i by +-eps changes which rows win the max-pool
// or which conv units are active.
bool crosses_kink(relation::CnnModel& m, const relation::EncodedInstance& x, std::size_t i,
                  double eps) {
  const double orig = m.params[i];
  relation::CnnCache up, down;
  m.params[i] = orig + eps;
  relation::cnn_forward(m, x, false, nullptr, &up);
  m.params[i] = orig - eps;
  relation::cnn_forward(m, x, false, nullptr, &down);
  m.params[i] = orig;
  if (up.argmax != down.argmax) return true;
  for (std::size_t k = 0; k < up.conv.data.size(); ++k)
    if ((up.conv.data[k] > 0.0) != (down.conv.data[k] > 0.0)) return true;
  return false;
}

Row check_cnn(const Options& o, Rng& rng) {
  Row row{"cnn", o.instances, 0, 0, 0.0};
  for (std::size_t n = 0; n < o.instances; ++n) {
    relation::CnnConfig cfg;
    cfg.filters = o.cnn_filters;
    cfg.encode.max_len = 16;
    cfg.seed = rng.next_u64();
    const std::size_t d = 6, L = 8;
    relation::CnnModel m = relation::cnn_init(d, cfg);
    for (double& v : m.params.slice("conv.b")) v = 0.1 * rng.normal();
    for (double& v : m.params.slice("out.b")) v = 0.3 * rng.normal();

    normalize::NormalizedDoc doc;
    doc.doc_id = "g" + std::to_string(n);
    for (std::size_t i = 0; i < L; ++i) {
      normalize::Token t;
      t.surface = "w" + std::to_string(i);
      t.start = doc.normalized_text.size() + (i ? 1 : 0);
      doc.normalized_text += (i ? " " : "") + t.surface;
      t.end = doc.normalized_text.size();
      doc.tokens.push_back(t);
    }
    numeric::Matrix vec(L, d);
    for (double& v : vec.data) v = rng.normal();
    annotation::RelationInstance inst;
    inst.head.type = EntityType::Supplement;
    inst.head.token_start = 1;
    inst.head.token_end = 3;
    inst.tail.type = EntityType::Symptom;
    inst.tail.token_start = 5;
    inst.tail.token_end = 6;
    inst.head.char_start = doc.tokens[1].start;
    inst.head.char_end = doc.tokens[2].end;
    inst.tail.char_start = doc.tokens[5].start;
    inst.tail.char_end = doc.tokens[5].end;
    const auto x = relation::encode_instance(inst, doc, vec, cfg.encode);
    const int label = static_cast<int>(rng.below(kNumRelationLabels));
    numeric::Objective f = [&](std::span<const double> p, std::span<double> g) {
      std::copy(p.begin(), p.end(), m.params.values().begin());
      std::fill(g.begin(), g.end(), 0.0);
      return relation::cnn_loss(m, x, label, 1.0, g, false);
    };
    const std::vector<double> x0 = m.params.values();
    std::vector<std::size_t> coords;
    for (std::size_t i : sample_coords(m.params, o.coords_per_instance, rng)) {
      if (crosses_kink(m, x, i, o.eps))
        ++row.skipped;
      else
        coords.push_back(i);
    }
    m.params.values() = x0;
    row.max_rel_error = std::max(row.max_rel_error, numeric::grad_check(f, x0, coords, o.eps));
    row.coordinates += coords.size();
  }
  return row;
}

}  // namespace

std::vector<Row> run(const Options& options) {
  Rng rng(options.seed);
  std::vector<Row> rows;
  rows.push_back(check_crf(options, rng));
  rows.push_back(check_lstm(options, rng));
  rows.push_back(check_cnn(options, rng));
  return rows;
}

std::string to_tsv(const std::vector<Row>& rows) {
  std::ostringstream os;
  os << "family\tinstances\tcoordinates\tskipped\tmax_rel_error\n";
  for (const auto& r : rows)
    os << r.family << '\t' << r.instances << '\t' << r.coordinates << '\t' << r.skipped << '\t'
       << evaluate::format_double(r.max_rel_error) << '\n';
  return os.str();
}

}  // namespace dsae::gradcheck
