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

#include "dsae/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "dsae/error.hpp"
#include "dsae/io.hpp"
#include "dsae/types.hpp"
#include "json.hpp"

namespace dsae::embeddings {

bool EmbeddingTable::add(std::string_view word, std::span<const double> vec) {
  if (dim_ == 0 && words_.empty()) {
    dim_ = vec.size();
    zeros_.assign(dim_, 0.0);
  }
  if (vec.size() != dim_ || dim_ == 0)
    throw InvalidArgument("vector length " + std::to_string(vec.size()) +
                          " differs from table dimension " + std::to_string(dim_));
  std::string key = ascii_lower(word);
  if (vocab_.count(key)) return false;
  vocab_.emplace(key, words_.size());
  words_.push_back(std::move(key));
  matrix_.insert(matrix_.end(), vec.begin(), vec.end());
  return true;
}

Lookup EmbeddingTable::lookup(std::string_view word) const {
  auto it = vocab_.find(ascii_lower(word));
  if (it == vocab_.end()) return {std::span<const double>(zeros_), true};
  return {std::span<const double>(matrix_.data() + it->second * dim_, dim_), false};
}

bool EmbeddingTable::contains(std::string_view word) const {
  return vocab_.count(ascii_lower(word)) > 0;
}

std::string EmbeddingTable::to_text() const {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < words_.size(); ++r) {
    out += words_[r];
    for (std::size_t c = 0; c < dim_; ++c) {
      auto res = std::to_chars(buf, buf + sizeof buf, matrix_[r * dim_ + c]);
      out.push_back(' ');
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_uint(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

StaticLoad parse_static(std::string_view text) {
  StaticLoad out;
  std::size_t dim = 0;
  std::size_t lineno = 0;
  std::vector<double> vec;
  for (std::string_view line : io::split_lines(text)) {
    ++lineno;
    auto f = fields(line);
    if (f.empty()) continue;
    if (dim == 0 && out.table.size() == 0 && f.size() == 2 && is_uint(f[0]) &&
        is_uint(f[1])) {
      dim = std::stoul(std::string(f[1]));
      if (dim == 0) throw ParseError("header declares dimension 0", lineno);
      continue;
    }
    if (f.size() < 2) throw ParseError("expected a word followed by values", lineno);
    if (dim == 0) dim = f.size() - 1;
    if (f.size() - 1 != dim)
      throw ParseError("expected " + std::to_string(dim) + " values, found " +
                           std::to_string(f.size() - 1),
                       lineno);
    vec.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      if (!parse_double(f[k + 1], vec[k])) throw ParseError("bad number", lineno);
    if (out.table.size() == 0) out.table = EmbeddingTable(dim);
    if (!out.table.add(f[0], vec)) ++out.duplicate_warnings;
  }
  return out;
}

StaticLoad load_static(const std::string& path) {
  try {
    return parse_static(io::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::span<const double> ContextualProvider::get(const std::string& doc_id,
                                                std::size_t index) const {
  auto it = store_.find(doc_id);
  if (it != store_.end()) {
    auto jt = it->second.find(index);
    if (jt != it->second.end()) return jt->second;
  }
  throw InvalidArgument("no contextual vector for (" + doc_id + ", " +
                        std::to_string(index) + ")");
}

bool ContextualProvider::has_doc(const std::string& doc_id) const {
  return store_.count(doc_id) > 0;
}

std::size_t ContextualProvider::doc_length(const std::string& doc_id) const {
  auto it = store_.find(doc_id);
  return it == store_.end() ? 0 : it->second.size();
}

void ContextualProvider::add(const std::string& doc_id, std::size_t index,
                             std::vector<double> vec) {
  if (vec.empty()) throw InvalidArgument("empty contextual vector");
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_)
    throw InvalidArgument("contextual vector for (" + doc_id + ", " +
                          std::to_string(index) + ") has length " +
                          std::to_string(vec.size()) + ", expected " +
                          std::to_string(dim_));
  store_[doc_id][index] = std::move(vec);
}

void ContextualProvider::check_coverage() const {
  for (const auto& [doc, rows] : store_) {
    std::size_t expect = 0;
    for (const auto& [idx, v] : rows) {
      if (idx != expect)
        throw InvalidArgument("contextual store misses (" + doc + ", " +
                              std::to_string(expect) + ")");
      ++expect;
    }
  }
}

ContextualProvider parse_contextual(std::string_view jsonl) {
  ContextualProvider p;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(jsonl)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("doc_id") ||
        !j.contains("token_index") || !j.contains("vector") ||
        !j["doc_id"].is_string() || !j["token_index"].is_number_unsigned() ||
        !j["vector"].is_array())
      throw ParseError("expected {doc_id, token_index, vector}", lineno);
    std::vector<double> v;
    for (const auto& x : j["vector"]) {
      if (!x.is_number()) throw ParseError("non-numeric vector entry", lineno);
      v.push_back(x.get<double>());
    }
    try {
      p.add(j["doc_id"].get<std::string>(), j["token_index"].get<std::size_t>(),
            std::move(v));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  try {
    p.check_coverage();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return p;
}

ContextualProvider load_contextual(const std::string& path) {
  return parse_contextual(io::read_file(path));
}

numeric::Matrix StaticVectors::vectors(const normalize::NormalizedDoc& doc) const {
  numeric::Matrix m(doc.tokens.size(), dim());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto l = table_->lookup(doc.tokens[i].surface);
    std::copy(l.vector.begin(), l.vector.end(), m.row(i).begin());
  }
  return m;
}

std::vector<bool> StaticVectors::oov_flags(const normalize::NormalizedDoc& doc) const {
  std::vector<bool> out(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i)
    out[i] = !table_->contains(doc.tokens[i].surface);
  return out;
}

double StaticVectors::oov_rate(const normalize::NormalizedDoc& doc) const {
  if (doc.tokens.empty()) return 0.0;
  std::size_t oov = 0;
  for (const auto& t : doc.tokens) oov += table_->contains(t.surface) ? 0 : 1;
  return static_cast<double>(oov) / static_cast<double>(doc.tokens.size());
}

numeric::Matrix ContextualVectors::vectors(const normalize::NormalizedDoc& doc) const {
  numeric::Matrix m(doc.tokens.size(), dim());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto v = provider_->get(doc.doc_id, i);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

}  // namespace dsae::embeddings
