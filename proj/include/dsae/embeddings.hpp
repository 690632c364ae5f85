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

#ifndef DSAE_EMBEDDINGS_HPP_
#define DSAE_EMBEDDINGS_HPP_

// Token vector sources: static word-vector tables (OOV -> zero vector plus a
// flag) and precomputed contextual vectors keyed by (doc_id, token index).

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsae/normalize.hpp"
#include "dsae/numeric.hpp"

namespace dsae::embeddings {

struct Lookup {
  std::span<const double> vector;
  bool oov = false;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim), zeros_(dim, 0.0) {}

  // Returns false (and leaves the table unchanged) if the case-folded word
  // is already present. Throws InvalidArgument on a length mismatch.
  bool add(std::string_view word, std::span<const double> vec);

  Lookup lookup(std::string_view word) const;
  bool contains(std::string_view word) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // "word v1 ... vd" per line, shortest round-trip decimals.
  std::string to_text() const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> vocab_;
  std::vector<std::string> words_;
  std::vector<double> matrix_;
  std::vector<double> zeros_;
};

struct StaticLoad {
  EmbeddingTable table;
  std::size_t duplicate_warnings = 0;
};

// Whitespace-separated text vectors. The dimension comes from the first line;
// a leading "<count> <dim>" header line is accepted. A line with a different
// number of values raises ParseError with its line number. Duplicate words
// keep the first vector.
StaticLoad load_static(const std::string& path);
StaticLoad parse_static(std::string_view text);

class ContextualProvider {
 public:
  std::size_t dim() const { return dim_; }
  // Throws InvalidArgument naming (doc_id, index) when absent.
  std::span<const double> get(const std::string& doc_id, std::size_t index) const;
  bool has_doc(const std::string& doc_id) const;
  std::size_t doc_length(const std::string& doc_id) const;

  void add(const std::string& doc_id, std::size_t index, std::vector<double> vec);
  // Every listed document must cover indices 0..n-1 without gaps.
  void check_coverage() const;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> store_;
};

// JSON Lines {doc_id, token_index, vector:[...]}.
ContextualProvider load_contextual(const std::string& path);
ContextualProvider parse_contextual(std::string_view jsonl);

// Dense per-token inputs for the neural models.
class TokenVectors {
 public:
  virtual ~TokenVectors() = default;
  virtual std::size_t dim() const = 0;
  // L x dim matrix, one row per token of `doc`.
  virtual numeric::Matrix vectors(const normalize::NormalizedDoc& doc) const = 0;
  // Per-token flag: true when the token had no vector (row is zero).
  virtual std::vector<bool> oov_flags(const normalize::NormalizedDoc& doc) const {
    return std::vector<bool>(doc.tokens.size(), false);
  }
  // Fraction of tokens with no vector (diagnostic).
  virtual double oov_rate(const normalize::NormalizedDoc& doc) const = 0;
};

class StaticVectors : public TokenVectors {
 public:
  explicit StaticVectors(const EmbeddingTable& table) : table_(&table) {}
  std::size_t dim() const override { return table_->dim(); }
  numeric::Matrix vectors(const normalize::NormalizedDoc& doc) const override;
  std::vector<bool> oov_flags(const normalize::NormalizedDoc& doc) const override;
  double oov_rate(const normalize::NormalizedDoc& doc) const override;
  const EmbeddingTable& table() const { return *table_; }

 private:
  const EmbeddingTable* table_;
};

class ContextualVectors : public TokenVectors {
 public:
  explicit ContextualVectors(const ContextualProvider& p) : provider_(&p) {}
  std::size_t dim() const override { return provider_->dim(); }
  numeric::Matrix vectors(const normalize::NormalizedDoc& doc) const override;
  double oov_rate(const normalize::NormalizedDoc&) const override { return 0.0; }

 private:
  const ContextualProvider* provider_;
};

}  // namespace dsae::embeddings

#endif  // DSAE_EMBEDDINGS_HPP_
