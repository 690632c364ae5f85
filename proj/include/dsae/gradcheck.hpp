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

#ifndef DSAE_GRADCHECK_HPP_
#define DSAE_GRADCHECK_HPP_

// Finite-difference checks of the hand-written gradients of the three
// trainable model families on seeded random instances.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dsae::gradcheck {

struct Options {
  std::size_t instances = 10;
  std::uint64_t seed = 0;
  std::size_t lstm_hidden = 64;
  std::size_t cnn_filters = 256;
  // Coordinates checked per instance for the neural models, stratified over
  // parameter slices; 0 checks every coordinate.
  std::size_t coords_per_instance = 400;
  double eps = 1e-5;
};

struct Row {
  std::string family;  // "crf", "lstm-crf", "cnn"
  std::size_t instances = 0;
  std::size_t coordinates = 0;  // total checked
  // Coordinates left out because a +-eps step crosses a max-pool or ReLU
  // switch, where the loss is not differentiable.
  std::size_t skipped = 0;
  double max_rel_error = 0.0;
};

std::vector<Row> run(const Options& options);

// family<TAB>instances<TAB>coordinates<TAB>max_rel_error
std::string to_tsv(const std::vector<Row>& rows);

}  // namespace dsae::gradcheck

#endif  // DSAE_GRADCHECK_HPP_
