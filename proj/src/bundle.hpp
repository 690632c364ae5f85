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

#ifndef DSAE_SRC_BUNDLE_HPP_
#define DSAE_SRC_BUNDLE_HPP_

// Helpers shared by the JSON model bundles.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dsae/error.hpp"

namespace dsae::bundle {

using nlohmann::json;

inline constexpr int kBundleVersion = 1;

// rows x cols row-major block as nested arrays.
inline json matrix(std::span<const double> v, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r)
    out.push_back(json(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                           v.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols))));
  return out;
}

inline json vector(std::span<const double> v) {
  return json(std::vector<double>(v.begin(), v.end()));
}

// Flattens a (possibly nested) numeric array and checks its element count.
inline std::vector<double> flatten(const json& j, std::size_t expected,
                                   const std::string& what) {
  std::vector<double> out;
  out.reserve(expected);
  auto rec = [&](const json& x, auto&& self) -> void {
    if (x.is_array()) {
      for (const auto& e : x) self(e, self);
    } else if (x.is_number()) {
      out.push_back(x.get<double>());
    } else {
      throw ParseError("non-numeric value in " + what);
    }
  };
  rec(j, rec);
  if (out.size() != expected)
    throw ParseError(what + ": expected " + std::to_string(expected) +
                     " values, found " + std::to_string(out.size()));
  return out;
}

inline json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model bundle: ") + e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("model bundle lacks '") + key + "'");
  return *it;
}

}  // namespace dsae::bundle

#endif  // DSAE_SRC_BUNDLE_HPP_
