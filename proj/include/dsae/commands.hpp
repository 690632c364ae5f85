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

#ifndef DSAE_COMMANDS_HPP_
#define DSAE_COMMANDS_HPP_

// Reproducible experiment commands driven by a single JSON configuration.
// Every command writes its artifacts atomically under paths.out together
// with "<command>.manifest.json" (config snapshot, seeds, SHA-256 of every
// input read and artifact written).

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dsae::commands {

using Json = nlohmann::json;

const std::vector<std::string>& command_names();

// Every key with its default value. Paths default to null.
Json default_config();

// Overlay `patch` onto `base`. Keys absent from `base` are collected into
// `unknown` as JSON pointers rather than merged.
Json merge_config(const Json& base, const Json& patch,
                  std::vector<std::string>* unknown = nullptr);

// Field-level problems for running `command` with `config`; empty when valid.
std::vector<std::string> validate(const Json& config, std::string_view command);

struct Result {
  Json summary;                        // small per-command report
  std::vector<std::string> artifacts;  // paths written, manifest last
};

// Validates, then runs. Throws ConfigError listing every field problem,
// NumericError when gradcheck exceeds its tolerance, and the usual library
// errors for runtime failures.
Result run(std::string_view command, const Json& config);

}  // namespace dsae::commands

#endif  // DSAE_COMMANDS_HPP_
