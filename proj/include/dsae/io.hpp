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

#ifndef DSAE_IO_HPP_
#define DSAE_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace dsae::io {

// Whole-file read; IoError when the file cannot be opened.
std::string read_file(const std::string& path);

// Writes to `path.tmp` then renames over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' from each line. A final empty
// line (text ending in '\n') is not returned.
std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view s, char sep);

// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace dsae::io

#endif  // DSAE_IO_HPP_
