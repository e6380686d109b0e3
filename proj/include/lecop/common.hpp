/*
 * Copyright 2026 The LECOP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LECOP_COMMON_HPP_
#define LECOP_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lecop {

// Malformed or inconsistent input data (bad rows, missing ids, shape
// mismatches). Maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures of the environment rather than of the data: network, disk.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or command line. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministically derives a child seed from a parent seed and a label.
// Used to fan one global seed out to independent module streams.
std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view label);
std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index);

std::string_view Trim(std::string_view s);
std::string ToLowerAscii(std::string_view s);
std::vector<std::string_view> SplitView(std::string_view s, char sep);

// Canonical keyword token: trimmed and ASCII-lowercased.
std::string KeywordToken(std::string_view keyword);

// Reads a whole file; throws DataError naming the path if it cannot be opened.
std::string ReadFile(const std::string& path);
// Writes a whole file, creating parent directories.
void WriteFile(const std::string& path, std::string_view contents);

// Splits [0, n) into `threads` contiguous chunks and runs fn(begin, end,
// chunk_index) on each. Runs inline when threads <= 1.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t, std::size_t, int)>& fn);

int DefaultThreads();

// Formats a double with enough digits to round-trip.
std::string FormatDouble(double v);

}  // namespace lecop

#endif  // LECOP_COMMON_HPP_
