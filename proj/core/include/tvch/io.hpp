// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The tvchannels Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tvch {

// Shortest text that reads back to the same double (%.17g).
std::string format_double(double v);

std::string trim(std::string_view s);

// Parses one CSV row of `expected` numeric fields. Errors name the line.
std::vector<double> split_csv_doubles(std::string_view line, std::size_t expected, std::size_t lineno);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Library version string, recorded in sidecars.
const char* version();

} // namespace tvch
