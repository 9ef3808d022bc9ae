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

#include "tvch/io.hpp"

#include "tvch/common.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

namespace tvch {

std::string format_double(double v)
{
    if (v == 0.0)
        v = 0.0; // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
        ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n'))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<double> split_csv_doubles(std::string_view line, std::size_t expected, std::size_t lineno)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        std::string field = trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
            throw InvalidArgument("line " + std::to_string(lineno) + ": bad number '" + field + "'");
        out.push_back(v);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    if (out.size() != expected)
        throw InvalidArgument("line " + std::to_string(lineno) + ": expected " + std::to_string(expected) +
                              " fields, got " + std::to_string(out.size()));
    return out;
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const char* version()
{
    return TVCH_VERSION_STRING;
}

} // namespace tvch
