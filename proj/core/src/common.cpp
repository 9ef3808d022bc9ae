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

#include "tvch/common.hpp"

#include <algorithm>

namespace tvch {

Axis1D make_axis(double start, double step, std::size_t count)
{
    if (!(step > 0.0))
        throw InvalidArgument("axis step must be positive");
    Axis1D a;
    a.start = start;
    a.step = step;
    a.count = count;
    return a;
}

Axis1D linspace_axis(double lo, double hi, std::size_t count)
{
    if (count < 2 || !(hi > lo))
        throw InvalidArgument("linspace_axis needs hi > lo and at least two points");
    return make_axis(lo, (hi - lo) / static_cast<double>(count - 1), count);
}

Axis1D symmetric_axis(double step, std::size_t count)
{
    return make_axis(-0.5 * static_cast<double>(count - 1) * step, step, count);
}

bool same_grid(const Axis1D& a, const Axis1D& b, double rel_tol)
{
    if (a.count != b.count)
        return false;
    const double tol = rel_tol * std::max(a.step, b.step);
    return std::abs(a.step - b.step) <= rel_tol * a.step && std::abs(a.start - b.start) <= tol;
}

double max_abs(const std::vector<cdouble>& v)
{
    double m = 0.0;
    for (const auto& z : v)
        m = std::max(m, std::abs(z));
    return m;
}

double l2_norm(const std::vector<cdouble>& v)
{
    double s = 0.0;
    for (const auto& z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

double relative_l2(const std::vector<cdouble>& a, const std::vector<cdouble>& b)
{
    if (a.size() != b.size())
        throw InvalidArgument("relative_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    if (den == 0.0)
        return std::sqrt(num);
    return std::sqrt(num / den);
}

} // namespace tvch
