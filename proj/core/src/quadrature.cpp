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

#include "tvch/quadrature.hpp"

#include "tvch/common.hpp"

#include <map>
#include <mutex>

namespace tvch {

void QuadRule::append(const QuadRule& other)
{
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

QuadRule build_gl(int n)
{
    QuadRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        r.nodes[static_cast<std::size_t>(i)] = x;
        r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

} // namespace

const QuadRule& gauss_legendre(int n)
{
    if (n < 1 || n > 200)
        throw InvalidArgument("Gauss-Legendre order must be in [1, 200]");
    static std::mutex mu;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_gl(n)).first;
    return it->second;
}

QuadRule composite_gl(double lo, double hi, std::size_t panels, int order)
{
    if (!(hi > lo) || panels == 0)
        throw InvalidArgument("composite_gl needs hi > lo and at least one panel");
    const QuadRule& g = gauss_legendre(order);
    QuadRule r;
    r.nodes.reserve(panels * g.size());
    r.weights.reserve(panels * g.size());
    const double w = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        // Panel edges computed from lo and hi directly so that they tile exactly.
        double a = p == 0 ? lo : lo + w * static_cast<double>(p);
        double b = p + 1 == panels ? hi : lo + w * static_cast<double>(p + 1);
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t i = 0; i < g.size(); ++i) {
            r.nodes.push_back(c + h * g.nodes[i]);
            r.weights.push_back(h * g.weights[i]);
        }
    }
    return r;
}

QuadRule trapezoid(double lo, double step, std::size_t count)
{
    if (count < 2 || !(step > 0.0))
        throw InvalidArgument("trapezoid needs at least two points and step > 0");
    QuadRule r;
    r.nodes.resize(count);
    r.weights.assign(count, step);
    for (std::size_t i = 0; i < count; ++i)
        r.nodes[i] = lo + step * static_cast<double>(i);
    r.weights.front() *= 0.5;
    r.weights.back() *= 0.5;
    return r;
}

} // namespace tvch
