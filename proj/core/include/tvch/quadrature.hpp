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

#include <cstddef>
#include <vector>

namespace tvch {

// Nodes and weights of a 1-D rule.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    void append(const QuadRule& other);
};

// n-point Gauss-Legendre rule on [-1, 1].
const QuadRule& gauss_legendre(int n);

// Composite Gauss-Legendre rule on [lo, hi] with `panels` equal panels.
QuadRule composite_gl(double lo, double hi, std::size_t panels, int order = 12);

// Trapezoid rule on a uniform grid with `count` points starting at lo.
QuadRule trapezoid(double lo, double step, std::size_t count);

} // namespace tvch
