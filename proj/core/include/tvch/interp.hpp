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

#include "tvch/common.hpp"

#include <vector>

namespace tvch {

// Kaiser-windowed sinc interpolation. half_width taps are used on each side
// of the evaluation point.
struct InterpConfig {
    int half_width = 16;
    double beta = 20.0;
};

class KaiserInterpolator {
public:
    explicit KaiserInterpolator(InterpConfig cfg = {});

    // Value at fractional index pos of the sequence data[0..n). Samples
    // outside the sequence are zero. Integer positions return the sample.
    cdouble eval(const cdouble* data, std::size_t n, double pos) const;
    cdouble eval(const std::vector<cdouble>& data, double pos) const
    {
        return eval(data.data(), data.size(), pos);
    }

    // Weights for one evaluation position, reusable across sequences that
    // share a grid: value = sum_k w[k] * data[first + k].
    struct Stencil {
        long long first = 0;
        std::vector<double> w;
    };
    Stencil stencil(double pos, std::size_t n) const;
    static cdouble apply(const Stencil& s, const cdouble* data, std::ptrdiff_t stride = 1)
    {
        cdouble acc = 0.0;
        for (std::size_t k = 0; k < s.w.size(); ++k)
            acc += s.w[k] * data[(s.first + static_cast<long long>(k)) * stride];
        return acc;
    }

    const InterpConfig& config() const { return cfg_; }

    static const KaiserInterpolator& shared();

private:
    double window(double d) const;

    InterpConfig cfg_;
    double inv_i0_beta_ = 1.0;
    double table_step_ = 1.0;
    std::vector<double> table_;
};

} // namespace tvch
