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

// Plain unnormalized DFT of length n. sign = -1 gives exp(-j2pi kn/N).
void dft(const cdouble* in, cdouble* out, std::size_t n, int sign);
std::vector<cdouble> dft(const std::vector<cdouble>& in, int sign);

// Samples of a continuous Fourier integral on uniform grids.
//
//   out[k] = weight * sum_n in[n] * exp(sign * j2pi * y_k * x_n)
//   x_n = x_start + n * x_step,  y_k = y_start + k / (N * x_step)
//
// Forward and inverse calls with opposite signs, weights x_step and
// 1/(N x_step) and swapped starts are exact inverses of each other.
void shifted_dft(const cdouble* in, cdouble* out, std::size_t n,
                 double x_start, double x_step, double y_start, int sign, double weight);

// Conjugate axis of `x` for a continuous transform. The new axis starts at
// x.conj_start when that is set, otherwise it is centred on zero.
Axis1D conjugate_axis(const Axis1D& x);

} // namespace tvch
