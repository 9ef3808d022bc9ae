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

#include "tvch/interp.hpp"

#include <algorithm>

namespace tvch {

namespace {
constexpr int table_density = 256; // window samples per unit of distance
}

KaiserInterpolator::KaiserInterpolator(InterpConfig cfg)
    : cfg_(cfg)
{
    if (cfg_.half_width < 1 || !(cfg_.beta >= 0.0))
        throw InvalidArgument("interpolator needs half_width >= 1 and beta >= 0");
    inv_i0_beta_ = 1.0 / std::cyl_bessel_i(0.0, cfg_.beta);
    const int n = cfg_.half_width * table_density + 4;
    table_step_ = 1.0 / table_density;
    table_.resize(static_cast<std::size_t>(n));
    const double K = cfg_.half_width;
    for (int i = 0; i < n; ++i) {
        double d = i * table_step_;
        double r = 1.0 - (d / K) * (d / K);
        table_[static_cast<std::size_t>(i)] =
            r > 0.0 ? std::cyl_bessel_i(0.0, cfg_.beta * std::sqrt(r)) * inv_i0_beta_ : 0.0;
    }
}

const KaiserInterpolator& KaiserInterpolator::shared()
{
    static const KaiserInterpolator k{};
    return k;
}

// Cubic Lagrange lookup in the window table.
double KaiserInterpolator::window(double d) const
{
    d = std::abs(d);
    if (d >= cfg_.half_width)
        return 0.0;
    double p = d / table_step_;
    auto i = static_cast<std::size_t>(p);
    if (i < 1)
        i = 1;
    double f = p - static_cast<double>(i);
    const double y0 = table_[i - 1], y1 = table_[i], y2 = table_[i + 1], y3 = table_[i + 2];
    const double fm1 = f - 1.0, fm2 = f - 2.0, fp1 = f + 1.0;
    return -f * fm1 * fm2 / 6.0 * y0 + fp1 * fm1 * fm2 / 2.0 * y1 - fp1 * f * fm2 / 2.0 * y2 +
           fp1 * f * fm1 / 6.0 * y3;
}

cdouble KaiserInterpolator::eval(const cdouble* data, std::size_t n, double pos) const
{
    if (n == 0 || !std::isfinite(pos))
        return 0.0;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const auto base = static_cast<long long>(fl);
    const long long N = static_cast<long long>(n);
    if (frac < 1e-12 || frac > 1.0 - 1e-12) {
        long long i = frac < 0.5 ? base : base + 1;
        return (i >= 0 && i < N) ? data[i] : cdouble{};
    }
    const int K = cfg_.half_width;
    if (base + K < 0 || base - K + 1 >= N)
        return 0.0;
    // sin(pi (frac + k)) = (-1)^k sin(pi frac)
    const double s = std::sin(pi * frac);
    cdouble acc = 0.0;
    for (int k = -K + 1; k <= K; ++k) {
        long long i = base + k;
        if (i < 0 || i >= N)
            continue;
        double d = frac - k; // distance from sample i
        double sn = ((k & 1) ? -s : s) / (pi * d);
        acc += data[i] * (sn * window(d));
    }
    return acc;
}

KaiserInterpolator::Stencil KaiserInterpolator::stencil(double pos, std::size_t n) const
{
    Stencil st;
    if (n == 0 || !std::isfinite(pos))
        return st;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const auto base = static_cast<long long>(fl);
    const long long N = static_cast<long long>(n);
    if (frac < 1e-12 || frac > 1.0 - 1e-12) {
        long long i = frac < 0.5 ? base : base + 1;
        if (i >= 0 && i < N) {
            st.first = i;
            st.w.push_back(1.0);
        }
        return st;
    }
    const int K = cfg_.half_width;
    const long long lo = std::max<long long>(0, base - K + 1);
    const long long hi = std::min<long long>(N - 1, base + K);
    if (lo > hi)
        return st;
    st.first = lo;
    st.w.reserve(static_cast<std::size_t>(hi - lo + 1));
    const double s = std::sin(pi * frac);
    for (long long i = lo; i <= hi; ++i) {
        long long k = i - base;
        double d = frac - static_cast<double>(k);
        double sn = ((k & 1) ? -s : s) / (pi * d);
        st.w.push_back(sn * window(d));
    }
    return st;
}

} // namespace tvch
