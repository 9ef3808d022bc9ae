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

#include "tvch/pairedup.hpp"
#include "tvch/sysfuncs.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace tvch;

namespace {

SampledSignal test_signal(std::size_t n)
{
    return sample_function(make_axis(-8.0, 16.0 / static_cast<double>(n), n), [](double t) {
        return std::exp(-0.5 * t * t) * cis(1.3 * t);
    });
}

void BM_fourier(benchmark::State& st)
{
    const auto x = test_signal(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(fourier(x));
}
BENCHMARK(BM_fourier)->Arg(1024)->Arg(4096);

void BM_kaiser_resample(benchmark::State& st)
{
    const auto x = test_signal(2048);
    const Axis1D g = make_axis(-6.0, 0.0071, static_cast<std::size_t>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(resample(x, g, SignalAxis::time));
}
BENCHMARK(BM_kaiser_resample)->Arg(512)->Arg(2048);

void BM_mellin(benchmark::State& st)
{
    const auto x = sample_function(make_axis(0.01, 0.01, 2000), [](double t) { return std::exp(-0.5 * (t - 6) * (t - 6)); });
    for (auto _ : st)
        benchmark::DoNotOptimize(mellin(x));
}
BENCHMARK(BM_mellin);

void BM_tf_taps_gridded(benchmark::State& st)
{
    const Axis1D th = make_axis(-1.0, 0.02, 101), ta = make_axis(0.0, 0.01, 101);
    KernelGrid2D k = make_kernel(Rep::S, th, ta);
    for (std::size_t i = 0; i < th.count; ++i)
        for (std::size_t j = 0; j < ta.count; ++j)
            k.at(i, j) = std::exp(-0.5 * std::pow(th.at(i) / 0.3, 2) - 0.5 * std::pow((ta.at(j) - 0.5) / 0.1, 2));
    const Channel S = make_gridded(k);
    for (auto _ : st)
        benchmark::DoNotOptimize(tf_taps(S, 2.0, 4.0, 1.0, 1.0));
}
BENCHMARK(BM_tf_taps_gridded);

void BM_canonical_apply(benchmark::State& st)
{
    const auto m = tf_taps(make_one_path(OnePathKind::delay_doppler, 0.37, 0.61), 2.0, 4.0, 1.0, 1.0);
    const auto x = test_signal(4096);
    const Axis1D out = make_axis(0.0, 1.0 / 64, 128);
    for (auto _ : st)
        benchmark::DoNotOptimize(canonical_apply(m, x, out));
}
BENCHMARK(BM_canonical_apply);

void BM_convert_h_to_S(benchmark::State& st)
{
    const Axis1D ax = symmetric_axis(0.05, static_cast<std::size_t>(st.range(0)));
    KernelGrid2D k = make_kernel(Rep::h, ax, ax);
    for (std::size_t i = 0; i < ax.count; ++i)
        for (std::size_t j = 0; j < ax.count; ++j)
            k.at(i, j) = std::exp(-pi * (ax.at(i) * ax.at(i) + ax.at(j) * ax.at(j)));
    const Channel h = make_gridded(k);
    for (auto _ : st)
        benchmark::DoNotOptimize(convert_narrowband(h, Rep::S));
}
BENCHMARK(BM_convert_h_to_S)->Arg(64)->Arg(256);

void BM_pairedup_tf(benchmark::State& st)
{
    ModelParams p;
    p.T = 2.0;
    p.W = 4.0;
    const auto H = make_one_path(OnePathKind::delay_doppler, 0.5, 0.25);
    const TapBounds b{-2, 2, -2, 2};
    for (auto _ : st)
        benchmark::DoNotOptimize(pairedup_taps(ModelKind::tf, H, p, b, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_pairedup_tf)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
