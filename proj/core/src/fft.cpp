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

#include "tvch/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace tvch {

namespace {

// FFTW planning is not thread safe; plans are cached per (n, sign) and
// executed with the new-array interface on aligned scratch buffers.
struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
};

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, e] : plans_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.in);
            fftw_free(e.out);
        }
    }

    void run(const cdouble* in, cdouble* out, std::size_t n, int sign)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it == plans_.end()) {
            PlanEntry e;
            e.in = fftw_alloc_complex(n);
            e.out = fftw_alloc_complex(n);
            e.plan = fftw_plan_dft_1d(static_cast<int>(n), e.in, e.out,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
            it = plans_.emplace(key, e).first;
        }
        PlanEntry& e = it->second;
        std::memcpy(e.in, in, n * sizeof(fftw_complex));
        fftw_execute(e.plan);
        std::memcpy(static_cast<void*>(out), e.out, n * sizeof(fftw_complex));
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, PlanEntry> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

} // namespace

void dft(const cdouble* in, cdouble* out, std::size_t n, int sign)
{
    if (n == 0)
        return;
    cache().run(in, out, n, sign);
}

std::vector<cdouble> dft(const std::vector<cdouble>& in, int sign)
{
    std::vector<cdouble> out(in.size());
    dft(in.data(), out.data(), in.size(), sign);
    return out;
}

void shifted_dft(const cdouble* in, cdouble* out, std::size_t n,
                 double x_start, double x_step, double y_start, int sign, double weight)
{
    if (n == 0)
        return;
    const double dy = 1.0 / (static_cast<double>(n) * x_step);
    const double s = sign < 0 ? -1.0 : 1.0;
    // (c + k dy)(a + m dx) = c a + c m dx + k dy a + k m / N
    std::vector<cdouble> buf(n);
    for (std::size_t m = 0; m < n; ++m)
        buf[m] = in[m] * cis(s * y_start * static_cast<double>(m) * x_step);
    std::vector<cdouble> res(n);
    dft(buf.data(), res.data(), n, sign);
    const double base = s * y_start * x_start;
    for (std::size_t k = 0; k < n; ++k)
        out[k] = weight * res[k] * cis(base + s * static_cast<double>(k) * dy * x_start);
}

Axis1D conjugate_axis(const Axis1D& x)
{
    Axis1D y;
    y.count = x.count;
    y.step = 1.0 / (static_cast<double>(x.count) * x.step);
    if (std::isnan(x.conj_start))
        y.start = -static_cast<double>(x.count / 2) * y.step;
    else
        y.start = x.conj_start;
    y.conj_start = x.start;
    return y;
}

} // namespace tvch
