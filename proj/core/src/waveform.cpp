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

#include "tvch/waveform.hpp"

namespace tvch {

namespace {
constexpr double max_log_time = 700.0;
}

Waveform::Waveform(Fn lin, Fn log)
    : fns_(std::make_shared<Fns>(Fns{std::move(lin), std::move(log)}))
{
}

Waveform waveform_from_time(Waveform::Fn f)
{
    auto lin = f;
    return Waveform(std::move(lin), [f](double u) -> cdouble {
        if (u > max_log_time)
            return 0.0;
        return std::exp(0.5 * u) * f(std::exp(u));
    });
}

Waveform waveform_from_log(Waveform::Fn f)
{
    auto log = f;
    return Waveform(
        [f](double t) -> cdouble {
            if (t <= 0.0)
                return 0.0;
            return f(std::log(t)) / std::sqrt(t);
        },
        std::move(log));
}

Waveform waveform_from_signal(const SampledSignal& x)
{
    auto p = std::make_shared<const SampledSignal>(x);
    return Waveform([p](double t) { return value_at(*p, t); }, [p](double u) { return log_value_at(*p, u); });
}

Waveform boxcar_waveform(double T1, double T2)
{
    if (!(T2 > T1))
        throw InvalidArgument("boxcar needs T2 > T1");
    const double g = 1.0 / std::sqrt(T2 - T1);
    return waveform_from_time([=](double t) -> cdouble { return (t >= T1 && t < T2) ? g : 0.0; });
}

Waveform sinc_waveform(double W)
{
    if (!(W > 0.0))
        throw InvalidArgument("sinc pulse needs W > 0");
    const double g = std::sqrt(W);
    return waveform_from_time([=](double t) -> cdouble { return g * sinc(W * t); });
}

Waveform gamma0_waveform(double a0)
{
    if (!(a0 > 1.0))
        throw InvalidArgument("gamma0 needs a0 > 1");
    const double L0 = std::log(a0);
    const double g = 1.0 / std::sqrt(L0);
    return waveform_from_log([=](double u) -> cdouble { return g * sinc(u / L0); });
}

Waveform gaussian_waveform(double t0, double sigma, double freq)
{
    if (!(sigma > 0.0))
        throw InvalidArgument("gaussian needs sigma > 0");
    const double g = std::pow(2.0 * pi * sigma * sigma, -0.25);
    return waveform_from_time([=](double t) -> cdouble {
        double z = (t - t0) / sigma;
        return g * std::exp(-0.25 * z * z) * cis(freq * t);
    });
}

Waveform apply(const ElementaryOpSpec& op, const Waveform& x)
{
    op.validate();
    const double p = op.param;
    switch (op.kind) {
    case ElementaryOpSpec::Kind::translate:
        if (p == 0.0)
            return x;
        return Waveform([x, p](double t) { return x.value(t - p); },
                        [x, p](double u) -> cdouble {
                            if (u > max_log_time)
                                return 0.0;
                            double t = std::exp(u);
                            return std::exp(0.5 * u) * x.value(t - p);
                        });
    case ElementaryOpSpec::Kind::modulate:
        if (p == 0.0)
            return x;
        return Waveform([x, p](double t) { return cis(p * t) * x.value(t); },
                        [x, p](double u) -> cdouble {
                            if (u > max_log_time)
                                return 0.0;
                            return cis(p * std::exp(u)) * x.log_value(u);
                        });
    case ElementaryOpSpec::Kind::dilate: {
        if (p == 1.0)
            return x;
        const double g = 1.0 / std::sqrt(p), la = std::log(p);
        return Waveform([x, p, g](double t) { return g * x.value(t / p); },
                        [x, la](double u) { return x.log_value(u - la); });
    }
    }
    return x;
}

Waveform scale(const Waveform& x, cdouble g)
{
    return Waveform([x, g](double t) { return g * x.value(t); }, [x, g](double u) { return g * x.log_value(u); });
}

Waveform add(const Waveform& x, const Waveform& y)
{
    return Waveform([x, y](double t) { return x.value(t) + y.value(t); },
                    [x, y](double u) { return x.log_value(u) + y.log_value(u); });
}

SampledSignal sample(const Waveform& x, const Axis1D& grid, SignalAxis axis)
{
    SampledSignal s = make_signal(grid, axis);
    for (std::size_t i = 0; i < grid.count; ++i)
        s.samples[i] = axis == SignalAxis::time ? x.value(grid.at(i)) : x.log_value(grid.at(i));
    return s;
}

} // namespace tvch
