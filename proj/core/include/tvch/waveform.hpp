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
#include "tvch/signal.hpp"

#include <functional>
#include <memory>

namespace tvch {

// A signal given as a function rather than samples. Both the time-domain
// value x(t) and the warped value e^{u/2} x(e^u) are available, so that
// dilations by large factors stay accurate.
class Waveform {
public:
    using Fn = std::function<cdouble(double)>;

    Waveform() = default;
    Waveform(Fn lin, Fn log);

    cdouble value(double t) const { return fns_->lin(t); }
    cdouble log_value(double u) const { return fns_->log(u); }
    explicit operator bool() const { return static_cast<bool>(fns_); }

private:
    struct Fns {
        Fn lin;
        Fn log;
    };
    std::shared_ptr<const Fns> fns_;
};

// Wraps f(t); the warped form is derived from it.
Waveform waveform_from_time(Waveform::Fn f);
// Wraps the warped form x~(u); x(t) = x~(ln t)/sqrt(t) for t > 0, else 0.
Waveform waveform_from_log(Waveform::Fn f);
Waveform waveform_from_signal(const SampledSignal& x);

// (T2-T1)^{-1/2} on [T1, T2).
Waveform boxcar_waveform(double T1, double T2);
// sqrt(W) sinc(W t).
Waveform sinc_waveform(double W);
// Mellin-domain sinc: x~(u) = sinc(u / ln a0) / sqrt(ln a0).
Waveform gamma0_waveform(double a0);
// Unit-energy Gaussian centred at t0 with standard deviation sigma.
Waveform gaussian_waveform(double t0, double sigma, double freq = 0.0);

Waveform apply(const ElementaryOpSpec& op, const Waveform& x);
Waveform scale(const Waveform& x, cdouble g);
Waveform add(const Waveform& x, const Waveform& y);

SampledSignal sample(const Waveform& x, const Axis1D& grid, SignalAxis axis = SignalAxis::time);

} // namespace tvch
