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

#include "tvch/kernel.hpp"
#include "tvch/signal.hpp"
#include "tvch/waveform.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tvch {

// One propagation path in closed form.
//   delay_doppler:  (p1, p2) = (theta0 [Hz], tau0 [s])   y = g x(t - tau0) e^{j2pi theta0 t}
//   delay_dilation: (p1, p2) = (a0, b0 [s])              y = g a0^{-1/2} x((t - b0)/a0)
//   freq_scale:     (p1, p2) = (omega0 [Hz], a0)         y = g e^{j2pi omega0 t} a0^{-1/2} x(t/a0), t > 0
enum class PathKind { delay_doppler, delay_dilation, freq_scale };

struct OnePath {
    PathKind kind = PathKind::delay_doppler;
    cdouble gain{1.0, 0.0};
    double p1 = 0.0;
    double p2 = 0.0;

    void validate() const;
};

const char* path_kind_name(PathKind k);

// A channel is either a list of closed-form paths or a gridded kernel. For
// analytic channels `rep` only says which view is being looked at; the
// operator is the same for every view.
struct Channel {
    Rep rep = Rep::h;
    std::variant<std::vector<OnePath>, KernelGrid2D> body;
    std::vector<std::string> provenance;
    std::vector<std::string> warnings;

    bool analytic() const { return std::holds_alternative<std::vector<OnePath>>(body); }
    const std::vector<OnePath>& paths() const;
    const KernelGrid2D& grid() const;
};

enum class OnePathKind { delay, delay_doppler, delay_dilation, freq_scale };

// delay: (tau0). delay_doppler: (theta0, tau0). delay_dilation: (a0, b0).
// freq_scale: (omega0, a0). The channel is tagged S, S, L and rho.
Channel make_one_path(OnePathKind kind, double p1, double p2 = 0.0, cdouble gain = 1.0);
Channel make_analytic(std::vector<OnePath> paths, Rep view);
Channel make_gridded(KernelGrid2D k);
// Single delay-Doppler path with zero shift, gain 1.
Channel identity_channel();
// g * H. Exact for both variants.
Channel scaled(const Channel& c, cdouble g);

// Applies the operator of an analytic channel to a waveform, lazily.
Waveform apply_paths(const std::vector<OnePath>& paths, const Waveform& x);

// The four integral operators. The output uses `out` (default: the input
// grid) on `out_axis` (default: the input's axis type). Analytic channels are accepted by every
// apply routine; gridded ones must carry the matching tag.
SampledSignal apply_time_varying(const Channel& h, const SampledSignal& x, const std::optional<Axis1D>& out = {},
                                    std::optional<SignalAxis> out_axis = {});
SampledSignal apply_narrowband(const Channel& S, const SampledSignal& x, const std::optional<Axis1D>& out = {},
                                    std::optional<SignalAxis> out_axis = {});
SampledSignal apply_wideband(const Channel& L, const SampledSignal& x, const std::optional<Axis1D>& out = {},
                                    std::optional<SignalAxis> out_axis = {});
SampledSignal apply_frequency_scale(const Channel& rho, const SampledSignal& x,
                                    const std::optional<Axis1D>& out = {},
                                    std::optional<SignalAxis> out_axis = {});

// Dispatches on the tag: h, S, L, rho (and any analytic channel).
SampledSignal apply_channel(const Channel& c, const SampledSignal& x, const std::optional<Axis1D>& out = {},
                                    std::optional<SignalAxis> out_axis = {});

} // namespace tvch
