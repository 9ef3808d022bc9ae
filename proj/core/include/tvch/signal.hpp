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
#include "tvch/interp.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace tvch {

// A log_time signal stores the unitary warp x~(u) = e^{u/2} x(e^u) on a
// uniform grid in u = ln t. Dilation is then a shift and the Mellin
// transform is an ordinary Fourier transform in u.
enum class SignalAxis { time, log_time };

struct SampledSignal {
    double t0 = 0.0; ///< first sample position (seconds, or ln-seconds on log_time)
    double dt = 1.0; ///< sample spacing (> 0)
    std::vector<cdouble> samples;
    SignalAxis axis = SignalAxis::time;

    std::size_t size() const { return samples.size(); }
    double position(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    // Physical time of sample i (e^u on a log_time axis).
    double time(std::size_t i) const;
    Axis1D grid() const { return make_axis(t0, dt, samples.size()); }
    // dt * sum |x_i|^2. Equals the L2 energy on both axes.
    double energy() const;
    void validate() const;
};

SampledSignal make_signal(const Axis1D& grid, SignalAxis axis = SignalAxis::time);

// Samples f(t) on the grid. On a log_time grid the stored values are
// e^{u/2} f(e^u).
SampledSignal sample_function(const Axis1D& grid, const std::function<cdouble(double)>& f,
                              SignalAxis axis = SignalAxis::time);

// x(t) at an arbitrary time, by windowed-sinc interpolation on the signal's
// own axis. Zero outside the sampled range (and for t <= 0 on log_time).
cdouble value_at(const SampledSignal& x, double t,
                 const KaiserInterpolator& k = KaiserInterpolator::shared());
// Warped value e^{u/2} x(e^u).
cdouble log_value_at(const SampledSignal& x, double u,
                     const KaiserInterpolator& k = KaiserInterpolator::shared());

SampledSignal resample(const SampledSignal& x, const Axis1D& grid, SignalAxis axis,
                       const KaiserInterpolator& k = KaiserInterpolator::shared());

// Relative L2 difference restricted to samples with T1 <= t < T2. The two
// signals must share a grid.
double relative_error_on(const SampledSignal& y, const SampledSignal& ref, double T1, double T2);
double relative_error(const SampledSignal& y, const SampledSignal& ref);

// ---------------------------------------------------------------------------
// Elementary unitary operators

struct ElementaryOpSpec {
    enum class Kind { translate, modulate, dilate };
    Kind kind = Kind::translate;
    double param = 0.0; ///< tau [s], nu [Hz] or a (> 0)

    void validate() const;
};

ElementaryOpSpec translate_op(double tau);
ElementaryOpSpec modulate_op(double nu);
ElementaryOpSpec dilate_op(double a);
// U^m as a single operator.
ElementaryOpSpec op_power(const ElementaryOpSpec& u, int m);

// T_tau x(t) = x(t - tau), M_nu x(t) = e^{j2pi nu t} x(t), D_a x(t) = a^{-1/2} x(t/a).
// The output uses the input grid.
SampledSignal elementary_apply(const ElementaryOpSpec& spec, const SampledSignal& x);

// ---------------------------------------------------------------------------
// Projections

struct ProjectionSpec {
    enum class Kind { time_window, lowpass, mellin_lowpass };
    Kind kind = Kind::time_window;
    double p1 = 0.0; ///< T1 [s] | W [Hz] | alpha [cycles per log-time]
    double p2 = 0.0; ///< T2 [s] for time_window

    void validate() const;
};

ProjectionSpec time_window(double T1, double T2);
ProjectionSpec lowpass(double W);
ProjectionSpec mellin_lowpass(double alpha);

// Log-time grid used when a time-axis signal has to be taken to the Mellin
// domain. Cell-centred: u_k = u_min + (k + 1/2) du.
struct MellinConfig {
    double u_min = -8.0;
    double u_max = 8.0;
    std::size_t points = 4096;

    Axis1D grid() const;
};

// time_window keeps T1 <= t < T2. lowpass keeps |f| <= W/2 with a DFT mask on
// the signal grid (time axis only). mellin_lowpass keeps |omega| <= alpha/2;
// exact on log_time signals, via the Mellin grid of `cfg` on time signals.
SampledSignal project(const ProjectionSpec& spec, const SampledSignal& x, const MellinConfig& cfg = {});

// ---------------------------------------------------------------------------
// Transforms

struct Spectrum {
    Axis1D freq;
    std::vector<cdouble> values;
};

// X(f) = int x(t) e^{-j2pi f t} dt on the conjugate grid of the (optionally
// zero-padded) time grid. Time axis only.
Spectrum fourier(const SampledSignal& x, std::size_t pad_to = 0);
// Inverse of fourier(); returns samples on the original time grid.
SampledSignal inverse_fourier(const Spectrum& X);
cdouble spectrum_value_at(const Spectrum& X, double f,
                          const KaiserInterpolator& k = KaiserInterpolator::shared());

struct MellinSpectrum {
    Axis1D omega; ///< uniform, symmetric about zero
    std::vector<cdouble> values;
    double u_start = 0.0; ///< log-time grid the spectrum was taken from
    double du = 0.0;
    std::size_t u_count = 0;
};

// Symmetric Mellin-frequency grid dual to a log-time grid.
Axis1D mellin_omega_grid(const Axis1D& u_grid);

// M x(omega) = int_0^inf e^{-j2pi omega ln t} x(t) dt / sqrt(t).
// Time-axis inputs are resampled onto cfg.grid(); log_time inputs are used as is.
MellinSpectrum mellin(const SampledSignal& x, const Axis1D& omega_grid, const MellinConfig& cfg = {});
MellinSpectrum mellin(const SampledSignal& x, const MellinConfig& cfg = {});
// Evaluates the inverse transform on the requested grid and axis.
SampledSignal inverse_mellin(const MellinSpectrum& X, const Axis1D& grid, SignalAxis axis);

// dt * sum x_i conj(y_i). When grids differ the coarser signal is resampled
// onto the finer grid (log_time wins over time).
cdouble inner_product(const SampledSignal& x, const SampledSignal& y);

// Fraction of energy at t <= 0.
double nonpositive_energy_fraction(const SampledSignal& x);

// ---------------------------------------------------------------------------
// CSV: header `t,re,im` (or `u,re,im` for log_time), uniform spacing.

void write_signal_csv(std::ostream& os, const SampledSignal& x);
SampledSignal read_signal_csv(std::istream& is);
void save_signal_csv(const std::string& path, const SampledSignal& x);
SampledSignal load_signal_csv(const std::string& path);

} // namespace tvch
