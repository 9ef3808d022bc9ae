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

#include "tvch/channel.hpp"
#include "tvch/sysfuncs.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tvch {

// Discrete canonical channel models.
//   tf: y(t) = sum c_{m,n} x(t - n/W) e^{j2pi m t/T}              m Doppler, n delay
//   ts: y(t) = sum c_{m,n} a0^{-m/2} x((t - n b0 a0^m) / a0^m)     m scale, n delay
//   fs: y(t) = 1_[T1,T2)(t) sum c_{m,n} e^{j2pi m Omega t} a0^{-n/2} x(t / a0^n)
//       with Omega = 1/(T2 - T1)                                  m frequency, n scale
enum class ModelKind { tf, ts, fs };

const char* model_kind_name(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct ModelParams {
    double T = 0.0, W = 0.0, Tm = 0.0, Bd = 0.0; // tf
    double a0 = 0.0, b0 = 0.0;                   // ts, fs (a0)
    double T1 = 0.0, T2 = 0.0;                   // fs
};

struct TapBounds {
    int m_min = -4, m_max = 4;
    int n_min = -4, n_max = 4;

    int m_count() const { return m_max - m_min + 1; }
    int n_count() const { return n_max - n_min + 1; }
    // Both ranges doubled about zero.
    TapBounds doubled() const;
    void validate() const;
};

struct Tap {
    int m = 0;
    int n = 0;
    cdouble c{};
};

struct CanonicalModel {
    ModelKind kind = ModelKind::tf;
    ModelParams params;
    TapBounds bounds;
    std::vector<Tap> taps; ///< row-major over (m, n), one entry per index pair
    std::vector<std::string> warnings;
    std::vector<std::string> provenance;

    cdouble tap(int m, int n) const; ///< zero outside the bounds
    double max_abs() const;
    void validate() const;
};

// S^(theta, tau) = int int S(theta', tau') sinc((tau - tau')W) sinc((theta - theta')T)
//                  e^{-j pi (theta - theta')T} dtheta' dtau'
// Sifting for analytic delay-Doppler paths, trapezoid sum over the whole grid otherwise.
cdouble tf_smoothed_spreading(const Channel& S, double T, double W, double theta, double tau);

// Taps c_{m,n} = S^(m/T, n/W). Default bounds are |m| <= ceil(T Bd), 0 <= n <= ceil(W Tm).
// SupportViolation when S leaves (-Bd, Bd) x [0, Tm].
CanonicalModel tf_taps(const Channel& S, double T, double W, double Tm, double Bd,
                       const std::optional<TapBounds>& bounds = std::nullopt);

// c_{m,n} = int int L(a, b) sinc(m - ln a / ln a0) sinc(n - b/(a b0)) da db, a0 > 1, b0 > 0.
CanonicalModel ts_taps(const Channel& L, double a0, double b0, const TapBounds& bounds = {});

// Grids used when fs taps are computed from an h kernel through h_to_rho.
// Unset axes are derived from the kernel and the window.
struct FsOptions {
    std::optional<Axis1D> omega;
    std::optional<Axis1D> a;
};

// c_{m,n} = e^{-j m pi Omega (T1+T2)} int int rho(w, a) e^{j pi w (T1+T2)} sinc(w/Omega - m)
//           sinc(ln a / ln a0 - n) dw da
// Input is a rho channel, or an h channel that is converted first.
CanonicalModel fs_taps(const Channel& h_or_rho, double a0, double T1, double T2, const TapBounds& bounds = {},
                       const FsOptions& opt = {});

struct ApplyReport {
    double range_deviation = 0.0; ///< ||Qx - x|| / ||x|| for the model's input projection
    std::vector<std::string> warnings;
};

// Finite tap sum. The output uses `out` (default: the input grid) on
// `out_axis` (default: the input's axis type). A warning is added when x is not in the range of Q
// (relative change above 1e-6).
SampledSignal canonical_apply(const CanonicalModel& model, const SampledSignal& x,
                              const std::optional<Axis1D>& out = std::nullopt, ApplyReport* report = nullptr,
                              std::optional<SignalAxis> out_axis = std::nullopt);

// Tap-delay line of the sampling-theorem expansion:
//   h_n(t) = int h(t, tau) sinc(W tau - n) dtau, n = 0..ceil(W Tm)
//   y(t) = sum_n h_n(t) x(t - n/W)
struct RakeTapLine {
    double W = 0.0;
    double Tm = 0.0;
    Axis1D t;                                 ///< time grid the tap functions live on
    std::vector<std::vector<cdouble>> taps;   ///< taps[n][i] = h_n(t_i)

    SampledSignal apply(const SampledSignal& x) const;
};

// Gridded h uses its own t axis; analytic delay-Doppler channels need `t`.
RakeTapLine rake_tapline(const Channel& h, double W, double Tm, const std::optional<Axis1D>& t = std::nullopt);

// CSV `m,n,re,im` and a JSON sidecar with kind, params, truncation and provenance.
void write_taps_csv(std::ostream& os, const CanonicalModel& model);
std::vector<Tap> read_taps_csv(std::istream& is);
std::string taps_sidecar(const CanonicalModel& model, const std::string& extra = "{}");
void save_taps(const std::string& path, const CanonicalModel& model, const std::string& extra = "{}");

} // namespace tvch
