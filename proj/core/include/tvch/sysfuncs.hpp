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

#include <functional>
#include <optional>
#include <vector>

namespace tvch {

// ---------------------------------------------------------------------------
// Closed forms of one-path channels in every representation.
//
// A closed form is either an ordinary function of (x1, x2), a line
// weight(x1, x2) * delta(c1 x1 + c2 x2 - c0), or a point mass
// weight * delta(x1 - c1) delta(x2 - c2).

struct ClosedForm {
    enum class Support { function, line, point };
    Support support = Support::function;
    double c1 = 0.0;
    double c2 = 0.0;
    double c0 = 0.0;
    std::function<cdouble(double, double)> weight;
};

// Throws NoClosedForm when the table has no entry for this path and view.
ClosedForm closed_form(const OnePath& path, Rep rep);

// Sum of function-type closed forms of all paths at (x1, x2). Throws
// NoClosedForm if any path is singular in this view.
cdouble closed_form_value(const Channel& analytic, Rep rep, double x1, double x2);

// Samples function-type closed forms on a grid.
KernelGrid2D sample_closed_form(const Channel& analytic, Rep rep, const Axis1D& axis1, const Axis1D& axis2);

// ---------------------------------------------------------------------------
// Narrowband conversion graph

// Shortest chain of representations from `from` to `to` (both ends
// included). WrongFamily when `to` is not reachable.
std::vector<Rep> conversion_path(Rep from, Rep to);
// Representations reachable from `from` by convert_narrowband.
std::vector<Rep> reachable_targets(Rep from);

// Gridded: applies the Fourier and coordinate maps along conversion_path.
// Coordinate shears need equal steps on both axes and widen the grid with
// zeros. Analytic: changes the view only. Provenance records the path.
Channel convert_narrowband(const Channel& c, Rep target);

// ---------------------------------------------------------------------------
// Wideband maps

// k0, h or S from L. Gridded L is evaluated on (axis1, axis2) of the
// target. For S, h is first formed on `t_axis` and transformed over t; the
// theta axis must keep >= 8 samples per period on t_axis.
Channel wideband_to_narrowband(const Channel& L, Rep target, const Axis1D& axis1, const Axis1D& axis2,
                               const std::optional<Axis1D>& t_axis = std::nullopt);
// Analytic L only: changes the view.
Channel wideband_to_narrowband(const Channel& L, Rep target);

struct LFromSOptions {
    Axis1D a;                 ///< output scale grid (a > 0)
    Axis1D b;                 ///< output delay grid
    double eps_a = 0.01;      ///< |a - 1| < eps_a is left at zero
    double theta_step = 0.0;  ///< integration step; 0 picks one automatically
    double dc_tolerance = 1e-3;
};

// L from S. Warnings (DC mass, coarse b grid) go to the result's warnings.
Channel narrowband_to_wideband(const Channel& S, const LFromSOptions& opt);
// Analytic S only: changes the view (closed form needs theta0 != 0 or a point).
Channel narrowband_to_wideband(const Channel& S);

// L2(a, theta) = int L(a, b) e^{-j2pi b theta} db.
Channel wideband_L2(const Channel& L);
// Y(theta) = int L2(a, theta) sqrt(a) X(a theta) da on the frequency grid of X.
Spectrum apply_wideband_freq(const Channel& L2, const Spectrum& X);

// rho^(omega, a) = a^{-3/2} int_0^inf e^{-j2pi omega t} t h(t, t(a-1)/a) dt
Channel h_to_rho(const Channel& h, const Axis1D& omega, const Axis1D& a);
// h(t, tau) = 1_{t > tau} rho(t, t/(t - tau)) t^{1/2} (t - tau)^{-3/2},
// rho(t, a) = int rho^(omega, a) e^{j2pi omega t} domega.
Channel rho_to_h(const Channel& rho, const Axis1D& t, const Axis1D& tau);

} // namespace tvch
