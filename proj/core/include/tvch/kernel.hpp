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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tvch {

// System-function representations.
//   narrowband: k0..k3 kernel functions, h S T H, and the duals G V M g
//   wideband:   L(a, b), L2(a, theta) and the frequency-scale rho(omega, a)
enum class Rep { k0, k1, k2, k3, h, S, T, H, G, V, M, g, L, L2, rho };

const char* rep_name(Rep r);
Rep parse_rep(const std::string& name); // InvalidArgument on unknown names
bool is_narrowband(Rep r);
const std::vector<Rep>& all_reps();

struct AxisRole {
    const char* name;
    const char* unit;
};
// Roles of (axis1, axis2) for a representation, e.g. h -> (t [s], tau [s]).
std::pair<AxisRole, AxisRole> axis_roles(Rep r);

// Samples of a two-argument system function. values are row-major:
// values[i * axis2.count + j] = f(axis1[i], axis2[j]).
struct KernelGrid2D {
    Rep rep = Rep::h;
    Axis1D axis1;
    Axis1D axis2;
    std::vector<cdouble> values;

    cdouble& at(std::size_t i, std::size_t j) { return values[i * axis2.count + j]; }
    const cdouble& at(std::size_t i, std::size_t j) const { return values[i * axis2.count + j]; }
    void validate() const;
};

KernelGrid2D make_kernel(Rep rep, const Axis1D& axis1, const Axis1D& axis2);

// Trapezoid weight of index i on an axis (half at both ends).
double trapezoid_weight(const Axis1D& a, std::size_t i);

// CSV `axis1,axis2,re,im`, dense and row-major.
void write_kernel_csv(std::ostream& os, const KernelGrid2D& k);
// The representation is not stored in the CSV; pass it or read the sidecar.
KernelGrid2D read_kernel_csv(std::istream& is, Rep rep);

// JSON sidecar naming the representation, axis roles, units and grids.
// `extra` must be a JSON object text and is merged in at top level.
std::string kernel_sidecar(const KernelGrid2D& k, const std::vector<std::string>& provenance,
                           const std::vector<std::string>& warnings, const std::string& extra = "{}");
// Reads the representation tag from a sidecar text.
Rep sidecar_rep(const std::string& sidecar_text);

// Writes path and path + ".json". Loading reads the sidecar when present;
// otherwise `fallback` must name the representation.
void save_kernel(const std::string& path, const KernelGrid2D& k, const std::vector<std::string>& provenance,
                 const std::vector<std::string>& warnings, const std::string& extra = "{}");
KernelGrid2D load_kernel(const std::string& path, std::optional<Rep> fallback = std::nullopt);

} // namespace tvch
