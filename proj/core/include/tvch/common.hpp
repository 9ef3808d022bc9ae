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

#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvch {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cdouble I{0.0, 1.0};

// Error hierarchy. The CLI maps NumericalError to exit code 3 and every
// other tvch::Error to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Signal or kernel grids that cannot be combined as requested.
class GridError : public Error {
public:
    using Error::Error;
};

// Energy at t <= 0 where positive time is required.
class DomainError : public Error {
public:
    using Error::Error;
};

class SupportViolation : public Error {
public:
    using Error::Error;
};

// Kernel grid does not cover the range needed by an application.
class CoverageError : public Error {
public:
    using Error::Error;
};

// Conversion target not reachable from the source representation.
class WrongFamily : public Error {
public:
    using Error::Error;
};

// No tabulated closed form exists for this path kind and representation.
class NoClosedForm : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IllConditionedPair : public NumericalError {
public:
    IllConditionedPair(const std::string& what, double theta1, double theta2)
        : NumericalError(what), theta1_(theta1), theta2_(theta2) {}
    double theta1() const { return theta1_; }
    double theta2() const { return theta2_; }

private:
    double theta1_;
    double theta2_;
};

// Normalized sinc, sin(pi x) / (pi x).
inline double sinc(double x)
{
    if (std::abs(x) < 1e-8) {
        double px = pi * x;
        return 1.0 - px * px / 6.0;
    }
    return std::sin(pi * x) / (pi * x);
}

// exp(j 2 pi phase), with phase in cycles.
inline cdouble cis(double cycles)
{
    return std::polar(1.0, two_pi * cycles);
}

// Uniform 1-D grid. conj_start remembers where the conjugate grid started
// before a Fourier transform so that the inverse lands on the same points.
struct Axis1D {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;
    double conj_start = std::numeric_limits<double>::quiet_NaN();

    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double back() const { return at(count == 0 ? 0 : count - 1); }
    bool empty() const { return count == 0; }
};

Axis1D make_axis(double start, double step, std::size_t count);
// Grid with `count` points spanning [lo, hi] inclusive.
Axis1D linspace_axis(double lo, double hi, std::size_t count);
// Symmetric grid: points (i - (count-1)/2) * step.
Axis1D symmetric_axis(double step, std::size_t count);

bool same_grid(const Axis1D& a, const Axis1D& b, double rel_tol = 1e-9);

double max_abs(const std::vector<cdouble>& v);
double l2_norm(const std::vector<cdouble>& v);
// ||a - b|| / ||b||; returns |a| when b is zero.
double relative_l2(const std::vector<cdouble>& a, const std::vector<cdouble>& b);

} // namespace tvch
