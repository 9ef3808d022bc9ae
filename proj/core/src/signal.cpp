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

#include "tvch/signal.hpp"

#include "tvch/fft.hpp"
#include "tvch/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tvch {

namespace {

constexpr double max_log_time = 700.0; // e^u still representable

bool is_integer(double v, double tol = 1e-9)
{
    return std::abs(v - std::round(v)) <= tol;
}

// Signed DFT bin frequency for index k of an n-point transform with step d.
double bin_frequency(std::size_t k, std::size_t n, double d)
{
    double kk = static_cast<double>(k);
    if (k > n / 2)
        kk -= static_cast<double>(n);
    return kk / (static_cast<double>(n) * d);
}

void require_positive_time(const SampledSignal& x, const char* what)
{
    if (nonpositive_energy_fraction(x) > 1e-8)
        throw DomainError(std::string(what) + ": signal has energy at t <= 0");
}

// Warped samples of x on the log-time grid.
std::vector<cdouble> warped_on(const SampledSignal& x, const Axis1D& u)
{
    std::vector<cdouble> w(u.count);
    for (std::size_t k = 0; k < u.count; ++k)
        w[k] = log_value_at(x, u.at(k));
    return w;
}

} // namespace

double SampledSignal::time(std::size_t i) const
{
    double p = position(i);
    return axis == SignalAxis::time ? p : std::exp(p);
}

double SampledSignal::energy() const
{
    double s = 0.0;
    for (const auto& z : samples)
        s += std::norm(z);
    return dt * s;
}

void SampledSignal::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
        throw InvalidArgument("signal needs finite t0 and dt > 0");
    if (samples.empty())
        throw InvalidArgument("signal needs at least one sample");
    for (const auto& z : samples)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("signal contains non-finite samples");
}

SampledSignal make_signal(const Axis1D& grid, SignalAxis axis)
{
    SampledSignal s;
    s.t0 = grid.start;
    s.dt = grid.step;
    s.axis = axis;
    s.samples.assign(grid.count, cdouble{});
    return s;
}

SampledSignal sample_function(const Axis1D& grid, const std::function<cdouble(double)>& f, SignalAxis axis)
{
    SampledSignal s = make_signal(grid, axis);
    for (std::size_t i = 0; i < grid.count; ++i) {
        double p = grid.at(i);
        if (axis == SignalAxis::time)
            s.samples[i] = f(p);
        else
            s.samples[i] = p > max_log_time ? cdouble{} : std::exp(0.5 * p) * f(std::exp(p));
    }
    return s;
}

cdouble value_at(const SampledSignal& x, double t, const KaiserInterpolator& k)
{
    if (x.axis == SignalAxis::time)
        return k.eval(x.samples, (t - x.t0) / x.dt);
    if (t <= 0.0)
        return 0.0;
    double u = std::log(t);
    return k.eval(x.samples, (u - x.t0) / x.dt) / std::sqrt(t);
}

cdouble log_value_at(const SampledSignal& x, double u, const KaiserInterpolator& k)
{
    if (x.axis == SignalAxis::log_time)
        return k.eval(x.samples, (u - x.t0) / x.dt);
    if (u > max_log_time)
        return 0.0;
    double t = std::exp(u);
    return std::exp(0.5 * u) * k.eval(x.samples, (t - x.t0) / x.dt);
}

SampledSignal resample(const SampledSignal& x, const Axis1D& grid, SignalAxis axis, const KaiserInterpolator& k)
{
    SampledSignal y = make_signal(grid, axis);
    for (std::size_t i = 0; i < grid.count; ++i) {
        double p = grid.at(i);
        y.samples[i] = axis == SignalAxis::time ? value_at(x, p, k) : log_value_at(x, p, k);
    }
    return y;
}

double relative_error_on(const SampledSignal& y, const SampledSignal& ref, double T1, double T2)
{
    if (y.size() != ref.size() || y.axis != ref.axis || !same_grid(y.grid(), ref.grid()))
        throw GridError("relative_error_on: signals must share a grid");
    std::vector<cdouble> a, b;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double t = y.time(i);
        if (t >= T1 && t < T2) {
            a.push_back(y.samples[i]);
            b.push_back(ref.samples[i]);
        }
    }
    if (a.empty())
        throw InvalidArgument("relative_error_on: window contains no samples");
    return relative_l2(a, b);
}

double relative_error(const SampledSignal& y, const SampledSignal& ref)
{
    if (y.size() != ref.size() || !same_grid(y.grid(), ref.grid()))
        throw GridError("relative_error: signals must share a grid");
    return relative_l2(y.samples, ref.samples);
}

// ---------------------------------------------------------------------------

void ElementaryOpSpec::validate() const
{
    if (!std::isfinite(param))
        throw InvalidArgument("elementary operator parameter must be finite");
    if (kind == Kind::dilate && !(param > 0.0))
        throw InvalidArgument("dilation factor must be positive");
}

ElementaryOpSpec translate_op(double tau)
{
    return {ElementaryOpSpec::Kind::translate, tau};
}

ElementaryOpSpec modulate_op(double nu)
{
    return {ElementaryOpSpec::Kind::modulate, nu};
}

ElementaryOpSpec dilate_op(double a)
{
    ElementaryOpSpec s{ElementaryOpSpec::Kind::dilate, a};
    s.validate();
    return s;
}

ElementaryOpSpec op_power(const ElementaryOpSpec& u, int m)
{
    ElementaryOpSpec r = u;
    if (u.kind == ElementaryOpSpec::Kind::dilate)
        r.param = std::pow(u.param, m);
    else
        r.param = u.param * m;
    return r;
}

SampledSignal elementary_apply(const ElementaryOpSpec& spec, const SampledSignal& x)
{
    spec.validate();
    x.validate();
    SampledSignal y = make_signal(x.grid(), x.axis);
    const auto& k = KaiserInterpolator::shared();
    const std::size_t n = x.size();
    const bool log_axis = x.axis == SignalAxis::log_time;
    switch (spec.kind) {
    case ElementaryOpSpec::Kind::translate:
        if (spec.param == 0.0)
            return x;
        for (std::size_t i = 0; i < n; ++i) {
            if (!log_axis) {
                y.samples[i] = k.eval(x.samples, static_cast<double>(i) - spec.param / x.dt);
            } else {
                double u = x.position(i);
                if (u > max_log_time)
                    continue;
                y.samples[i] = std::exp(0.5 * u) * value_at(x, std::exp(u) - spec.param, k);
            }
        }
        break;
    case ElementaryOpSpec::Kind::modulate:
        for (std::size_t i = 0; i < n; ++i) {
            double t = x.position(i);
            if (log_axis) {
                if (t > max_log_time)
                    throw NumericalError("modulation evaluated beyond representable time");
                t = std::exp(t);
            }
            y.samples[i] = x.samples[i] * cis(spec.param * t);
        }
        break;
    case ElementaryOpSpec::Kind::dilate: {
        const double a = spec.param;
        if (a == 1.0)
            return x;
        if (log_axis) {
            const double shift = std::log(a) / x.dt;
            for (std::size_t i = 0; i < n; ++i)
                y.samples[i] = k.eval(x.samples, static_cast<double>(i) - shift);
        } else {
            const double g = 1.0 / std::sqrt(a);
            for (std::size_t i = 0; i < n; ++i)
                y.samples[i] = g * k.eval(x.samples, (x.position(i) / a - x.t0) / x.dt);
        }
        break;
    }
    }
    return y;
}

// ---------------------------------------------------------------------------

void ProjectionSpec::validate() const
{
    switch (kind) {
    case Kind::time_window:
        if (!(p2 > p1))
            throw InvalidArgument("time_window needs T2 > T1");
        break;
    case Kind::lowpass:
        if (!(p1 > 0.0))
            throw InvalidArgument("lowpass needs W > 0");
        break;
    case Kind::mellin_lowpass:
        if (!(p1 > 0.0))
            throw InvalidArgument("mellin_lowpass needs alpha > 0");
        break;
    }
}

ProjectionSpec time_window(double T1, double T2)
{
    ProjectionSpec p{ProjectionSpec::Kind::time_window, T1, T2};
    p.validate();
    return p;
}

ProjectionSpec lowpass(double W)
{
    ProjectionSpec p{ProjectionSpec::Kind::lowpass, W, 0.0};
    p.validate();
    return p;
}

ProjectionSpec mellin_lowpass(double alpha)
{
    ProjectionSpec p{ProjectionSpec::Kind::mellin_lowpass, alpha, 0.0};
    p.validate();
    return p;
}

Axis1D MellinConfig::grid() const
{
    if (!(u_max > u_min) || points < 2)
        throw InvalidArgument("Mellin grid needs u_max > u_min and at least two points");
    double du = (u_max - u_min) / static_cast<double>(points);
    return make_axis(u_min + 0.5 * du, du, points);
}

SampledSignal project(const ProjectionSpec& spec, const SampledSignal& x, const MellinConfig& cfg)
{
    spec.validate();
    x.validate();
    SampledSignal y = x;
    const std::size_t n = x.size();
    switch (spec.kind) {
    case ProjectionSpec::Kind::time_window: {
        const double eps = 1e-9 * x.dt;
        double lo = spec.p1, hi = spec.p2;
        if (x.axis == SignalAxis::log_time) {
            lo = spec.p1 > 0.0 ? std::log(spec.p1) : -std::numeric_limits<double>::infinity();
            hi = spec.p2 > 0.0 ? std::log(spec.p2) : -std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < n; ++i) {
            double p = x.position(i);
            if (!(p >= lo - eps && p < hi - eps))
                y.samples[i] = 0.0;
        }
        break;
    }
    case ProjectionSpec::Kind::lowpass: {
        if (x.axis != SignalAxis::time)
            throw GridError("lowpass projection needs a time-axis signal");
        auto X = dft(x.samples, -1);
        const double lim = 0.5 * spec.p1 * (1.0 + 1e-12);
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(bin_frequency(k, n, x.dt)) > lim)
                X[k] = 0.0;
        y.samples = dft(X, +1);
        for (auto& z : y.samples)
            z /= static_cast<double>(n);
        break;
    }
    case ProjectionSpec::Kind::mellin_lowpass: {
        const double lim = 0.5 * spec.p1 * (1.0 + 1e-12);
        if (x.axis == SignalAxis::log_time) {
            // Same symmetric frequency grid as mellin(), so that the mask and
            // the transform agree for even and odd lengths.
            const Axis1D u = x.grid();
            const Axis1D om = mellin_omega_grid(u);
            std::vector<cdouble> X(n);
            shifted_dft(x.samples.data(), X.data(), n, u.start, u.step, om.start, -1, u.step);
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(om.at(j)) > lim)
                    X[j] = 0.0;
            shifted_dft(X.data(), y.samples.data(), n, om.start, om.step, u.start, +1, om.step);
            break;
        }
        require_positive_time(x, "mellin_lowpass");
        const Axis1D u = cfg.grid();
        const auto w = warped_on(x, u);
        std::vector<cdouble> W(u.count);
        const Axis1D om = mellin_omega_grid(u);
        shifted_dft(w.data(), W.data(), u.count, u.start, u.step, om.start, -1, u.step);
        std::vector<std::size_t> band;
        for (std::size_t j = 0; j < om.count; ++j)
            if (std::abs(om.at(j)) <= lim)
                band.push_back(j);
        for (std::size_t i = 0; i < n; ++i) {
            double t = x.position(i);
            if (t <= 0.0 || std::log(t) < u.start - 0.5 * u.step || std::log(t) > u.back() + 0.5 * u.step) {
                y.samples[i] = 0.0;
                continue;
            }
            double uu = std::log(t);
            cdouble acc = 0.0;
            for (std::size_t j : band)
                acc += W[j] * cis(om.at(j) * uu);
            y.samples[i] = om.step * acc / std::sqrt(t);
        }
        break;
    }
    }
    return y;
}

// ---------------------------------------------------------------------------

Spectrum fourier(const SampledSignal& x, std::size_t pad_to)
{
    if (x.axis != SignalAxis::time)
        throw GridError("fourier needs a time-axis signal");
    x.validate();
    const std::size_t n = std::max(pad_to, x.size());
    std::vector<cdouble> in(n, cdouble{});
    std::copy(x.samples.begin(), x.samples.end(), in.begin());
    Axis1D t = make_axis(x.t0, x.dt, n);
    Spectrum X;
    X.freq = conjugate_axis(t);
    X.values.resize(n);
    shifted_dft(in.data(), X.values.data(), n, t.start, t.step, X.freq.start, -1, t.step);
    return X;
}

SampledSignal inverse_fourier(const Spectrum& X)
{
    const Axis1D t = conjugate_axis(X.freq);
    SampledSignal y = make_signal(t, SignalAxis::time);
    shifted_dft(X.values.data(), y.samples.data(), X.values.size(), X.freq.start, X.freq.step, t.start, +1,
                X.freq.step);
    return y;
}

cdouble spectrum_value_at(const Spectrum& X, double f, const KaiserInterpolator& k)
{
    return k.eval(X.values, (f - X.freq.start) / X.freq.step);
}

Axis1D mellin_omega_grid(const Axis1D& u_grid)
{
    return symmetric_axis(1.0 / (static_cast<double>(u_grid.count) * u_grid.step), u_grid.count);
}

MellinSpectrum mellin(const SampledSignal& x, const Axis1D& omega_grid, const MellinConfig& cfg)
{
    x.validate();
    Axis1D u;
    std::vector<cdouble> w;
    if (x.axis == SignalAxis::log_time) {
        u = x.grid();
        w = x.samples;
    } else {
        require_positive_time(x, "mellin");
        u = cfg.grid();
        w = warped_on(x, u);
    }
    MellinSpectrum X;
    X.omega = omega_grid;
    X.values.assign(omega_grid.count, cdouble{});
    X.u_start = u.start;
    X.du = u.step;
    X.u_count = u.count;
    const double dual = 1.0 / (static_cast<double>(u.count) * u.step);
    if (omega_grid.count == u.count && std::abs(omega_grid.step - dual) <= 1e-12 * dual) {
        shifted_dft(w.data(), X.values.data(), u.count, u.start, u.step, omega_grid.start, -1, u.step);
        return X;
    }
    for (std::size_t j = 0; j < omega_grid.count; ++j) {
        const double om = omega_grid.at(j);
        cdouble acc = 0.0;
        for (std::size_t k = 0; k < u.count; ++k)
            acc += w[k] * cis(-om * u.at(k));
        X.values[j] = u.step * acc;
    }
    return X;
}

MellinSpectrum mellin(const SampledSignal& x, const MellinConfig& cfg)
{
    const Axis1D u = x.axis == SignalAxis::log_time ? x.grid() : cfg.grid();
    return mellin(x, mellin_omega_grid(u), cfg);
}

SampledSignal inverse_mellin(const MellinSpectrum& X, const Axis1D& grid, SignalAxis axis)
{
    SampledSignal y = make_signal(grid, axis);
    const std::size_t m = X.omega.count;
    for (std::size_t i = 0; i < grid.count; ++i) {
        double p = grid.at(i);
        double u = p;
        if (axis == SignalAxis::time) {
            if (p <= 0.0)
                continue;
            u = std::log(p);
        }
        cdouble ph = cis(X.omega.start * u);
        const cdouble step = cis(X.omega.step * u);
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += X.values[j] * ph;
            ph *= step;
        }
        acc *= X.omega.step;
        y.samples[i] = axis == SignalAxis::time ? acc / std::sqrt(p) : acc;
    }
    return y;
}

cdouble inner_product(const SampledSignal& x, const SampledSignal& y)
{
    x.validate();
    y.validate();
    if (x.axis == y.axis && std::abs(x.dt - y.dt) <= 1e-12 * x.dt && is_integer((y.t0 - x.t0) / x.dt)) {
        const long long off = std::llround((y.t0 - x.t0) / x.dt); // y index j = i - off
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            long long j = static_cast<long long>(i) - off;
            if (j >= 0 && j < static_cast<long long>(y.size()))
                acc += x.samples[i] * std::conj(y.samples[static_cast<std::size_t>(j)]);
        }
        return x.dt * acc;
    }
    bool x_is_target;
    if (x.axis != y.axis)
        x_is_target = x.axis == SignalAxis::log_time;
    else
        x_is_target = x.dt <= y.dt;
    const SampledSignal& tgt = x_is_target ? x : y;
    const SampledSignal other = resample(x_is_target ? y : x, tgt.grid(), tgt.axis);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < tgt.size(); ++i)
        acc += x_is_target ? tgt.samples[i] * std::conj(other.samples[i])
                           : other.samples[i] * std::conj(tgt.samples[i]);
    return tgt.dt * acc;
}

double nonpositive_energy_fraction(const SampledSignal& x)
{
    if (x.axis == SignalAxis::log_time)
        return 0.0;
    double neg = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = std::norm(x.samples[i]);
        tot += e;
        if (x.position(i) <= 0.0)
            neg += e;
    }
    return tot > 0.0 ? neg / tot : 0.0;
}

// ---------------------------------------------------------------------------

void write_signal_csv(std::ostream& os, const SampledSignal& x)
{
    os << (x.axis == SignalAxis::time ? "t" : "u") << ",re,im\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << format_double(x.position(i)) << ',' << format_double(x.samples[i].real()) << ','
           << format_double(x.samples[i].imag()) << '\n';
}

SampledSignal read_signal_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw InvalidArgument("signal CSV is empty");
    SampledSignal x;
    if (trim(line) == "t,re,im")
        x.axis = SignalAxis::time;
    else if (trim(line) == "u,re,im")
        x.axis = SignalAxis::log_time;
    else
        throw InvalidArgument("signal CSV header must be t,re,im");
    std::vector<double> pos;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto f = split_csv_doubles(line, 3, lineno);
        pos.push_back(f[0]);
        x.samples.emplace_back(f[1], f[2]);
    }
    if (pos.empty())
        throw InvalidArgument("signal CSV has no samples");
    x.t0 = pos.front();
    x.dt = pos.size() > 1 ? (pos.back() - pos.front()) / static_cast<double>(pos.size() - 1) : 1.0;
    if (pos.size() > 1) {
        if (!(x.dt > 0.0))
            throw InvalidArgument("signal CSV times must increase");
        for (std::size_t i = 0; i < pos.size(); ++i)
            if (std::abs(pos[i] - x.position(i)) > 1e-9 * x.dt)
                throw InvalidArgument("signal CSV spacing is not uniform at row " + std::to_string(i + 2));
    }
    return x;
}

void save_signal_csv(const std::string& path, const SampledSignal& x)
{
    std::ofstream os(path);
    if (!os)
        throw InvalidArgument("cannot write " + path);
    write_signal_csv(os, x);
}

SampledSignal load_signal_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw InvalidArgument("cannot read " + path);
    return read_signal_csv(is);
}

} // namespace tvch
