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

#include "tvch/channel.hpp"

#include "tvch/fft.hpp"

#include <algorithm>

namespace tvch {

namespace {

constexpr double max_log_time = 700.0;

// Physical output times for a grid of the given axis type; the warp factor
// e^{u/2} is applied by finish().
std::vector<double> output_times(const Axis1D& g, SignalAxis axis)
{
    std::vector<double> t(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        double p = g.at(i);
        t[i] = axis == SignalAxis::time ? p : (p > max_log_time ? std::numeric_limits<double>::infinity() : std::exp(p));
    }
    return t;
}

SampledSignal finish(const Axis1D& g, SignalAxis axis, std::vector<cdouble> y)
{
    SampledSignal s = make_signal(g, axis);
    if (axis == SignalAxis::log_time)
        for (std::size_t i = 0; i < g.count; ++i)
            y[i] = std::isfinite(std::exp(g.at(i))) ? y[i] * std::exp(0.5 * g.at(i)) : cdouble{};
    s.samples = std::move(y);
    return s;
}

void require_tag(const Channel& c, Rep want, const char* op)
{
    if (!c.analytic() && c.rep != want)
        throw InvalidArgument(std::string(op) + " needs a " + rep_name(want) + " kernel, got " + rep_name(c.rep));
    if (!c.analytic())
        c.grid().validate();
}

void require_positive(const SampledSignal& x, const char* op)
{
    if (nonpositive_energy_fraction(x) > 1e-8)
        throw DomainError(std::string(op) + ": input has energy at t <= 0");
}

bool has_freq_scale(const std::vector<OnePath>& p)
{
    return std::any_of(p.begin(), p.end(), [](const OnePath& q) { return q.kind == PathKind::freq_scale; });
}

SampledSignal apply_analytic(const Channel& c, const SampledSignal& x, const Axis1D& out, SignalAxis oa)
{
    if (has_freq_scale(c.paths()))
        require_positive(x, "frequency-scale path");
    Waveform y = apply_paths(c.paths(), waveform_from_signal(x));
    return sample(y, out, oa);
}

// Columns of a kernel as contiguous rows along axis1: col[j][i] = k(i, j).
std::vector<std::vector<cdouble>> columns(const KernelGrid2D& k)
{
    std::vector<std::vector<cdouble>> c(k.axis2.count, std::vector<cdouble>(k.axis1.count));
    for (std::size_t i = 0; i < k.axis1.count; ++i)
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            c[j][i] = k.at(i, j);
    return c;
}

// Coverage: x must not be cut off where the output still needs it.
void check_coverage(const SampledSignal& x, double need_lo, double need_hi)
{
    if (x.axis != SignalAxis::time || !(need_hi > need_lo))
        return;
    const double peak = max_abs(x.samples);
    if (peak == 0.0)
        return;
    const double tol = 1e-6 * peak;
    const double x_lo = x.position(0), x_hi = x.position(x.size() - 1);
    auto fmt = [](double a, double b) { return "[" + std::to_string(a) + ", " + std::to_string(b) + "]"; };
    if (need_lo < x_lo - x.dt && std::abs(x.samples.front()) > tol)
        throw CoverageError("input grid does not cover delays needed by the kernel; missing " + fmt(need_lo, x_lo));
    if (need_hi > x_hi + x.dt && std::abs(x.samples.back()) > tol)
        throw CoverageError("input grid does not cover delays needed by the kernel; missing " + fmt(x_hi, need_hi));
}

std::size_t fast_size(std::size_t n)
{
    for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

// y(t) = sum_j w_j h(t, tau_j) x(t - tau_j) where hcol(t, j) gives h.
template <class HFn>
std::vector<cdouble> delay_sum(const std::vector<double>& tt, const Axis1D& tau, const SampledSignal& x, HFn&& hval)
{
    const auto& k = KaiserInterpolator::shared();
    std::vector<cdouble> y(tt.size());
    std::vector<cdouble> hrow(tau.count);
    for (std::size_t p = 0; p < tt.size(); ++p) {
        const double t = tt[p];
        if (!std::isfinite(t))
            continue;
        hval(t, hrow);
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < tau.count; ++j) {
            if (hrow[j] == cdouble{})
                continue;
            acc += trapezoid_weight(tau, j) * hrow[j] * value_at(x, t - tau.at(j), k);
        }
        y[p] = acc;
    }
    return y;
}

} // namespace

void OnePath::validate() const
{
    if (!std::isfinite(p1) || !std::isfinite(p2) || !std::isfinite(gain.real()) || !std::isfinite(gain.imag()))
        throw InvalidArgument("path parameters must be finite");
    if (kind == PathKind::delay_dilation && !(p1 > 0.0))
        throw InvalidArgument("delay-dilation path needs a0 > 0");
    if (kind == PathKind::freq_scale && !(p2 > 0.0))
        throw InvalidArgument("frequency-scale path needs a0 > 0");
}

const char* path_kind_name(PathKind k)
{
    switch (k) {
    case PathKind::delay_doppler:
        return "delay_doppler";
    case PathKind::delay_dilation:
        return "delay_dilation";
    case PathKind::freq_scale:
        return "freq_scale";
    }
    return "?";
}

const std::vector<OnePath>& Channel::paths() const
{
    if (!analytic())
        throw InvalidArgument("channel is gridded, not analytic");
    return std::get<std::vector<OnePath>>(body);
}

const KernelGrid2D& Channel::grid() const
{
    if (analytic())
        throw InvalidArgument("channel is analytic, not gridded");
    return std::get<KernelGrid2D>(body);
}

Channel make_one_path(OnePathKind kind, double p1, double p2, cdouble gain)
{
    OnePath p;
    p.gain = gain;
    Rep rep = Rep::S;
    switch (kind) {
    case OnePathKind::delay:
        p.kind = PathKind::delay_doppler;
        p.p1 = 0.0;
        p.p2 = p1;
        break;
    case OnePathKind::delay_doppler:
        p.kind = PathKind::delay_doppler;
        p.p1 = p1;
        p.p2 = p2;
        break;
    case OnePathKind::delay_dilation:
        p.kind = PathKind::delay_dilation;
        p.p1 = p1;
        p.p2 = p2;
        rep = Rep::L;
        break;
    case OnePathKind::freq_scale:
        p.kind = PathKind::freq_scale;
        p.p1 = p1;
        p.p2 = p2;
        rep = Rep::rho;
        break;
    }
    p.validate();
    Channel c = make_analytic({p}, rep);
    return c;
}

Channel make_analytic(std::vector<OnePath> paths, Rep view)
{
    for (const auto& p : paths)
        p.validate();
    Channel c;
    c.rep = view;
    c.body = std::move(paths);
    c.provenance = {rep_name(view)};
    return c;
}

Channel make_gridded(KernelGrid2D k)
{
    k.validate();
    Channel c;
    c.rep = k.rep;
    c.provenance = {rep_name(k.rep)};
    c.body = std::move(k);
    return c;
}

Channel identity_channel()
{
    return make_one_path(OnePathKind::delay, 0.0);
}

Channel scaled(const Channel& c, cdouble g)
{
    Channel r = c;
    if (r.analytic()) {
        for (auto& p : std::get<std::vector<OnePath>>(r.body))
            p.gain *= g;
    } else {
        for (auto& v : std::get<KernelGrid2D>(r.body).values)
            v *= g;
    }
    return r;
}

Waveform apply_paths(const std::vector<OnePath>& paths, const Waveform& x)
{
    Waveform y;
    for (const auto& p : paths) {
        p.validate();
        Waveform z;
        switch (p.kind) {
        case PathKind::delay_doppler:
            z = apply(modulate_op(p.p1), apply(translate_op(p.p2), x));
            break;
        case PathKind::delay_dilation:
            z = apply(translate_op(p.p2), apply(dilate_op(p.p1), x));
            break;
        case PathKind::freq_scale: {
            Waveform d = apply(modulate_op(p.p1), apply(dilate_op(p.p2), x));
            z = Waveform([d](double t) -> cdouble { return t > 0.0 ? d.value(t) : 0.0; },
                         [d](double u) { return d.log_value(u); });
            break;
        }
        }
        z = scale(z, p.gain);
        y = y ? add(y, z) : z;
    }
    if (!y)
        return waveform_from_time([](double) -> cdouble { return 0.0; });
    return y;
}

SampledSignal apply_time_varying(const Channel& h, const SampledSignal& x, const std::optional<Axis1D>& out,
                                    std::optional<SignalAxis> out_axis)
{
    const SignalAxis oa = out_axis.value_or(x.axis);
    x.validate();
    const Axis1D og = out.value_or(x.grid());
    require_tag(h, Rep::h, "apply_time_varying");
    if (h.analytic())
        return apply_analytic(h, x, og, oa);
    const KernelGrid2D& k = h.grid();
    const auto tt = output_times(og, oa);
    {
        double lo = std::max(tt.front(), k.axis1.start), hi = std::min(tt.back(), k.axis1.back());
        if (x.axis == SignalAxis::time && hi >= lo)
            check_coverage(x, lo - k.axis2.back(), hi - k.axis2.start);
    }
    const auto cols = columns(k);
    const auto& ki = KaiserInterpolator::shared();
    auto y = delay_sum(tt, k.axis2, x, [&](double t, std::vector<cdouble>& row) {
        auto st = ki.stencil((t - k.axis1.start) / k.axis1.step, k.axis1.count);
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = st.w.empty() ? cdouble{} : KaiserInterpolator::apply(st, cols[j].data());
    });
    return finish(og, oa, std::move(y));
}

SampledSignal apply_narrowband(const Channel& S, const SampledSignal& x, const std::optional<Axis1D>& out,
                                    std::optional<SignalAxis> out_axis)
{
    const SignalAxis oa = out_axis.value_or(x.axis);
    x.validate();
    const Axis1D og = out.value_or(x.grid());
    require_tag(S, Rep::S, "apply_narrowband");
    if (S.analytic())
        return apply_analytic(S, x, og, oa);
    const KernelGrid2D& k = S.grid();
    const auto tt = output_times(og, oa);
    if (x.axis == SignalAxis::time)
        check_coverage(x, tt.front() - k.axis2.back(), tt.back() - k.axis2.start);
    std::vector<cdouble> ph(k.axis1.count);
    auto y = delay_sum(tt, k.axis2, x, [&](double t, std::vector<cdouble>& row) {
        // h(t, tau) = int S(theta, tau) e^{j2pi theta t} dtheta
        cdouble e = cis(k.axis1.start * t);
        const cdouble step = cis(k.axis1.step * t);
        for (std::size_t i = 0; i < k.axis1.count; ++i) {
            ph[i] = trapezoid_weight(k.axis1, i) * e;
            e *= step;
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            cdouble acc = 0.0;
            for (std::size_t i = 0; i < k.axis1.count; ++i)
                acc += k.at(i, j) * ph[i];
            row[j] = acc;
        }
    });
    return finish(og, oa, std::move(y));
}

SampledSignal apply_wideband(const Channel& L, const SampledSignal& x, const std::optional<Axis1D>& out,
                                    std::optional<SignalAxis> out_axis)
{
    const SignalAxis oa = out_axis.value_or(x.axis);
    x.validate();
    const Axis1D og = out.value_or(x.grid());
    require_tag(L, Rep::L, "apply_wideband");
    if (L.analytic())
        return apply_analytic(L, x, og, oa);
    const KernelGrid2D& k = L.grid();
    for (std::size_t i = 0; i < k.axis1.count; ++i) {
        if (k.axis1.at(i) > 0.0)
            continue;
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            if (k.at(i, j) != cdouble{})
                throw DomainError("wideband kernel has support at a <= 0");
    }
    const auto tt = output_times(og, oa);
    double t_lo = std::numeric_limits<double>::infinity(), t_hi = -t_lo;
    for (double t : tt)
        if (std::isfinite(t))
            t_lo = std::min(t_lo, t), t_hi = std::max(t_hi, t);
    std::vector<cdouble> y(tt.size());
    if (!(t_hi >= t_lo))
        return finish(og, oa, std::move(y));

    // Physical extent of x and its sample spacing in time.
    double x_lo = x.axis == SignalAxis::time ? x.position(0) : std::exp(x.position(0));
    double x_hi = x.axis == SignalAxis::time ? x.position(x.size() - 1) : std::exp(std::min(x.position(x.size() - 1), max_log_time));
    double x_dt = x.axis == SignalAxis::time ? x.dt : x_lo * x.dt; // finest spacing on a log grid
    const auto& ki = KaiserInterpolator::shared();
    const double db = k.axis2.step, b_lo = k.axis2.start, b_hi = k.axis2.back();

    for (std::size_t i = 0; i < k.axis1.count; ++i) {
        const double a = k.axis1.at(i);
        if (a <= 0.0)
            continue;
        bool any = false;
        for (std::size_t j = 0; j < k.axis2.count && !any; ++j)
            any = k.at(i, j) != cdouble{};
        if (!any)
            continue;
        // z(s) = a^{-1/2} x(s/a) on a grid fine enough for both z and the b lattice.
        const std::size_t r = static_cast<std::size_t>(std::max(1.0, std::ceil(db / (a * x_dt) - 1e-9)));
        const double delta = db / static_cast<double>(r);
        const double s_lo = std::max(t_lo - b_hi, a * x_lo) - 20.0 * delta;
        const double s_hi = std::min(t_hi - b_lo, a * x_hi) + 20.0 * delta;
        if (!(s_hi > s_lo))
            continue;
        const std::size_t nz = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / delta)) + 1;
        const std::size_t nk = (k.axis2.count - 1) * r + 1;
        const std::size_t nfft = fast_size(nz + nk - 1);
        std::vector<cdouble> zf(nfft), kf(nfft);
        const double g = 1.0 / std::sqrt(a);
        for (std::size_t q = 0; q < nz; ++q)
            zf[q] = g * value_at(x, (s_lo + static_cast<double>(q) * delta) / a, ki);
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            kf[j * r] = trapezoid_weight(k.axis2, j) * k.at(i, j);
        zf = dft(zf, -1);
        kf = dft(kf, -1);
        for (std::size_t q = 0; q < nfft; ++q)
            zf[q] *= kf[q] / static_cast<double>(nfft);
        auto c = dft(zf, +1);
        c.resize(nz + nk - 1);
        // c[q] sits at t = s_lo + b_lo + q delta
        const double c0 = s_lo + b_lo;
        const double wa = trapezoid_weight(k.axis1, i);
        for (std::size_t p = 0; p < tt.size(); ++p) {
            if (!std::isfinite(tt[p]))
                continue;
            y[p] += wa * ki.eval(c, (tt[p] - c0) / delta);
        }
    }
    return finish(og, oa, std::move(y));
}

SampledSignal apply_frequency_scale(const Channel& rho, const SampledSignal& x, const std::optional<Axis1D>& out,
                                    std::optional<SignalAxis> out_axis)
{
    const SignalAxis oa = out_axis.value_or(x.axis);
    x.validate();
    const Axis1D og = out.value_or(x.grid());
    require_tag(rho, Rep::rho, "apply_frequency_scale");
    require_positive(x, "apply_frequency_scale");
    if (rho.analytic())
        return apply_analytic(rho, x, og, oa);
    const KernelGrid2D& k = rho.grid();
    for (std::size_t j = 0; j < k.axis2.count; ++j) {
        if (k.axis2.at(j) > 0.0)
            continue;
        for (std::size_t i = 0; i < k.axis1.count; ++i)
            if (k.at(i, j) != cdouble{})
                throw DomainError("frequency-scale kernel has support at a <= 0");
    }
    const auto tt = output_times(og, oa);
    const auto& ki = KaiserInterpolator::shared();
    std::vector<cdouble> y(tt.size());
    std::vector<cdouble> ph(k.axis1.count);
    for (std::size_t p = 0; p < tt.size(); ++p) {
        const double t = tt[p];
        if (!(t > 0.0) || !std::isfinite(t))
            continue;
        cdouble e = cis(k.axis1.start * t);
        const cdouble step = cis(k.axis1.step * t);
        for (std::size_t i = 0; i < k.axis1.count; ++i) {
            ph[i] = trapezoid_weight(k.axis1, i) * e;
            e *= step;
        }
        cdouble acc = 0.0;
        for (std::size_t j = 0; j < k.axis2.count; ++j) {
            const double a = k.axis2.at(j);
            if (a <= 0.0)
                continue;
            cdouble r = 0.0;
            for (std::size_t i = 0; i < k.axis1.count; ++i)
                r += k.at(i, j) * ph[i];
            if (r == cdouble{})
                continue;
            acc += trapezoid_weight(k.axis2, j) * r * value_at(x, t / a, ki) / std::sqrt(a);
        }
        y[p] = acc;
    }
    return finish(og, oa, std::move(y));
}

SampledSignal apply_channel(const Channel& c, const SampledSignal& x, const std::optional<Axis1D>& out,
                                    std::optional<SignalAxis> out_axis)
{
    const SignalAxis oa = out_axis.value_or(x.axis);
    if (c.analytic()) {
        x.validate();
        return apply_analytic(c, x, out.value_or(x.grid()), oa);
    }
    switch (c.rep) {
    case Rep::h:
        return apply_time_varying(c, x, out, out_axis);
    case Rep::S:
        return apply_narrowband(c, x, out, out_axis);
    case Rep::L:
        return apply_wideband(c, x, out, out_axis);
    case Rep::rho:
        return apply_frequency_scale(c, x, out, out_axis);
    default:
        throw InvalidArgument(std::string("no apply routine for a gridded ") + rep_name(c.rep) +
                              " kernel; convert it to h, S, L or rho first");
    }
}

} // namespace tvch
