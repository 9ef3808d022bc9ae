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

#include "tvch/canonical.hpp"

#include "tvch/fft.hpp"
#include "tvch/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace tvch {

namespace {

#ifdef TVCH_MUTATE_SMOOTHS_PHASE
constexpr double smooth_phase_sign = +1.0;
#else
constexpr double smooth_phase_sign = -1.0;
#endif

// sinc((theta - theta') T) e^{-j pi (theta - theta') T}
cdouble doppler_kernel(double d, double T)
{
    return sinc(d * T) * cis(smooth_phase_sign * 0.5 * d * T);
}

int ceil_int(double v)
{
    return static_cast<int>(std::ceil(v - 1e-9));
}

void require_grid_values(const KernelGrid2D& k)
{
    k.validate();
    for (const auto& v : k.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidArgument("kernel has non-finite values");
}

CanonicalModel new_model(ModelKind kind, const ModelParams& p, const TapBounds& b, const Channel& src)
{
    b.validate();
    CanonicalModel m;
    m.kind = kind;
    m.params = p;
    m.bounds = b;
    m.provenance = src.provenance;
    m.provenance.push_back(std::string("taps:") + model_kind_name(kind));
    m.warnings = src.warnings;
    m.taps.reserve(static_cast<std::size_t>(b.m_count() * b.n_count()));
    for (int i = b.m_min; i <= b.m_max; ++i)
        for (int j = b.n_min; j <= b.n_max; ++j)
            m.taps.push_back({i, j, {}});
    return m;
}

Tap& tap_at(CanonicalModel& m, int i, int j)
{
    const auto& b = m.bounds;
    return m.taps[static_cast<std::size_t>((i - b.m_min) * b.n_count() + (j - b.n_min))];
}

void boundary_warning(CanonicalModel& m)
{
    const double peak = m.max_abs();
    if (peak == 0.0)
        return;
    double edge = 0.0;
    const auto& b = m.bounds;
    for (const auto& t : m.taps)
        if (t.m == b.m_min || t.m == b.m_max || t.n == b.n_min || t.n == b.n_max)
            edge = std::max(edge, std::abs(t.c));
    if (edge > 1e-3 * peak) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "tap magnitude on the truncation boundary is %.3g of the peak; widen the bounds", edge / peak);
        m.warnings.emplace_back(buf);
    }
}

void no_path_form(const OnePath& p, const char* what)
{
    throw NoClosedForm(std::string(what) + " has no sifting form for a " + path_kind_name(p.kind) + " path");
}

// Derived h_to_rho grids for the fs taps.
FsOptions fs_default_grids(const KernelGrid2D& h, double T1, double T2, const TapBounds& b)
{
    FsOptions o;
    const double Omega = 1.0 / (T2 - T1);
    const Axis1D& t = h.axis1;
    {
        Axis1D c = conjugate_axis(t);
        const double reach = Omega * (std::max(std::abs(b.m_min), std::abs(b.m_max)) + 64);
        const double half = std::min(reach, 0.5 * static_cast<double>(c.count) * c.step);
        const auto n = static_cast<std::size_t>(std::ceil(half / c.step));
        o.omega = make_axis(-static_cast<double>(n) * c.step, c.step, 2 * n + 1);
    }
    // scale range covered by the kernel inside the window: a = t / (t - tau)
    const double tol = 1e-12 * max_abs(h.values);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < t.count; ++i) {
        const double tt = t.at(i);
        if (tt < T1 - t.step || tt > T2 + t.step)
            continue;
        for (std::size_t j = 0; j < h.axis2.count; ++j) {
            if (std::abs(h.at(i, j)) <= tol)
                continue;
            const double ta = h.axis2.at(j);
            if (!(ta < tt))
                throw DomainError("h is nonzero at tau >= t inside the window; the scale a = t/(t - tau) is not positive there");
            const double a = tt / (tt - ta);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
    }
    if (!(hi > 0.0))
        throw InvalidArgument("h vanishes on the window; give explicit fs grids");
    if (!(hi > lo))
        hi = lo * 1.001;
    const double pad = 0.02 * (hi - lo);
    lo = std::max(0.5 * lo, lo - pad);
    hi += pad;
    o.a = linspace_axis(lo, hi, 2049);
    return o;
}

} // namespace

const char* model_kind_name(ModelKind k)
{
    switch (k) {
    case ModelKind::tf:
        return "tf";
    case ModelKind::ts:
        return "ts";
    case ModelKind::fs:
        return "fs";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& s)
{
    if (s == "tf")
        return ModelKind::tf;
    if (s == "ts")
        return ModelKind::ts;
    if (s == "fs")
        return ModelKind::fs;
    throw InvalidArgument("unknown model kind '" + s + "' (expected tf, ts or fs)");
}

TapBounds TapBounds::doubled() const
{
    return {2 * m_min, 2 * m_max, 2 * n_min, 2 * n_max};
}

void TapBounds::validate() const
{
    if (m_max < m_min || n_max < n_min)
        throw InvalidArgument("tap bounds are empty");
    if (static_cast<long long>(m_count()) * n_count() > 1000000)
        throw InvalidArgument("tap bounds are too large");
}

cdouble CanonicalModel::tap(int m, int n) const
{
    if (m < bounds.m_min || m > bounds.m_max || n < bounds.n_min || n > bounds.n_max)
        return 0.0;
    return taps[static_cast<std::size_t>((m - bounds.m_min) * bounds.n_count() + (n - bounds.n_min))].c;
}

double CanonicalModel::max_abs() const
{
    double m = 0.0;
    for (const auto& t : taps)
        m = std::max(m, std::abs(t.c));
    return m;
}

void CanonicalModel::validate() const
{
    bounds.validate();
    if (taps.size() != static_cast<std::size_t>(bounds.m_count() * bounds.n_count()))
        throw InvalidArgument("tap list does not match the bounds");
    for (std::size_t k = 0; k < taps.size(); ++k) {
        const int m = bounds.m_min + static_cast<int>(k) / bounds.n_count();
        const int n = bounds.n_min + static_cast<int>(k) % bounds.n_count();
        if (taps[k].m != m || taps[k].n != n)
            throw InvalidArgument("tap indices are not unique and ordered");
    }
    switch (kind) {
    case ModelKind::tf:
        if (!(params.T > 0.0) || !(params.W > 0.0))
            throw InvalidArgument("tf model needs T > 0 and W > 0");
        break;
    case ModelKind::ts:
        if (!(params.a0 > 1.0) || !(params.b0 > 0.0))
            throw InvalidArgument("ts model needs a0 > 1 and b0 > 0");
        break;
    case ModelKind::fs:
        if (!(params.a0 > 1.0) || !(params.T1 > 0.0) || !(params.T2 > params.T1))
            throw InvalidArgument("fs model needs a0 > 1 and 0 < T1 < T2");
        break;
    }
}

// ---------------------------------------------------------------------------

cdouble tf_smoothed_spreading(const Channel& S, double T, double W, double theta, double tau)
{
    if (!(T > 0.0) || !(W > 0.0))
        throw InvalidArgument("tf_smoothed_spreading needs T > 0 and W > 0");
    if (S.analytic()) {
        cdouble acc = 0.0;
        for (const auto& p : S.paths()) {
            if (p.kind != PathKind::delay_doppler)
                no_path_form(p, "the smoothed spreading function");
            acc += p.gain * sinc((tau - p.p2) * W) * doppler_kernel(theta - p.p1, T);
        }
        return acc;
    }
    if (S.rep != Rep::S)
        throw InvalidArgument("tf_smoothed_spreading needs an S channel");
    const KernelGrid2D& k = S.grid();
    require_grid_values(k);
    std::vector<cdouble> wt(k.axis1.count);
    std::vector<double> wd(k.axis2.count);
    for (std::size_t i = 0; i < k.axis1.count; ++i)
        wt[i] = trapezoid_weight(k.axis1, i) * doppler_kernel(theta - k.axis1.at(i), T);
    for (std::size_t j = 0; j < k.axis2.count; ++j)
        wd[j] = trapezoid_weight(k.axis2, j) * sinc((tau - k.axis2.at(j)) * W);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < k.axis1.count; ++i) {
        cdouble row = 0.0;
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            row += k.at(i, j) * wd[j];
        acc += wt[i] * row;
    }
    return acc;
}

CanonicalModel tf_taps(const Channel& S, double T, double W, double Tm, double Bd,
                       const std::optional<TapBounds>& bounds)
{
    if (!(T > 0.0) || !(W > 0.0) || !(Tm >= 0.0) || !(Bd >= 0.0))
        throw InvalidArgument("tf taps need T > 0, W > 0, Tm >= 0 and Bd >= 0");
    if (S.analytic()) {
        for (const auto& p : S.paths()) {
            if (p.kind != PathKind::delay_doppler)
                no_path_form(p, "the tf model");
            if (std::abs(p.p1) > Bd * (1.0 + 1e-12) || p.p2 < -1e-12 * Tm || p.p2 > Tm * (1.0 + 1e-12)) {
                char buf[200];
                std::snprintf(buf, sizeof buf, "path at (theta, tau) = (%g Hz, %g s) is outside |theta| <= %g, 0 <= tau <= %g",
                              p.p1, p.p2, Bd, Tm);
                throw SupportViolation(buf);
            }
        }
    } else {
        if (S.rep != Rep::S)
            throw InvalidArgument("tf taps need an S channel");
        const KernelGrid2D& k = S.grid();
        require_grid_values(k);
        const double tol = 1e-9 * max_abs(k.values);
        for (std::size_t i = 0; i < k.axis1.count; ++i)
            for (std::size_t j = 0; j < k.axis2.count; ++j) {
                if (std::abs(k.at(i, j)) <= tol)
                    continue;
                const double th = k.axis1.at(i), ta = k.axis2.at(j);
                if (std::abs(th) > Bd + 1e-9 * k.axis1.step || ta < -1e-9 * k.axis2.step || ta > Tm + 1e-9 * k.axis2.step) {
                    char buf[200];
                    std::snprintf(buf, sizeof buf, "S is nonzero at (theta, tau) = (%g Hz, %g s), outside |theta| <= %g, 0 <= tau <= %g",
                                  th, ta, Bd, Tm);
                    throw SupportViolation(buf);
                }
            }
    }
    const int K = ceil_int(T * Bd), N = ceil_int(W * Tm);
    const TapBounds b = bounds.value_or(TapBounds{-K, K, 0, N});
    ModelParams p;
    p.T = T;
    p.W = W;
    p.Tm = Tm;
    p.Bd = Bd;
    CanonicalModel m = new_model(ModelKind::tf, p, b, S);
    for (auto& t : m.taps)
        t.c = tf_smoothed_spreading(S, T, W, t.m / T, t.n / W);
    return m;
}

CanonicalModel ts_taps(const Channel& L, double a0, double b0, const TapBounds& bounds)
{
    if (!(a0 > 1.0) || !(b0 > 0.0))
        throw InvalidArgument("ts taps need a0 > 1 and b0 > 0");
    const double L0 = std::log(a0);
    ModelParams p;
    p.a0 = a0;
    p.b0 = b0;
    CanonicalModel m = new_model(ModelKind::ts, p, bounds, L);
    if (L.analytic()) {
        for (const auto& q : L.paths()) {
            double a = 0.0, b = 0.0;
            if (q.kind == PathKind::delay_dilation) {
                a = q.p1;
                b = q.p2;
            } else if (q.kind == PathKind::delay_doppler && q.p1 == 0.0) {
                a = 1.0;
                b = q.p2;
            } else {
                no_path_form(q, "the ts model");
            }
            const double u = std::log(a) / L0, v = b / (a * b0);
            for (auto& t : m.taps)
                t.c += q.gain * sinc(t.m - u) * sinc(t.n - v);
        }
    } else {
        if (L.rep != Rep::L)
            throw InvalidArgument("ts taps need an L channel");
        const KernelGrid2D& k = L.grid();
        require_grid_values(k);
        std::vector<std::vector<double>> su(static_cast<std::size_t>(bounds.m_count()));
        for (std::size_t i = 0; i < k.axis1.count; ++i) {
            const double a = k.axis1.at(i);
            bool any = false;
            for (std::size_t j = 0; j < k.axis2.count && !any; ++j)
                any = k.at(i, j) != cdouble{};
            if (!any)
                continue;
            if (!(a > 0.0))
                throw DomainError("wideband kernel has support at a <= 0");
            const double wa = trapezoid_weight(k.axis1, i);
            const double u = std::log(a) / L0;
            std::vector<cdouble> rowsum(static_cast<std::size_t>(bounds.n_count()));
            for (std::size_t j = 0; j < k.axis2.count; ++j) {
                const cdouble v = k.at(i, j) * trapezoid_weight(k.axis2, j);
                if (v == cdouble{})
                    continue;
                const double bv = k.axis2.at(j) / (a * b0);
                for (int n = bounds.n_min; n <= bounds.n_max; ++n)
                    rowsum[static_cast<std::size_t>(n - bounds.n_min)] += v * sinc(n - bv);
            }
            for (int mm = bounds.m_min; mm <= bounds.m_max; ++mm) {
                const double s = wa * sinc(mm - u);
                for (int n = bounds.n_min; n <= bounds.n_max; ++n)
                    tap_at(m, mm, n).c += s * rowsum[static_cast<std::size_t>(n - bounds.n_min)];
            }
        }
    }
    boundary_warning(m);
    return m;
}

CanonicalModel fs_taps(const Channel& src, double a0, double T1, double T2, const TapBounds& bounds,
                       const FsOptions& opt)
{
    if (!(T1 > 0.0))
        throw InvalidArgument("fs taps need T1 > 0; the Mellin machinery works on positive time");
    if (!(T2 > T1) || !(a0 > 1.0))
        throw InvalidArgument("fs taps need T2 > T1 and a0 > 1");
    const double Omega = 1.0 / (T2 - T1), L0 = std::log(a0), mid = T1 + T2;
    ModelParams p;
    p.a0 = a0;
    p.T1 = T1;
    p.T2 = T2;

    if (src.analytic()) {
        CanonicalModel m = new_model(ModelKind::fs, p, bounds, src);
        for (const auto& q : src.paths()) {
            if (q.kind != PathKind::freq_scale)
                no_path_form(q, "the fs model");
            const double w = q.p1 / Omega, v = std::log(q.p2) / L0;
            for (auto& t : m.taps)
                t.c += q.gain * cis(-0.5 * t.m * Omega * mid) * cis(0.5 * q.p1 * mid) * sinc(w - t.m) * sinc(v - t.n);
        }
        boundary_warning(m);
        return m;
    }

    Channel rho;
    if (src.rep == Rep::rho) {
        rho = src;
    } else if (src.rep == Rep::h) {
        FsOptions o = opt;
        if (!o.omega || !o.a) {
            FsOptions d = fs_default_grids(src.grid(), T1, T2, bounds);
            if (!o.omega)
                o.omega = d.omega;
            if (!o.a)
                o.a = d.a;
        }
        rho = h_to_rho(src, *o.omega, *o.a);
    } else {
        throw InvalidArgument("fs taps need an h or rho channel");
    }
    CanonicalModel m = new_model(ModelKind::fs, p, bounds, rho);
    const KernelGrid2D& k = rho.grid();
    require_grid_values(k);
    // Omega-side weights per (i, m), scale-side weights per (j, n).
    const int nm = bounds.m_count();
    std::vector<cdouble> wm(k.axis1.count * static_cast<std::size_t>(nm));
    for (std::size_t i = 0; i < k.axis1.count; ++i) {
        const double w = k.axis1.at(i);
        const cdouble e = trapezoid_weight(k.axis1, i) * cis(0.5 * w * mid);
        for (int mm = bounds.m_min; mm <= bounds.m_max; ++mm)
            wm[i * static_cast<std::size_t>(nm) + static_cast<std::size_t>(mm - bounds.m_min)] =
                e * sinc(w / Omega - mm) * cis(-0.5 * mm * Omega * mid);
    }
    std::vector<cdouble> col(static_cast<std::size_t>(nm));
    for (std::size_t j = 0; j < k.axis2.count; ++j) {
        const double a = k.axis2.at(j);
        std::fill(col.begin(), col.end(), cdouble{});
        bool any = false;
        for (std::size_t i = 0; i < k.axis1.count; ++i) {
            const cdouble v = k.at(i, j);
            if (v == cdouble{})
                continue;
            any = true;
            for (int q = 0; q < nm; ++q)
                col[static_cast<std::size_t>(q)] += v * wm[i * static_cast<std::size_t>(nm) + static_cast<std::size_t>(q)];
        }
        if (!any)
            continue;
        if (!(a > 0.0))
            throw DomainError("frequency-scale kernel has support at a <= 0");
        const double wa = trapezoid_weight(k.axis2, j), v = std::log(a) / L0;
        for (int n = bounds.n_min; n <= bounds.n_max; ++n) {
            const double s = wa * sinc(v - n);
            for (int q = 0; q < nm; ++q)
                tap_at(m, bounds.m_min + q, n).c += s * col[static_cast<std::size_t>(q)];
        }
    }
    boundary_warning(m);
    return m;
}

// ---------------------------------------------------------------------------

SampledSignal canonical_apply(const CanonicalModel& model, const SampledSignal& x, const std::optional<Axis1D>& out,
                              ApplyReport* report, std::optional<SignalAxis> out_axis)
{
    model.validate();
    x.validate();
    const Axis1D og = out.value_or(x.grid());
    const SignalAxis oa = out_axis.value_or(x.axis);
    const ModelParams& p = model.params;
    ApplyReport rep;

    // Range check against the model's input projection.
    try {
        std::optional<ProjectionSpec> Q;
        switch (model.kind) {
        case ModelKind::tf:
            if (x.axis == SignalAxis::time)
                Q = lowpass(p.W);
            break;
        case ModelKind::ts:
            if (x.axis == SignalAxis::time)
                Q = lowpass(1.0 / p.b0);
            break;
        case ModelKind::fs:
            if (nonpositive_energy_fraction(x) <= 1e-8)
                Q = mellin_lowpass(1.0 / std::log(p.a0));
            break;
        }
        if (Q) {
            const double nx = std::sqrt(x.energy());
            if (nx > 0.0) {
                SampledSignal qx = project(*Q, x);
                rep.range_deviation = relative_error(qx, x);
                if (rep.range_deviation > 1e-6) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf,
                                  "input is not in the model's input band (projection changes it by %.3g relative)",
                                  rep.range_deviation);
                    rep.warnings.emplace_back(buf);
                }
            }
        }
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("input range check skipped: ") + e.what());
    }

    const Waveform xw = waveform_from_signal(x);
    std::vector<double> tt(og.count);
    for (std::size_t i = 0; i < og.count; ++i)
        tt[i] = oa == SignalAxis::time ? og.at(i) : std::exp(og.at(i));
    std::vector<cdouble> y(og.count);
    const auto& b = model.bounds;

    switch (model.kind) {
    case ModelKind::tf:
    case ModelKind::fs: {
        // inner operator per n, modulation per m
        const double rate = model.kind == ModelKind::tf ? 1.0 / p.T : 1.0 / (p.T2 - p.T1);
        std::vector<std::vector<cdouble>> mod(static_cast<std::size_t>(b.m_count()), std::vector<cdouble>(og.count));
        for (int m = b.m_min; m <= b.m_max; ++m)
            for (std::size_t i = 0; i < og.count; ++i)
                mod[static_cast<std::size_t>(m - b.m_min)][i] = std::isfinite(tt[i]) ? cis(m * rate * tt[i]) : cdouble{};
        for (int n = b.n_min; n <= b.n_max; ++n) {
            bool any = false;
            for (int m = b.m_min; m <= b.m_max && !any; ++m)
                any = model.tap(m, n) != cdouble{};
            if (!any)
                continue;
            const ElementaryOpSpec op =
                model.kind == ModelKind::tf ? translate_op(n / p.W) : op_power(dilate_op(p.a0), n);
            const SampledSignal z = sample(apply(op, xw), og, oa);
            for (int m = b.m_min; m <= b.m_max; ++m) {
                const cdouble c = model.tap(m, n);
                if (c == cdouble{})
                    continue;
                const auto& e = mod[static_cast<std::size_t>(m - b.m_min)];
                for (std::size_t i = 0; i < og.count; ++i)
                    y[i] += c * e[i] * z.samples[i];
            }
        }
        if (model.kind == ModelKind::fs)
            for (std::size_t i = 0; i < og.count; ++i)
                if (!(tt[i] >= p.T1 && tt[i] < p.T2))
                    y[i] = 0.0;
        break;
    }
    case ModelKind::ts:
        for (const auto& t : model.taps) {
            if (t.c == cdouble{})
                continue;
            const Waveform z = apply(op_power(dilate_op(p.a0), t.m), apply(translate_op(t.n * p.b0), xw));
            const SampledSignal s = sample(z, og, oa);
            for (std::size_t i = 0; i < og.count; ++i)
                y[i] += t.c * s.samples[i];
        }
        break;
    }
    SampledSignal r = make_signal(og, oa);
    r.samples = std::move(y);
    if (report)
        *report = std::move(rep);
    return r;
}

// ---------------------------------------------------------------------------

SampledSignal RakeTapLine::apply(const SampledSignal& x) const
{
    x.validate();
    if (x.axis != SignalAxis::time)
        throw InvalidArgument("rake tap line works on time-axis signals");
    SampledSignal y = make_signal(t);
    const auto& k = KaiserInterpolator::shared();
    for (std::size_t n = 0; n < taps.size(); ++n)
        for (std::size_t i = 0; i < t.count; ++i)
            if (taps[n][i] != cdouble{})
                y.samples[i] += taps[n][i] * value_at(x, t.at(i) - static_cast<double>(n) / W, k);
    return y;
}

RakeTapLine rake_tapline(const Channel& h, double W, double Tm, const std::optional<Axis1D>& t)
{
    if (!(W > 0.0) || !(Tm >= 0.0))
        throw InvalidArgument("rake tap line needs W > 0 and Tm >= 0");
    RakeTapLine r;
    r.W = W;
    r.Tm = Tm;
    const int N = ceil_int(W * Tm);
    if (h.analytic()) {
        if (!t)
            throw InvalidArgument("rake tap line of an analytic channel needs a time grid");
        r.t = *t;
        r.taps.assign(static_cast<std::size_t>(N + 1), std::vector<cdouble>(t->count));
        for (const auto& p : h.paths()) {
            if (p.kind != PathKind::delay_doppler)
                no_path_form(p, "the rake tap line");
            if (p.p2 < -1e-12 || p.p2 > Tm * (1.0 + 1e-12))
                throw SupportViolation("path delay " + format_double(p.p2) + " s is outside [0, Tm]");
            for (int n = 0; n <= N; ++n) {
                const double s = sinc(W * p.p2 - n);
                if (s == 0.0)
                    continue;
                for (std::size_t i = 0; i < t->count; ++i)
                    r.taps[static_cast<std::size_t>(n)][i] += p.gain * s * cis(p.p1 * t->at(i));
            }
        }
        return r;
    }
    if (h.rep != Rep::h)
        throw InvalidArgument("rake tap line needs an h channel");
    const KernelGrid2D& k = h.grid();
    require_grid_values(k);
    const double tol = 1e-9 * max_abs(k.values);
    for (std::size_t j = 0; j < k.axis2.count; ++j) {
        const double tau = k.axis2.at(j);
        if (tau >= -1e-9 * k.axis2.step && tau <= Tm + 1e-9 * k.axis2.step)
            continue;
        for (std::size_t i = 0; i < k.axis1.count; ++i)
            if (std::abs(k.at(i, j)) > tol)
                throw SupportViolation("h is nonzero at tau = " + format_double(tau) + " s, outside [0, Tm]");
    }
    r.t = t.value_or(k.axis1);
    r.taps.assign(static_cast<std::size_t>(N + 1), std::vector<cdouble>(r.t.count));
    const auto& ki = KaiserInterpolator::shared();
    std::vector<cdouble> hrow(k.axis2.count);
    for (std::size_t i = 0; i < r.t.count; ++i) {
        auto st = ki.stencil((r.t.at(i) - k.axis1.start) / k.axis1.step, k.axis1.count);
        if (st.w.empty())
            continue;
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            hrow[j] = KaiserInterpolator::apply(st, &k.values[j], static_cast<std::ptrdiff_t>(k.axis2.count));
        for (int n = 0; n <= N; ++n) {
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < k.axis2.count; ++j)
                acc += trapezoid_weight(k.axis2, j) * hrow[j] * sinc(W * k.axis2.at(j) - n);
            r.taps[static_cast<std::size_t>(n)][i] = acc;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

void write_taps_csv(std::ostream& os, const CanonicalModel& model)
{
    os << "m,n,re,im\n";
    for (const auto& t : model.taps)
        os << t.m << ',' << t.n << ',' << format_double(t.c.real()) << ',' << format_double(t.c.imag()) << '\n';
}

std::vector<Tap> read_taps_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || trim(line) != "m,n,re,im")
        throw InvalidArgument("tap CSV header must be m,n,re,im");
    std::vector<Tap> taps;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto r = split_csv_doubles(line, 4, lineno);
        if (r[0] != std::floor(r[0]) || r[1] != std::floor(r[1]))
            throw InvalidArgument("tap CSV line " + std::to_string(lineno) + ": indices must be integers");
        taps.push_back({static_cast<int>(r[0]), static_cast<int>(r[1]), {r[2], r[3]}});
    }
    return taps;
}

std::string taps_sidecar(const CanonicalModel& model, const std::string& extra)
{
    nlohmann::json j;
    const auto& p = model.params;
    j["kind"] = model_kind_name(model.kind);
    nlohmann::json params;
    switch (model.kind) {
    case ModelKind::tf:
        params = {{"T_s", p.T}, {"W_hz", p.W}, {"Tm_s", p.Tm}, {"Bd_hz", p.Bd}};
        break;
    case ModelKind::ts:
        params = {{"a0", p.a0}, {"b0_s", p.b0}};
        break;
    case ModelKind::fs:
        params = {{"a0", p.a0}, {"T1_s", p.T1}, {"T2_s", p.T2}};
        break;
    }
    j["params"] = params;
    j["truncation"] = {{"m_min", model.bounds.m_min},
                       {"m_max", model.bounds.m_max},
                       {"n_min", model.bounds.n_min},
                       {"n_max", model.bounds.n_max}};
    j["provenance"] = model.provenance;
    j["warnings"] = model.warnings;
    j["library_version"] = version();
    auto e = nlohmann::json::parse(extra);
    if (!e.is_object())
        throw InvalidArgument("sidecar extra fields must be a JSON object");
    for (auto it = e.begin(); it != e.end(); ++it)
        j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

void save_taps(const std::string& path, const CanonicalModel& model, const std::string& extra)
{
    std::ofstream os(path);
    if (!os)
        throw InvalidArgument("cannot write " + path);
    write_taps_csv(os, model);
    std::ofstream js(path + ".json");
    if (!js)
        throw InvalidArgument("cannot write " + path + ".json");
    js << taps_sidecar(model, extra);
}

} // namespace tvch
