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

#include "tvch/sysfuncs.hpp"

#include "tvch/fft.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tvch {

namespace {

using Support = ClosedForm::Support;

ClosedForm fn(std::function<cdouble(double, double)> w)
{
    ClosedForm f;
    f.support = Support::function;
    f.weight = std::move(w);
    return f;
}

ClosedForm line(double c1, double c2, double c0, std::function<cdouble(double, double)> w)
{
    ClosedForm f;
    f.support = Support::line;
    f.c1 = c1;
    f.c2 = c2;
    f.c0 = c0;
    f.weight = std::move(w);
    return f;
}

ClosedForm point(double x1, double x2, cdouble w)
{
    ClosedForm f;
    f.support = Support::point;
    f.c1 = x1;
    f.c2 = x2;
    f.weight = [w](double, double) { return w; };
    return f;
}

[[noreturn]] void no_form(const OnePath& p, Rep r)
{
    throw NoClosedForm(std::string("no closed form for a ") + path_kind_name(p.kind) + " path in " + rep_name(r));
}

ClosedForm delay_doppler_form(const OnePath& p, Rep r)
{
    const cdouble g = p.gain;
    const double th = p.p1, ta = p.p2;
    switch (r) {
    case Rep::h:
        return line(0, 1, ta, [=](double t, double) { return g * cis(th * t); });
    case Rep::S:
        return point(th, ta, g);
    case Rep::T:
        return fn([=](double t, double nu) { return g * cis(th * t) * cis(-ta * nu); });
    case Rep::H:
        return line(1, 0, th, [=](double, double nu) { return g * cis(-ta * nu); });
    case Rep::k0:
        return line(1, -1, ta, [=](double t, double) { return g * cis(th * t); });
    case Rep::k1:
        return fn([=](double theta, double s) { return g * cis(-(s + ta) * (theta - th)); });
    case Rep::k2:
        return fn([=](double t, double nu) { return g * cis(t * (nu + th)) * cis(-ta * nu); });
    case Rep::k3:
        return line(1, -1, th, [=](double, double nu) { return g * cis(-ta * nu); });
    case Rep::G:
        return line(0, 1, th, [=](double theta, double) { return g * cis(-ta * (theta - th)); });
    case Rep::V:
        return point(ta, th, g * cis(ta * th));
    case Rep::M:
        return fn([=](double theta, double t) { return g * cis(-ta * (theta - th)) * cis(t * th); });
    case Rep::g:
        return line(1, 0, ta, [=](double, double tau) { return g * cis(ta * th) * cis(tau * th); });
    case Rep::L:
        if (th == 0.0)
            return point(1.0, ta, g);
        return fn([=](double a, double b) -> cdouble {
            if (!(a > 0.0) || a == 1.0)
                return 0.0;
            return g * std::abs(th) / (std::sqrt(a) * (1.0 - a) * (1.0 - a)) * cis(th * (b - a * ta) / (1.0 - a));
        });
    case Rep::L2:
        if (th == 0.0)
            return line(1, 0, 1.0, [=](double, double theta) { return g * cis(-ta * theta); });
        no_form(p, r);
    case Rep::rho:
        no_form(p, r);
    }
    no_form(p, r);
}

ClosedForm delay_dilation_form(const OnePath& p, Rep r)
{
    const cdouble g = p.gain;
    const double a0 = p.p1, b0 = p.p2;
    const double sa = std::sqrt(a0);
    switch (r) {
    case Rep::L:
        return point(a0, b0, g);
    case Rep::L2:
        return line(1, 0, a0, [=](double, double theta) { return g * cis(-b0 * theta); });
    case Rep::S:
        if (a0 == 1.0)
            return point(0.0, b0, g);
        return fn([=](double theta, double tau) {
            return g * sa / std::abs(1.0 - a0) * cis(-theta * (b0 - a0 * tau) / (1.0 - a0));
        });
    case Rep::h:
        return line(1.0 - a0, a0, b0, [=](double, double) { return g * sa; });
    case Rep::k0:
        return line(1.0, -a0, b0, [=](double, double) { return g * sa; });
    case Rep::k1:
        return fn([=](double theta, double s) { return g * sa * cis(-theta * (b0 + a0 * s)); });
    case Rep::k2:
        return fn([=](double t, double nu) { return g / sa * cis(nu * (t - b0) / a0); });
    case Rep::k3:
        return line(-a0, 1.0, 0.0, [=](double theta, double) { return g * sa * cis(-theta * b0); });
    case Rep::T:
        return fn([=](double t, double nu) { return g / sa * cis(nu * ((t - b0) / a0 - t)); });
    case Rep::H:
        return line(-a0, 1.0 - a0, 0.0, [=](double theta, double nu) { return g * sa * cis(-(theta + nu) * b0); });
    case Rep::G:
        return line(1.0 - a0, -1.0, 0.0, [=](double theta, double) { return g * sa * cis(-theta * b0); });
    case Rep::V:
        if (a0 == 1.0)
            return point(b0, 0.0, g);
        return fn([=](double tau, double nu) { return g * sa / std::abs(1.0 - a0) * cis(nu * (tau - b0) / (1.0 - a0)); });
    case Rep::M:
        return fn([=](double theta, double t) { return g * sa * cis(-theta * b0) * cis((1.0 - a0) * theta * t); });
    case Rep::g:
        return line(1.0, 1.0 - a0, b0, [=](double, double) { return g * sa; });
    case Rep::rho:
        no_form(p, r);
    }
    no_form(p, r);
}

// ---------------------------------------------------------------------------
// Grid edges

enum class EdgeKind { fourier, shear_axis1, shear_axis2 };

struct Edge {
    Rep to;
    EdgeKind kind;
    int axis = 1;  // fourier: which axis
    int sign = -1; // fourier: exponent sign; shear_axis1: sigma
};

const std::map<Rep, std::vector<Edge>>& graph()
{
    using E = EdgeKind;
    static const std::map<Rep, std::vector<Edge>> g = {
        {Rep::h, {{Rep::S, E::fourier, 1, -1}, {Rep::T, E::fourier, 2, -1}, {Rep::k0, E::shear_axis2}}},
        {Rep::S, {{Rep::h, E::fourier, 1, +1}, {Rep::H, E::fourier, 2, -1}}},
        {Rep::T, {{Rep::h, E::fourier, 2, +1}, {Rep::H, E::fourier, 1, -1}}},
        {Rep::H, {{Rep::S, E::fourier, 2, +1}, {Rep::T, E::fourier, 1, +1}, {Rep::k3, E::shear_axis1, 1, -1}}},
        {Rep::k3,
         {{Rep::H, E::shear_axis1, 1, +1}, {Rep::G, E::shear_axis2}, {Rep::k1, E::fourier, 2, -1},
          {Rep::k2, E::fourier, 1, +1}}},
        {Rep::k0, {{Rep::h, E::shear_axis2}, {Rep::k1, E::fourier, 1, -1}, {Rep::k2, E::fourier, 2, +1}}},
        {Rep::k1, {{Rep::k0, E::fourier, 1, +1}, {Rep::k3, E::fourier, 2, +1}}},
        {Rep::k2, {{Rep::k0, E::fourier, 2, -1}, {Rep::k3, E::fourier, 1, -1}}},
        {Rep::G, {{Rep::k3, E::shear_axis2}, {Rep::V, E::fourier, 1, +1}, {Rep::M, E::fourier, 2, +1}}},
        {Rep::V, {{Rep::G, E::fourier, 1, -1}, {Rep::g, E::fourier, 2, +1}}},
        {Rep::M, {{Rep::G, E::fourier, 2, -1}, {Rep::g, E::fourier, 1, +1}}},
        {Rep::g, {{Rep::V, E::fourier, 2, -1}, {Rep::M, E::fourier, 1, -1}}},
    };
    return g;
}

const Edge& find_edge(Rep from, Rep to)
{
    for (const auto& e : graph().at(from))
        if (e.to == to)
            return e;
    throw WrongFamily("no direct edge");
}

KernelGrid2D fourier_axis(const KernelGrid2D& in, int axis, int sign, Rep rep)
{
    const Axis1D& x = axis == 1 ? in.axis1 : in.axis2;
    const Axis1D y = conjugate_axis(x);
    KernelGrid2D out = axis == 1 ? make_kernel(rep, y, in.axis2) : make_kernel(rep, in.axis1, y);
    const std::size_t n = x.count;
    std::vector<cdouble> a(n), b(n);
    const std::size_t lines = axis == 1 ? in.axis2.count : in.axis1.count;
    for (std::size_t l = 0; l < lines; ++l) {
        for (std::size_t i = 0; i < n; ++i)
            a[i] = axis == 1 ? in.at(i, l) : in.at(l, i);
        shifted_dft(a.data(), b.data(), n, x.start, x.step, y.start, sign, x.step);
        for (std::size_t i = 0; i < n; ++i)
            (axis == 1 ? out.at(i, l) : out.at(l, i)) = b[i];
    }
    return out;
}

void require_equal_steps(const KernelGrid2D& k)
{
    if (std::abs(k.axis1.step - k.axis2.step) > 1e-9 * k.axis1.step)
        throw GridError(std::string("coordinate shear on ") + rep_name(k.rep) + " needs equal steps on both axes");
}

// out(x1, y) = in(x1, x1 - y)
KernelGrid2D shear2(const KernelGrid2D& in, Rep rep)
{
    require_equal_steps(in);
    const std::size_t n1 = in.axis1.count, nz = in.axis2.count;
    const double d = in.axis1.step;
    Axis1D y = make_axis(in.axis1.start - in.axis2.back(), d, n1 + nz - 1);
    y.conj_start = in.axis2.conj_start;
    KernelGrid2D out = make_kernel(rep, in.axis1, y);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < y.count; ++j) {
            long long zi = static_cast<long long>(nz - 1) + static_cast<long long>(i) - static_cast<long long>(j);
            if (zi >= 0 && zi < static_cast<long long>(nz))
                out.at(i, j) = in.at(i, static_cast<std::size_t>(zi));
        }
    return out;
}

// out(y, x2) = in(y + sigma x2, x2)
KernelGrid2D shear1(const KernelGrid2D& in, int sigma, Rep rep)
{
    require_equal_steps(in);
    const std::size_t nf = in.axis1.count, n2 = in.axis2.count;
    const double d = in.axis1.step;
    Axis1D y = sigma < 0 ? make_axis(in.axis1.start + in.axis2.start, d, nf + n2 - 1)
                         : make_axis(in.axis1.start - in.axis2.back(), d, nf + n2 - 1);
    y.conj_start = in.axis1.conj_start;
    KernelGrid2D out = make_kernel(rep, y, in.axis2);
    for (std::size_t i = 0; i < y.count; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            long long fi = sigma < 0 ? static_cast<long long>(i) - static_cast<long long>(j)
                                     : static_cast<long long>(i + j) - static_cast<long long>(n2 - 1);
            if (fi >= 0 && fi < static_cast<long long>(nf))
                out.at(i, j) = in.at(static_cast<std::size_t>(fi), j);
        }
    return out;
}

KernelGrid2D apply_edge(const KernelGrid2D& in, const Edge& e)
{
    switch (e.kind) {
    case EdgeKind::fourier:
        return fourier_axis(in, e.axis, e.sign, e.to);
    case EdgeKind::shear_axis1:
        return shear1(in, e.sign, e.to);
    case EdgeKind::shear_axis2:
        return shear2(in, e.to);
    }
    return in;
}

double max_abs_row(const KernelGrid2D& k, std::size_t i)
{
    double m = 0.0;
    for (std::size_t j = 0; j < k.axis2.count; ++j)
        m = std::max(m, std::abs(k.at(i, j)));
    return m;
}

std::vector<std::vector<cdouble>> kernel_columns(const KernelGrid2D& k)
{
    std::vector<std::vector<cdouble>> c(k.axis2.count, std::vector<cdouble>(k.axis1.count));
    for (std::size_t i = 0; i < k.axis1.count; ++i)
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            c[j][i] = k.at(i, j);
    return c;
}

Channel retag(const Channel& c, Rep target)
{
    Channel r = c;
    r.rep = target;
    r.provenance.push_back(rep_name(target));
    return r;
}

} // namespace

ClosedForm closed_form(const OnePath& path, Rep rep)
{
    path.validate();
    switch (path.kind) {
    case PathKind::delay_doppler:
        return delay_doppler_form(path, rep);
    case PathKind::delay_dilation:
        return delay_dilation_form(path, rep);
    case PathKind::freq_scale:
        if (rep == Rep::rho)
            return point(path.p1, path.p2, path.gain);
        no_form(path, rep);
    }
    no_form(path, rep);
}

cdouble closed_form_value(const Channel& analytic, Rep rep, double x1, double x2)
{
    cdouble acc = 0.0;
    for (const auto& p : analytic.paths()) {
        ClosedForm f = closed_form(p, rep);
        if (f.support != Support::function)
            throw NoClosedForm(std::string("closed form in ") + rep_name(rep) + " is a distribution for a " +
                               path_kind_name(p.kind) + " path");
        acc += f.weight(x1, x2);
    }
    return acc;
}

KernelGrid2D sample_closed_form(const Channel& analytic, Rep rep, const Axis1D& axis1, const Axis1D& axis2)
{
    KernelGrid2D k = make_kernel(rep, axis1, axis2);
    for (std::size_t i = 0; i < axis1.count; ++i)
        for (std::size_t j = 0; j < axis2.count; ++j)
            k.at(i, j) = closed_form_value(analytic, rep, axis1.at(i), axis2.at(j));
    return k;
}

std::vector<Rep> conversion_path(Rep from, Rep to)
{
    if (!is_narrowband(from) || !is_narrowband(to)) {
        std::string valid;
        if (is_narrowband(from))
            for (Rep r : reachable_targets(from))
                valid += std::string(valid.empty() ? "" : ", ") + rep_name(r);
        throw WrongFamily(std::string("cannot convert ") + rep_name(from) + " to " + rep_name(to) +
                          " within the narrowband family" + (valid.empty() ? "" : "; valid targets: " + valid));
    }
    std::map<Rep, Rep> prev;
    std::deque<Rep> q{from};
    prev[from] = from;
    while (!q.empty()) {
        Rep r = q.front();
        q.pop_front();
        if (r == to)
            break;
        for (const auto& e : graph().at(r))
            if (!prev.count(e.to)) {
                prev[e.to] = r;
                q.push_back(e.to);
            }
    }
    std::vector<Rep> path{to};
    while (path.back() != from)
        path.push_back(prev.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Rep> reachable_targets(Rep from)
{
    std::vector<Rep> out;
    if (!is_narrowband(from))
        return out;
    for (Rep r : all_reps())
        if (is_narrowband(r) && r != from)
            out.push_back(r);
    return out;
}

Channel convert_narrowband(const Channel& c, Rep target)
{
    const auto path = conversion_path(c.rep, target);
    if (c.analytic())
        return retag(c, target);
    KernelGrid2D k = c.grid();
    k.validate();
    for (std::size_t i = 1; i < path.size(); ++i)
        k = apply_edge(k, find_edge(path[i - 1], path[i]));
    Channel r = make_gridded(std::move(k));
    r.provenance = c.provenance;
    for (std::size_t i = 1; i < path.size(); ++i)
        r.provenance.push_back(rep_name(path[i]));
    r.warnings = c.warnings;
    return r;
}

// ---------------------------------------------------------------------------

Channel wideband_to_narrowband(const Channel& L, Rep target)
{
    if (!L.analytic())
        throw InvalidArgument("gridded L needs output grids for wideband_to_narrowband");
    if (L.rep != Rep::L)
        throw InvalidArgument("wideband_to_narrowband needs an L channel");
    if (target != Rep::k0 && target != Rep::h && target != Rep::S)
        throw WrongFamily("wideband_to_narrowband targets are k0, h and S");
    return retag(L, target);
}

Channel wideband_to_narrowband(const Channel& L, Rep target, const Axis1D& axis1, const Axis1D& axis2,
                               const std::optional<Axis1D>& t_axis)
{
    if (L.analytic())
        return wideband_to_narrowband(L, target);
    if (L.rep != Rep::L)
        throw InvalidArgument("wideband_to_narrowband needs an L channel");
    if (target != Rep::k0 && target != Rep::h && target != Rep::S)
        throw WrongFamily("wideband_to_narrowband targets are k0, h and S");
    const KernelGrid2D& Lg = L.grid();
    Lg.validate();
    const auto& ki = KaiserInterpolator::shared();

    // v(t, x) = int sqrt(a) L(a, t + a (mode * x - t ...)) handled per target below
    auto eval_h = [&](const Axis1D& tA, const Axis1D& tauA, bool k0form) {
        KernelGrid2D out = make_kernel(k0form ? Rep::k0 : Rep::h, tA, tauA);
        for (std::size_t ia = 0; ia < Lg.axis1.count; ++ia) {
            const double a = Lg.axis1.at(ia);
            if (max_abs_row(Lg, ia) == 0.0)
                continue;
            if (!(a > 0.0))
                throw DomainError("wideband kernel has support at a <= 0");
            const double w = trapezoid_weight(Lg.axis1, ia) * std::sqrt(a);
            const cdouble* row = &Lg.values[ia * Lg.axis2.count];
            for (std::size_t i = 0; i < tA.count; ++i)
                for (std::size_t j = 0; j < tauA.count; ++j) {
                    const double t = tA.at(i), s = tauA.at(j);
                    // h: b = (1-a) t + a tau ; k0: b = t - a s
                    const double b = k0form ? t - a * s : (1.0 - a) * t + a * s;
                    out.at(i, j) += w * ki.eval(row, Lg.axis2.count, (b - Lg.axis2.start) / Lg.axis2.step);
                }
        }
        return out;
    };

    KernelGrid2D out;
    if (target == Rep::h || target == Rep::k0) {
        out = eval_h(axis1, axis2, target == Rep::k0);
    } else {
        if (!t_axis)
            throw InvalidArgument("S from L needs a t axis for the intermediate h");
        double th_max = std::max(std::abs(axis1.start), std::abs(axis1.back()));
        if (th_max * t_axis->step > 0.125)
            throw ResolutionError("theta axis reaches " + std::to_string(th_max) +
                                  " Hz, which leaves fewer than 8 samples per period on the t axis (step " +
                                  std::to_string(t_axis->step) + " s)");
        KernelGrid2D h = eval_h(*t_axis, axis2, false);
        out = make_kernel(Rep::S, axis1, axis2);
        std::vector<cdouble> ph(t_axis->count);
        for (std::size_t i = 0; i < axis1.count; ++i) {
            const double th = axis1.at(i);
            for (std::size_t n = 0; n < t_axis->count; ++n)
                ph[n] = t_axis->step * cis(-th * t_axis->at(n));
            for (std::size_t j = 0; j < axis2.count; ++j) {
                cdouble acc = 0.0;
                for (std::size_t n = 0; n < t_axis->count; ++n)
                    acc += h.at(n, j) * ph[n];
                out.at(i, j) = acc;
            }
        }
    }
    Channel r = make_gridded(std::move(out));
    r.provenance = L.provenance;
    if (target == Rep::S)
        r.provenance.push_back("h");
    r.provenance.push_back(rep_name(target));
    r.warnings = L.warnings;
    return r;
}

Channel narrowband_to_wideband(const Channel& S)
{
    if (!S.analytic())
        throw InvalidArgument("gridded S needs output grids for narrowband_to_wideband");
    if (S.rep != Rep::S)
        throw InvalidArgument("narrowband_to_wideband needs an S channel");
    return retag(S, Rep::L);
}

Channel narrowband_to_wideband(const Channel& S, const LFromSOptions& opt)
{
    if (S.analytic())
        return narrowband_to_wideband(S);
    if (S.rep != Rep::S)
        throw InvalidArgument("narrowband_to_wideband needs an S channel");
    const KernelGrid2D& Sg = S.grid();
    Sg.validate();
    if (opt.a.count == 0 || opt.b.count == 0)
        throw InvalidArgument("narrowband_to_wideband needs a and b grids");
    if (!(opt.a.start > 0.0))
        throw InvalidArgument("narrowband_to_wideband needs a grid with a > 0");
    if (!(opt.eps_a >= 0.0))
        throw InvalidArgument("eps_a must be non-negative");

    std::vector<std::string> warnings = S.warnings;
    // DC limitation: mass on the theta = 0 row cannot be represented.
    {
        double peak = 0.0, zero = 0.0;
        for (std::size_t i = 0; i < Sg.axis1.count; ++i) {
            double m = 0.0;
            for (std::size_t j = 0; j < Sg.axis2.count; ++j)
                m += std::norm(Sg.at(i, j));
            peak = std::max(peak, m);
            if (std::abs(Sg.axis1.at(i)) <= 0.5 * Sg.axis1.step)
                zero = std::max(zero, m);
        }
        if (peak > 0.0 && std::sqrt(zero / peak) > opt.dc_tolerance)
            warnings.push_back("S has mass at theta = 0 (relative " + std::to_string(std::sqrt(zero / peak)) +
                               "); time-invariant content maps to a = 1, which is excluded, and only "
                               "DC-free inputs are reproduced");
    }

    const double tau_max = std::max(std::abs(Sg.axis2.start), std::abs(Sg.axis2.back()));
    const double b_max = std::max(std::abs(opt.b.start), std::abs(opt.b.back()));
    const double thp_lo = Sg.axis1.start, thp_hi = Sg.axis1.back();
    const auto cols = kernel_columns(Sg);
    const auto& ki = KaiserInterpolator::shared();
    KernelGrid2D out = make_kernel(Rep::L, opt.a, opt.b);
    double fastest_b = 0.0;

    for (std::size_t ia = 0; ia < opt.a.count; ++ia) {
        const double a = opt.a.at(ia);
        if (std::abs(a - 1.0) < opt.eps_a)
            continue;
        const double om = 1.0 - a;
        // theta range that maps into the S grid: theta' = (1 - a) theta
        double lo = thp_lo / om, hi = thp_hi / om;
        if (lo > hi)
            std::swap(lo, hi);
        const double period_limit = 1.0 / (8.0 * std::max({a * tau_max, b_max, 1e-300}));
        double dth = std::min(period_limit, Sg.axis1.step / std::abs(om));
        if (opt.theta_step > 0.0) {
            if (opt.theta_step > period_limit * (1.0 + 1e-12))
                throw ResolutionError("theta step " + std::to_string(opt.theta_step) +
                                      " gives fewer than 8 samples per period (limit " + std::to_string(period_limit) +
                                      ")");
            dth = std::min(dth, opt.theta_step);
        }
        const std::size_t nth = static_cast<std::size_t>(std::ceil((hi - lo) / dth)) + 1;
        if (nth > 4000000)
            throw ResolutionError("L from S would need " + std::to_string(nth) + " theta samples at a = " +
                                  std::to_string(a) + "; widen eps_a or shrink the grids");
        dth = nth > 1 ? (hi - lo) / static_cast<double>(nth - 1) : 1.0;
        fastest_b = std::max(fastest_b, std::max(std::abs(lo), std::abs(hi)));

        // G_a(theta) = int S((1-a) theta, tau) e^{-j2pi theta a tau} dtau, weighted by |theta|
        std::vector<cdouble> Gw(nth);
        for (std::size_t k = 0; k < nth; ++k) {
            const double th = lo + static_cast<double>(k) * dth;
            auto st = ki.stencil((om * th - Sg.axis1.start) / Sg.axis1.step, Sg.axis1.count);
            if (st.w.empty())
                continue;
            cdouble e = cis(-th * a * Sg.axis2.start);
            const cdouble step = cis(-th * a * Sg.axis2.step);
            cdouble acc = 0.0;
            for (std::size_t j = 0; j < Sg.axis2.count; ++j) {
                acc += trapezoid_weight(Sg.axis2, j) * KaiserInterpolator::apply(st, cols[j].data()) * e;
                e *= step;
            }
            const double wth = (k == 0 || k + 1 == nth) ? 0.5 * dth : dth;
            Gw[k] = wth * std::abs(th) * acc;
        }
        const double ga = 1.0 / std::sqrt(a);
        for (std::size_t m = 0; m < opt.b.count; ++m) {
            const double b = opt.b.at(m);
            cdouble e = cis(lo * b);
            const cdouble step = cis(dth * b);
            cdouble acc = 0.0;
            for (std::size_t k = 0; k < nth; ++k) {
                acc += Gw[k] * e;
                e *= step;
            }
            out.at(ia, m) = ga * acc;
        }
    }
    if (fastest_b * opt.b.step > 0.125)
        warnings.push_back("b grid step " + std::to_string(opt.b.step) + " s resolves L only up to " +
                           std::to_string(0.125 / opt.b.step) + " Hz but L oscillates up to " +
                           std::to_string(fastest_b) + " Hz near the a = 1 band");
    Channel r = make_gridded(std::move(out));
    r.provenance = S.provenance;
    r.provenance.push_back("L");
    r.warnings = std::move(warnings);
    return r;
}

Channel wideband_L2(const Channel& L)
{
    if (L.rep != Rep::L)
        throw InvalidArgument("wideband_L2 needs an L channel");
    if (L.analytic())
        return retag(L, Rep::L2);
    Channel r = make_gridded(fourier_axis(L.grid(), 2, -1, Rep::L2));
    r.provenance = L.provenance;
    r.provenance.push_back("L2");
    r.warnings = L.warnings;
    return r;
}

Spectrum apply_wideband_freq(const Channel& L2, const Spectrum& X)
{
    if (L2.rep != Rep::L2)
        throw InvalidArgument("apply_wideband_freq needs an L2 channel");
    Spectrum Y;
    Y.freq = X.freq;
    Y.values.assign(X.values.size(), cdouble{});
    const auto& ki = KaiserInterpolator::shared();
    if (L2.analytic()) {
        for (const auto& p : L2.paths()) {
            for (std::size_t i = 0; i < X.values.size(); ++i) {
                const double th = X.freq.at(i);
                switch (p.kind) {
                case PathKind::delay_dilation:
                    Y.values[i] += p.gain * cis(-p.p2 * th) * std::sqrt(p.p1) * spectrum_value_at(X, p.p1 * th, ki);
                    break;
                case PathKind::delay_doppler:
                    Y.values[i] += p.gain * cis(-p.p2 * (th - p.p1)) * spectrum_value_at(X, th - p.p1, ki);
                    break;
                case PathKind::freq_scale:
                    throw NoClosedForm("frequency-scale paths have no frequency-domain wideband form");
                }
            }
        }
        return Y;
    }
    const KernelGrid2D& k = L2.grid();
    k.validate();
    for (std::size_t ia = 0; ia < k.axis1.count; ++ia) {
        const double a = k.axis1.at(ia);
        if (max_abs_row(k, ia) == 0.0)
            continue;
        if (!(a > 0.0))
            throw DomainError("wideband kernel has support at a <= 0");
        const double w = trapezoid_weight(k.axis1, ia) * std::sqrt(a);
        const cdouble* row = &k.values[ia * k.axis2.count];
        for (std::size_t i = 0; i < X.values.size(); ++i) {
            const double th = X.freq.at(i);
            cdouble l2 = ki.eval(row, k.axis2.count, (th - k.axis2.start) / k.axis2.step);
            if (l2 == cdouble{})
                continue;
            Y.values[i] += w * l2 * spectrum_value_at(X, a * th, ki);
        }
    }
    return Y;
}

Channel h_to_rho(const Channel& h, const Axis1D& omega, const Axis1D& a)
{
    if (h.rep != Rep::h)
        throw InvalidArgument("h_to_rho needs an h channel");
    if (h.analytic())
        throw NoClosedForm("h_to_rho works on gridded kernels; analytic paths have no tabulated rho form");
    if (!(a.start > 0.0))
        throw InvalidArgument("h_to_rho needs an a grid with a > 0");
    const KernelGrid2D& k = h.grid();
    k.validate();
    const auto& ki = KaiserInterpolator::shared();
    const Axis1D& tA = k.axis1;
    for (std::size_t i = 0; i < tA.count; ++i)
        if (tA.at(i) <= 0.0 && max_abs_row(k, i) > 0.0)
            throw DomainError("h_to_rho needs h supported on t > 0");

    // rho(t_i, a_j) = t a^{-3/2} h(t, t - t/a)
    std::vector<cdouble> rho(tA.count * a.count);
    for (std::size_t i = 0; i < tA.count; ++i) {
        const double t = tA.at(i);
        if (t <= 0.0)
            continue;
        const cdouble* row = &k.values[i * k.axis2.count];
        for (std::size_t j = 0; j < a.count; ++j) {
            const double aj = a.at(j);
            const double tau = t - t / aj;
            rho[i * a.count + j] = t * std::pow(aj, -1.5) * ki.eval(row, k.axis2.count, (tau - k.axis2.start) / k.axis2.step);
        }
    }
    KernelGrid2D out = make_kernel(Rep::rho, omega, a);
    std::vector<cdouble> ph(tA.count);
    for (std::size_t w = 0; w < omega.count; ++w) {
        const double om = omega.at(w);
        cdouble e = cis(-om * tA.start);
        const cdouble step = cis(-om * tA.step);
        for (std::size_t i = 0; i < tA.count; ++i) {
            ph[i] = tA.step * e;
            e *= step;
        }
        for (std::size_t j = 0; j < a.count; ++j) {
            cdouble acc = 0.0;
            for (std::size_t i = 0; i < tA.count; ++i)
                acc += rho[i * a.count + j] * ph[i];
            out.at(w, j) = acc;
        }
    }
    Channel r = make_gridded(std::move(out));
    r.provenance = h.provenance;
    r.provenance.push_back("rho");
    r.warnings = h.warnings;
    return r;
}

Channel rho_to_h(const Channel& rho, const Axis1D& t, const Axis1D& tau)
{
    if (rho.rep != Rep::rho)
        throw InvalidArgument("rho_to_h needs a rho channel");
    if (rho.analytic())
        throw NoClosedForm("rho_to_h works on gridded kernels");
    const KernelGrid2D& k = rho.grid();
    k.validate();
    const Axis1D& om = k.axis1;
    const Axis1D& aA = k.axis2;
    if (!(aA.start > 0.0))
        throw DomainError("rho kernel a grid must be positive");
    const auto& ki = KaiserInterpolator::shared();
    KernelGrid2D out = make_kernel(Rep::h, t, tau);
    std::vector<cdouble> r(aA.count), ph(om.count);
    for (std::size_t i = 0; i < t.count; ++i) {
        const double ti = t.at(i);
        if (ti <= 0.0)
            continue;
        cdouble e = cis(om.start * ti);
        const cdouble step = cis(om.step * ti);
        for (std::size_t w = 0; w < om.count; ++w) {
            ph[w] = om.step * e;
            e *= step;
        }
        for (std::size_t j = 0; j < aA.count; ++j) {
            cdouble acc = 0.0;
            for (std::size_t w = 0; w < om.count; ++w)
                acc += k.at(w, j) * ph[w];
            r[j] = acc;
        }
        for (std::size_t m = 0; m < tau.count; ++m) {
            const double d = ti - tau.at(m);
            if (d <= 0.0)
                continue;
            const double a = ti / d;
            out.at(i, m) = ki.eval(r, (a - aA.start) / aA.step) * std::sqrt(ti) / std::pow(d, 1.5);
        }
    }
    Channel c = make_gridded(std::move(out));
    c.provenance = rho.provenance;
    c.provenance.push_back("h");
    c.warnings = rho.warnings;
    return c;
}

} // namespace tvch
