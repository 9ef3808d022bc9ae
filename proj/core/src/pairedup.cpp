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

#include "tvch/pairedup.hpp"

#include "tvch/fft.hpp"
#include "tvch/io.hpp"
#include "tvch/quadrature.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>

namespace tvch {

namespace {

constexpr int gl_order = 16;
constexpr std::uint64_t verify_seed = 0x5eed5eedULL;

int ceil_int(double v)
{
    return static_cast<int>(std::ceil(v - 1e-9));
}

Axis1D centred_axis(double step, std::size_t count)
{
    return make_axis(-step * static_cast<double>(count / 2), step, count);
}

// int_lo^inf e^{j w t} G(t) dt from the asymptotic series at lo.
cdouble oscillatory_tail(double w, double lo, const std::function<double(double)>& G)
{
    const double d = 1e-3 * std::max(1.0, std::abs(lo));
    const double g0 = G(lo);
    const double g1 = (G(lo + d) - G(lo - d)) / (2.0 * d);
    const double g2 = (G(lo + d) - 2.0 * g0 + G(lo - d)) / (d * d);
    const cdouble i_w{0.0, 1.0 / w};
    return std::polar(1.0, w * lo) * (i_w * g0 + i_w * i_w * g1 + i_w * i_w * i_w * g2);
}

// int sinc(x) sinc(x - j) dx over the real line.
double sinc_overlap(int j)
{
    const double X = 256.0;
    double body = 0.0;
    const QuadRule q = composite_gl(-X, X, static_cast<std::size_t>(2 * X), gl_order);
    for (std::size_t i = 0; i < q.size(); ++i)
        body += q.weights[i] * sinc(q.nodes[i]) * sinc(q.nodes[i] - j);
    // For x > X: sinc(x) sinc(x - j) = (-1)^j (1 - cos 2pi x) / (2 pi^2 x (x - j)).
    auto tail = [&](int jj) {
        const double sgn = (jj % 2 == 0) ? 1.0 : -1.0;
        const double smooth = jj == 0 ? 1.0 / X : std::log(X / (X - jj)) / jj;
        auto G = [jj](double x) { return 1.0 / (x * (x - jj)); };
        const double osc = oscillatory_tail(two_pi, X, G).real();
        return sgn * (smooth - osc) / (2.0 * pi * pi);
    };
    return body + tail(j) + tail(-j);
}

// int_0^inf b0^{-1/2} sinc(t/b0 - x) (t L0)^{-1/2} sinc(ln t / L0 - sigma) dt
double sinc_gamma_overlap(double x, double sigma, double L0, double b0)
{
    auto f = [&](double t) { return sinc(t / b0 - x) / std::sqrt(b0); };
    auto g = [&](double t) { return sinc(std::log(t) / L0 - sigma) / std::sqrt(t * L0); };
    const double ta = 0.5 * b0;
    double acc = 0.0;
    // small t in log variable
    {
        const double v0 = -80.0, v1 = std::log(ta);
        const QuadRule q = composite_gl(v0, v1, static_cast<std::size_t>(std::ceil((v1 - v0) / (0.5 * L0))), 24);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double t = std::exp(q.nodes[i]);
            acc += q.weights[i] * t * f(t) * g(t);
        }
    }
    // phase of the sinc numerator is pi (k + 1/2) at X
    const double k = std::ceil(std::max(x, 0.0) + 200.0);
    const double X = b0 * (k + 0.5 + x);
    {
        const QuadRule q = composite_gl(ta, X, static_cast<std::size_t>(std::ceil((X - ta) / (0.5 * b0))), 24);
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += q.weights[i] * f(q.nodes[i]) * g(q.nodes[i]);
    }
    auto G = [&](double t) { return g(t) / (pi * (t / b0 - x) * std::sqrt(b0)); };
    const cdouble tail = std::polar(1.0, -pi * x) * oscillatory_tail(pi / b0, X, G);
    return acc + tail.imag();
}

// Gaussian pulses with carriers kept away from the band edge `edge` by 30%.
SampledSignal pulse_signal(const Axis1D& g, SignalAxis axis, double centre_span, double sd, double edge,
                           std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SampledSignal x = make_signal(g, axis);
    const double mid = g.at(g.count / 2);
    for (int p = 0; p < 4; ++p) {
        const double c = mid + centre_span * (2.0 * u(rng) - 1.0);
        const double s = sd * (1.0 + 0.5 * u(rng));
        const bool in_band = p % 2 == 0;
        double f = in_band ? 0.7 * edge * u(rng) : edge * (1.3 + 1.1 * u(rng));
        if (u(rng) < 0.5)
            f = -f;
        const cdouble amp{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
        for (std::size_t i = 0; i < g.count; ++i) {
            const double z = (g.at(i) - c) / s;
            x.samples[i] += amp * std::exp(-0.5 * z * z) * cis(f * g.at(i));
        }
    }
    return x;
}

double norm(const SampledSignal& x)
{
    return std::sqrt(x.energy());
}

SampledSignal diff(const SampledSignal& a, const SampledSignal& b)
{
    SampledSignal d = a;
    for (std::size_t i = 0; i < d.size(); ++i)
        d.samples[i] -= b.samples[i];
    return d;
}

// Highest oscillation rate (cycles per second) of a Q-pair orbit on [T1, T2].
double orbit_rate(const OperatorPair& q, double T1, int R)
{
    switch (q.family) {
    case PairFamily::lowpass:
        return q.p1;
    case PairFamily::mellin:
        return 1.0 / (2.0 * std::log(q.p1) * std::max(T1, 1e-3));
    case PairFamily::window:
        return q.U.param * R;
    case PairFamily::custom:
        break;
    }
    return 0.0;
}

Grams grams_window(const std::vector<OnePath>& paths, const OperatorPair& P, const OperatorPair& Q, int R)
{
    const double T1 = P.p1, T2 = P.p2;
    double rate = orbit_rate(Q, T1, R) + P.U.param * R;
    double min_a = 1.0;
    for (const auto& p : paths) {
        if (p.kind == PathKind::delay_doppler || p.kind == PathKind::freq_scale)
            rate += std::abs(p.p1);
        if (p.kind == PathKind::delay_dilation)
            min_a = std::min(min_a, p.p1);
        if (p.kind == PathKind::freq_scale)
            min_a = std::min(min_a, p.p2);
    }
    rate /= min_a;
    const auto panels = static_cast<std::size_t>(64 + 8 * R + ceil_int(8.0 * (T2 - T1) * rate));
    const QuadRule q = composite_gl(T1, T2, panels, gl_order);
    const auto N = static_cast<Eigen::Index>(q.size());
    const int S = 2 * R + 1;

    Eigen::MatrixXcd E(S, N), F(S, N), HF(S, N);
    for (int l = -R; l <= R; ++l) {
        const Waveform e = apply(op_power(P.U, l), P.e0_fn);
        for (Eigen::Index i = 0; i < N; ++i)
            E(l + R, i) = std::conj(e.value(q.nodes[static_cast<std::size_t>(i)])) * q.weights[static_cast<std::size_t>(i)];
    }
    for (int k = -R; k <= R; ++k) {
        const Waveform v = apply(op_power(Q.U, k), Q.e0_fn);
        const Waveform hv = apply_paths(paths, v);
        for (Eigen::Index i = 0; i < N; ++i) {
            const double t = q.nodes[static_cast<std::size_t>(i)];
            F(k + R, i) = v.value(t);
            HF(k + R, i) = hv.value(t);
        }
    }
    const Eigen::MatrixXcd a = F * E.transpose();
    const Eigen::MatrixXcd h = HF * E.transpose();
    Grams g{make_gram(R), make_gram(R), "window quadrature"};
    for (int k = -R; k <= R; ++k)
        for (int l = -R; l <= R; ++l) {
            g.a.at(k, l) = a(k + R, l + R);
            g.h.at(k, l) = h(k + R, l + R);
        }
    return g;
}

bool scale_paths(const std::vector<OnePath>& paths)
{
    for (const auto& p : paths)
        if (!(p.kind == PathKind::delay_dilation || (p.kind == PathKind::delay_doppler && p.p1 == 0.0)))
            return false;
    return true;
}

Grams grams_mellin_lowpass(const std::vector<OnePath>& paths, const OperatorPair& P, const OperatorPair& Q, int R)
{
    const double L0 = std::log(P.p1), b0 = 1.0 / Q.p1;
    Grams g{make_gram(R), make_gram(R), "Mellin-sinc quadrature"};
    for (int k = -R; k <= R; ++k)
        for (int l = -R; l <= R; ++l)
            g.a.at(k, l) = sinc_gamma_overlap(k, l, L0, b0);
    // D_a T_{b/a} path: <T_{b/a + u b0} f0, D_{a0^s / a} gamma0>
    for (const auto& p : paths) {
        const double a = p.kind == PathKind::delay_dilation ? p.p1 : 1.0;
        const double b = p.p2;
        const double dx = b / (a * b0), ds = std::log(a) / L0;
        for (int u = -R; u <= R; ++u)
            for (int s = -R; s <= R; ++s) {
                const double v = sinc_gamma_overlap(u + dx, s - ds, L0, b0);
                g.h.at(u, s) += p.gain * v;
            }
    }
    return g;
}

Grams grams_sampled(const Channel& H, const OperatorPair& P, const OperatorPair& Q, int R)
{
    Grams g{make_gram(R), make_gram(R), "sampled inner products"};
    std::vector<SampledSignal> e;
    for (int l = -R; l <= R; ++l)
        e.push_back(elementary_apply(op_power(P.U, l), P.e0));
    const Axis1D og = P.e0.grid();
    for (int k = -R; k <= R; ++k) {
        const SampledSignal v = elementary_apply(op_power(Q.U, k), Q.e0);
        const SampledSignal hv = apply_channel(H, v, og, P.e0.axis);
        for (int l = -R; l <= R; ++l) {
            g.a.at(k, l) = inner_product(v, e[static_cast<std::size_t>(l + R)]);
            g.h.at(k, l) = inner_product(hv, e[static_cast<std::size_t>(l + R)]);
        }
    }
    return g;
}

void dft2(std::vector<cdouble>& x, int M, int sign)
{
    std::vector<cdouble> line(static_cast<std::size_t>(M)), out(static_cast<std::size_t>(M));
    auto idx = [M](int i, int j) { return static_cast<std::size_t>(i) * static_cast<std::size_t>(M) + static_cast<std::size_t>(j); };
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j)
            line[static_cast<std::size_t>(j)] = x[idx(i, j)];
        dft(line.data(), out.data(), line.size(), sign);
        for (int j = 0; j < M; ++j)
            x[idx(i, j)] = out[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < M; ++j) {
        for (int i = 0; i < M; ++i)
            line[static_cast<std::size_t>(i)] = x[idx(i, j)];
        dft(line.data(), out.data(), line.size(), sign);
        for (int i = 0; i < M; ++i)
            x[idx(i, j)] = out[static_cast<std::size_t>(i)];
    }
}

std::vector<cdouble> padded(const GramTable& g, int M)
{
    std::vector<cdouble> x(static_cast<std::size_t>(M) * static_cast<std::size_t>(M));
    for (int k = -g.R; k <= g.R; ++k)
        for (int l = -g.R; l <= g.R; ++l)
            x[static_cast<std::size_t>(k + g.R) * static_cast<std::size_t>(M) + static_cast<std::size_t>(l + g.R)] =
                g.at(k, l);
    return x;
}

struct Interior {
    int u_lo, u_hi, s_lo, s_hi;
    bool empty() const { return u_lo > u_hi || s_lo > s_hi; }
};

// Equations (u, s) whose a indices (n + u, s - m) stay inside the table.
Interior interior(int R, const TapBounds& b)
{
    return {-R - b.n_min, R - b.n_max, -R + b.m_max, R + b.m_min};
}

TapBounds bounds_of(const std::vector<Tap>& taps)
{
    if (taps.empty())
        throw InvalidArgument("tap list is empty");
    TapBounds b{taps[0].m, taps[0].m, taps[0].n, taps[0].n};
    for (const auto& t : taps) {
        b.m_min = std::min(b.m_min, t.m);
        b.m_max = std::max(b.m_max, t.m);
        b.n_min = std::min(b.n_min, t.n);
        b.n_max = std::max(b.n_max, t.n);
    }
    return b;
}

void check_tables(const GramTable& a, const GramTable& h)
{
    if (a.R != h.R || a.R < 1)
        throw InvalidArgument("Gram tables must share a radius R >= 1");
    const auto n = static_cast<std::size_t>(a.side()) * static_cast<std::size_t>(a.side());
    if (a.values.size() != n || h.values.size() != n)
        throw InvalidArgument("Gram table size does not match its radius");
}

} // namespace

// ---------------------------------------------------------------------------

const char* pair_family_name(PairFamily f)
{
    switch (f) {
    case PairFamily::window:
        return "window";
    case PairFamily::lowpass:
        return "lowpass";
    case PairFamily::mellin:
        return "mellin";
    case PairFamily::custom:
        return "custom";
    }
    return "?";
}

void OperatorPair::validate() const
{
    P.validate();
    U.validate();
    e0.validate();
    if (family != PairFamily::custom && !e0_fn)
        throw InvalidArgument("preset pair '" + name + "' has no closed-form generator");
}

OperatorPair window_pair(double T1, double T2)
{
    if (!(T2 > T1))
        throw InvalidArgument("window pair needs T2 > T1");
    const double L = T2 - T1;
    OperatorPair p;
    p.name = "window[" + format_double(T1) + "," + format_double(T2) + ")";
    p.family = PairFamily::window;
    p.P = time_window(T1, T2);
    p.U = modulate_op(1.0 / L);
    p.e0_fn = boxcar_waveform(T1, T2);
    p.e0 = sample(p.e0_fn, make_axis(T1 - L, L / 512.0, 3 * 512), SignalAxis::time);
    p.p1 = T1;
    p.p2 = T2;
    return p;
}

OperatorPair lowpass_pair(double W)
{
    if (!(W > 0.0))
        throw InvalidArgument("lowpass pair needs W > 0");
    OperatorPair p;
    p.name = "lowpass(" + format_double(W) + ")";
    p.family = PairFamily::lowpass;
    p.P = lowpass(W);
    p.U = translate_op(1.0 / W);
    p.e0_fn = sinc_waveform(W);
    p.e0 = sample(p.e0_fn, centred_axis(0.25 / W, 4096), SignalAxis::time);
    p.p1 = W;
    return p;
}

OperatorPair mellin_pair(double a0)
{
    if (!(a0 > 1.0))
        throw InvalidArgument("Mellin pair needs a0 > 1");
    const double L0 = std::log(a0), du = L0 / 16.0;
    const auto half = std::min<std::size_t>(2048, static_cast<std::size_t>(40.0 / du));
    OperatorPair p;
    p.name = "mellin(" + format_double(a0) + ")";
    p.family = PairFamily::mellin;
    p.P = mellin_lowpass(1.0 / L0);
    p.U = dilate_op(a0);
    p.e0_fn = gamma0_waveform(a0);
    p.e0 = sample(p.e0_fn, centred_axis(du, 2 * half), SignalAxis::log_time);
    p.p1 = a0;
    return p;
}

OperatorPair custom_pair(std::string name, const ProjectionSpec& P, const ElementaryOpSpec& U, SampledSignal e0)
{
    OperatorPair p;
    p.name = std::move(name);
    p.P = P;
    p.U = U;
    p.e0 = std::move(e0);
    p.validate();
    return p;
}

double PairedUpReport::max_deviation() const
{
    return std::max({idempotence, unitarity, commutation, orthonormality});
}

PairedUpReport verify_paired_up(const OperatorPair& pair, int R)
{
    pair.validate();
    if (R < 0)
        throw InvalidArgument("verification range must be >= 0");
    PairedUpReport rep;
    rep.pair = pair.name;
    rep.range = R;

    const Axis1D g = pair.e0.grid();
    const double span = g.step * static_cast<double>(g.count);
    std::mt19937_64 rng(verify_seed);
    std::vector<SampledSignal> xs;
    for (int i = 0; i < 3; ++i) {
        switch (pair.family) {
        case PairFamily::lowpass:
            xs.push_back(pulse_signal(g, SignalAxis::time, span / 8.0, 8.0 / pair.p1, 0.5 * pair.p1, rng));
            break;
        case PairFamily::mellin: {
            const double L0 = std::log(pair.p1);
            xs.push_back(pulse_signal(g, SignalAxis::log_time, span / 8.0, 8.0 * L0, 0.5 / L0, rng));
            break;
        }
        case PairFamily::window:
        case PairFamily::custom:
            xs.push_back(pulse_signal(g, pair.e0.axis, span / 4.0, span / 16.0, 0.125 / g.step, rng));
            break;
        }
    }
    for (const auto& x : xs) {
        const double nx = norm(x);
        const SampledSignal px = project(pair.P, x);
        const SampledSignal ux = elementary_apply(pair.U, x);
        rep.idempotence = std::max(rep.idempotence, norm(diff(project(pair.P, px), px)) / nx);
        rep.unitarity = std::max(rep.unitarity, std::abs(norm(ux) - nx) / nx);
        rep.commutation =
            std::max(rep.commutation, norm(diff(project(pair.P, ux), elementary_apply(pair.U, px))) / nx);
    }

    // <U^m e0, U^n e0> depends on n - m only for the presets.
    switch (pair.family) {
    case PairFamily::window: {
        const QuadRule q = composite_gl(pair.p1, pair.p2, static_cast<std::size_t>(16 + 8 * R), gl_order);
        const double Om = pair.U.param;
        for (int j = -2 * R; j <= 2 * R; ++j) {
            cdouble acc = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i)
                acc += q.weights[i] * Om * cis(j * Om * q.nodes[i]);
            rep.orthonormality = std::max(rep.orthonormality, std::abs(acc - (j == 0 ? 1.0 : 0.0)));
        }
        break;
    }
    case PairFamily::lowpass:
    case PairFamily::mellin:
        for (int j = -2 * R; j <= 2 * R; ++j)
            rep.orthonormality = std::max(rep.orthonormality, std::abs(sinc_overlap(j) - (j == 0 ? 1.0 : 0.0)));
        break;
    case PairFamily::custom: {
        std::vector<SampledSignal> orbit;
        for (int m = -R; m <= R; ++m)
            orbit.push_back(elementary_apply(op_power(pair.U, m), pair.e0));
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (std::size_t j = 0; j < orbit.size(); ++j)
                rep.orthonormality = std::max(
                    rep.orthonormality, std::abs(inner_product(orbit[i], orbit[j]) - (i == j ? 1.0 : 0.0)));
        break;
    }
    }
    return rep;
}

// ---------------------------------------------------------------------------

GramTable make_gram(int R)
{
    if (R < 0)
        throw InvalidArgument("Gram radius must be >= 0");
    GramTable g;
    g.R = R;
    g.values.assign(static_cast<std::size_t>(g.side()) * static_cast<std::size_t>(g.side()), cdouble{});
    return g;
}

cdouble GramTable::at(int k, int l) const
{
    if (!contains(k, l))
        throw InvalidArgument("Gram index outside the table");
    return values[static_cast<std::size_t>(k + R) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(l + R)];
}

cdouble& GramTable::at(int k, int l)
{
    if (!contains(k, l))
        throw InvalidArgument("Gram index outside the table");
    return values[static_cast<std::size_t>(k + R) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(l + R)];
}

Grams compute_grams(const Channel& H, const OperatorPair& pairP, const OperatorPair& pairQ, int R)
{
    pairP.validate();
    pairQ.validate();
    if (R < 1)
        throw InvalidArgument("Gram radius must be >= 1");
    if (H.analytic() && pairP.family == PairFamily::window && pairQ.e0_fn)
        return grams_window(H.paths(), pairP, pairQ, R);
    if (H.analytic() && pairP.family == PairFamily::mellin && pairQ.family == PairFamily::lowpass &&
        scale_paths(H.paths()))
        return grams_mellin_lowpass(H.paths(), pairP, pairQ, R);
    return grams_sampled(H, pairP, pairQ, R);
}

// ---------------------------------------------------------------------------

cdouble SolveResult::tap(int m, int n) const
{
    if (m < bounds.m_min || m > bounds.m_max || n < bounds.n_min || n > bounds.n_max)
        return 0.0;
    return taps[static_cast<std::size_t>((m - bounds.m_min) * bounds.n_count() + (n - bounds.n_min))].c;
}

double substitution_residual(const GramTable& a, const GramTable& h, const std::vector<Tap>& taps)
{
    check_tables(a, h);
    const Interior in = interior(a.R, bounds_of(taps));
    if (in.empty())
        throw InvalidArgument("Gram tables are too small for the tap bounds");
    double hmax = 0.0, e = 0.0;
    for (int u = in.u_lo; u <= in.u_hi; ++u)
        for (int s = in.s_lo; s <= in.s_hi; ++s) {
            cdouble acc = 0.0;
            for (const auto& t : taps)
                acc += t.c * a.at(t.n + u, s - t.m);
            hmax = std::max(hmax, std::abs(h.at(u, s)));
            e = std::max(e, std::abs(acc - h.at(u, s)));
        }
    return hmax > 0.0 ? e / hmax : e;
}

SolveResult solve_coefficients(const GramTable& a, const GramTable& h, const SolveOptions& opt)
{
    check_tables(a, h);
    const int R = a.R;
    const int r = std::max(1, R / 4);
    SolveResult res;
    res.bounds = opt.bounds.value_or(TapBounds{-r, r, -r, r});
    res.bounds.validate();
    res.M = opt.M.value_or(4 * R + 1);
    if (res.M < 2 * R + 1)
        throw InvalidArgument("transform grid M must be at least 2R + 1");
    if (!(opt.epsilon >= 0.0))
        throw InvalidArgument("epsilon must be >= 0");
    const int M = res.M;

    std::vector<cdouble> A = padded(a, M), Hz = padded(h, M);
    dft2(A, M, +1);
    dft2(Hz, M, +1);
    res.max_abs_A = 0.0;
    res.min_abs_A = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const double v = std::abs(A[i]);
        res.max_abs_A = std::max(res.max_abs_A, v);
        if (v < res.min_abs_A) {
            res.min_abs_A = v;
            worst = i;
        }
    }
    res.epsilon_A = opt.epsilon * res.max_abs_A;
    if (!(res.min_abs_A >= res.epsilon_A) || res.max_abs_A == 0.0) {
        const double th1 = static_cast<double>(worst / static_cast<std::size_t>(M)) / M;
        const double th2 = static_cast<double>(worst % static_cast<std::size_t>(M)) / M;
        char buf[200];
        std::snprintf(buf, sizeof buf, "|A| = %.3g is below %.3g at (theta1, theta2) = (%.4f, %.4f)", res.min_abs_A,
                      res.epsilon_A, th1, th2);
        throw IllConditionedPair(buf, th1, th2);
    }
    // c~ = Z^{-1}(H / A); both tables start at index -R so c~ starts at 0.
    for (std::size_t i = 0; i < A.size(); ++i)
        Hz[i] /= A[i];
    dft2(Hz, M, -1);
    const double norm = 1.0 / (static_cast<double>(M) * static_cast<double>(M));
    auto ct = [&](int k, int l) {
        const auto kk = static_cast<std::size_t>(((k % M) + M) % M), ll = static_cast<std::size_t>(((l % M) + M) % M);
        return Hz[kk * static_cast<std::size_t>(M) + ll] * norm;
    };
    const TapBounds& b = res.bounds;
    for (int m = b.m_min; m <= b.m_max; ++m)
        for (int n = b.n_min; n <= b.n_max; ++n)
            res.taps.push_back({m, n, ct(-n, m)});

    const Interior in = interior(R, b);
    if (in.empty())
        throw InvalidArgument("Gram tables are too small for the tap bounds; raise R");
    res.recipe_residual = substitution_residual(a, h, res.taps);
    res.residual = res.recipe_residual;
    if (!opt.refine)
        return res;

    const Eigen::Index rows = static_cast<Eigen::Index>(in.u_hi - in.u_lo + 1) * (in.s_hi - in.s_lo + 1);
    const auto cols = static_cast<Eigen::Index>(res.taps.size());
    if (rows < cols)
        throw InvalidArgument("Gram tables give fewer equations than taps; raise R");
    Eigen::MatrixXcd Amat(rows, cols);
    Eigen::VectorXcd rhs(rows);
    Eigen::Index row = 0;
    for (int u = in.u_lo; u <= in.u_hi; ++u)
        for (int s = in.s_lo; s <= in.s_hi; ++s, ++row) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                const Tap& t = res.taps[static_cast<std::size_t>(c)];
                Amat(row, c) = a.at(t.n + u, s - t.m);
            }
            rhs(row) = h.at(u, s);
        }
    const Eigen::VectorXcd c = Amat.colPivHouseholderQr().solve(rhs);
    for (Eigen::Index i = 0; i < cols; ++i)
        res.taps[static_cast<std::size_t>(i)].c = c(i);
    res.residual = substitution_residual(a, h, res.taps);
    return res;
}

// ---------------------------------------------------------------------------

double ExpansionReport::max() const
{
    double m = 0.0;
    for (double r : residuals)
        m = std::max(m, r);
    return m;
}

ExpansionReport verify_expansion(const Channel& H, const OperatorPair& pairP, const OperatorPair& pairQ,
                                 const std::vector<Tap>& taps, const std::vector<SampledSignal>& signals)
{
    pairP.validate();
    pairQ.validate();
    ExpansionReport rep;
    for (const auto& x : signals) {
        const SampledSignal qx = project(pairQ.P, x);
        const SampledSignal ref = project(pairP.P, apply_channel(H, qx));
        SampledSignal sum = make_signal(x.grid(), x.axis);
        std::vector<int> ns;
        for (const auto& t : taps)
            if (std::find(ns.begin(), ns.end(), t.n) == ns.end())
                ns.push_back(t.n);
        for (int n : ns) {
            const SampledSignal vn = elementary_apply(op_power(pairQ.U, n), qx);
            for (const auto& t : taps) {
                if (t.n != n || t.c == cdouble{})
                    continue;
                const SampledSignal z = elementary_apply(op_power(pairP.U, t.m), vn);
                for (std::size_t i = 0; i < sum.size(); ++i)
                    sum.samples[i] += t.c * z.samples[i];
            }
        }
        const SampledSignal approx = project(pairP.P, sum);
        const double nr = norm(ref);
        const double e = norm(diff(approx, ref));
        rep.residuals.push_back(nr > 0.0 ? e / nr : e);
    }
    return rep;
}

std::pair<OperatorPair, OperatorPair> model_pairs(ModelKind kind, const ModelParams& p)
{
    switch (kind) {
    case ModelKind::tf:
        return {window_pair(0.0, p.T), lowpass_pair(p.W)};
    case ModelKind::ts:
        if (!(p.b0 > 0.0))
            throw InvalidArgument("ts pairs need b0 > 0");
        return {mellin_pair(p.a0), lowpass_pair(1.0 / p.b0)};
    case ModelKind::fs:
        return {window_pair(p.T1, p.T2), mellin_pair(p.a0)};
    }
    throw InvalidArgument("unknown model kind");
}

CanonicalModel pairedup_taps(ModelKind kind, const Channel& H, const ModelParams& p, const TapBounds& bounds,
                             std::optional<int> R, Grams* grams, SolveResult* solve)
{
    bounds.validate();
    const int reach = std::max({1, std::abs(bounds.m_min), std::abs(bounds.m_max), std::abs(bounds.n_min),
                                std::abs(bounds.n_max)});
    const int RR = R.value_or(4 * reach);
    const auto pairs = model_pairs(kind, p);
    const Grams g = compute_grams(H, pairs.first, pairs.second, RR);
    SolveOptions opt;
    opt.bounds = bounds;
    const SolveResult s = solve_coefficients(g.a, g.h, opt);

    CanonicalModel m;
    m.kind = kind;
    m.params = p;
    m.bounds = bounds;
    m.taps = s.taps;
    m.provenance = H.provenance;
    char buf[200];
    std::snprintf(buf, sizeof buf, "pairedup: %s x %s, %s, R = %d, M = %d, residual %.3g", pairs.first.name.c_str(),
                  pairs.second.name.c_str(), g.method.c_str(), RR, s.M, s.residual);
    m.provenance.emplace_back(buf);
    if (s.residual > 1e-5) {
        std::snprintf(buf, sizeof buf, "coefficient equations are met only to %.3g relative; taps outside the bounds matter",
                      s.residual);
        m.warnings.emplace_back(buf);
    }
    if (grams)
        *grams = g;
    if (solve)
        *solve = s;
    return m;
}

// ---------------------------------------------------------------------------

void write_gram_csv(std::ostream& os, const GramTable& g)
{
    os << "m,n,re,im\n";
    for (int k = -g.R; k <= g.R; ++k)
        for (int l = -g.R; l <= g.R; ++l) {
            const cdouble v = g.at(k, l);
            os << k << ',' << l << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
}

GramTable read_gram_csv(std::istream& is)
{
    const std::vector<Tap> t = read_taps_csv(is);
    const TapBounds b = bounds_of(t);
    const int R = b.m_max;
    if (b.m_min != -R || b.n_min != -R || b.n_max != R)
        throw InvalidArgument("Gram CSV must cover a square [-R, R]^2");
    GramTable g = make_gram(R);
    if (t.size() != g.values.size())
        throw InvalidArgument("Gram CSV has missing or repeated entries");
    std::vector<bool> seen(g.values.size(), false);
    for (const auto& e : t) {
        const auto i = static_cast<std::size_t>(e.m + R) * static_cast<std::size_t>(g.side()) + static_cast<std::size_t>(e.n + R);
        if (seen[i])
            throw InvalidArgument("Gram CSV repeats an entry");
        seen[i] = true;
        g.values[i] = e.c;
    }
    return g;
}

std::string gram_sidecar(const OperatorPair& pairP, const OperatorPair& pairQ, int R, int M, double epsilon_A)
{
    nlohmann::json j;
    j["pairP"] = pairP.name;
    j["pairQ"] = pairQ.name;
    j["R"] = R;
    j["M"] = M;
    j["epsilon_A"] = epsilon_A;
    j["library_version"] = version();
    return j.dump(2) + "\n";
}

} // namespace tvch
