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

#include "tvch/validate.hpp"

#include "tvch/pairedup.hpp"
#include "tvch/quadrature.hpp"
#include "tvch/sysfuncs.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace tvch {

namespace {

using Fn2 = std::function<cdouble(double, double)>;

cdouble gauss(double t, double c, double s, double f = 0.0)
{
    const double z = (t - c) / s;
    return std::exp(-0.5 * z * z) * cis(f * t);
}

class Suite {
public:
    explicit Suite(ValidationReport& rep) : rep_(rep) {}

    // pass when deviation <= tol
    void run(const std::string& name, double tol, const std::function<double()>& f) { record(name, tol, false, f); }
    // pass when deviation < tol
    void run_strict(const std::string& name, double tol, const std::function<double()>& f)
    {
        record(name, tol, true, f);
    }

private:
    void record(const std::string& name, double tol, bool strict, const std::function<double()>& f)
    {
        CheckResult r;
        r.check = rep_.suite + "." + name;
        r.tolerance = tol;
        try {
            r.max_deviation = f();
            r.pass = std::isfinite(r.max_deviation) && (strict ? r.max_deviation < tol : r.max_deviation <= tol);
        } catch (const std::exception& e) {
            r.max_deviation = std::numeric_limits<double>::infinity();
            r.pass = false;
            r.note = e.what();
        }
        rep_.checks.push_back(std::move(r));
    }

    ValidationReport& rep_;
};

double max_grid_err(const Fn2& a, const Fn2& b, const Axis1D& x1, const Axis1D& x2)
{
    double m = 0.0;
    for (std::size_t i = 0; i < x1.count; ++i)
        for (std::size_t j = 0; j < x2.count; ++j)
            m = std::max(m, std::abs(a(x1.at(i), x2.at(j)) - b(x1.at(i), x2.at(j))));
    return m;
}

KernelGrid2D sample_kernel(Rep r, const Axis1D& a1, const Axis1D& a2, const Fn2& f)
{
    KernelGrid2D k = make_kernel(r, a1, a2);
    for (std::size_t i = 0; i < a1.count; ++i)
        for (std::size_t j = 0; j < a2.count; ++j)
            k.at(i, j) = f(a1.at(i), a2.at(j));
    return k;
}

double max_tap_diff(const std::vector<Tap>& a, const std::vector<Tap>& b)
{
    if (a.size() != b.size())
        throw InvalidArgument("tap sets differ in size");
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i].c - b[i].c));
    return e;
}

// max(|c(m0, n0) - 1|, max |c| elsewhere)
double single_tap_dev(const CanonicalModel& m, int m0, int n0)
{
    double e = 0.0;
    for (const auto& t : m.taps)
        e = std::max(e, std::abs(t.c - (t.m == m0 && t.n == n0 ? 1.0 : 0.0)));
    return e;
}

SampledSignal random_signal(const Axis1D& g, unsigned seed, SignalAxis axis = SignalAxis::time)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    SampledSignal x = make_signal(g, axis);
    for (auto& z : x.samples)
        z = {n(rng), n(rng)};
    return x;
}

// ---------------------------------------------------------------------------

void signals_suite(Suite& s)
{
    s.run("fourier_round_trip", 1e-12, [] {
        auto x = random_signal(make_axis(-2.3, 0.01, 500), 9);
        return relative_error(inverse_fourier(fourier(x)), x);
    });
    s.run("mellin_isometry_and_inverse", 1e-5, [] {
        const auto g = make_axis(0.01, 0.01, 2000);
        auto x = sample_function(g, [](double t) { return gauss(t, 6.0, 1.5, 0.7); });
        auto X = mellin(x);
        double e = 0.0;
        for (auto& v : X.values)
            e += std::norm(v);
        e *= X.omega.step;
        return std::max(std::abs(e - x.energy()) / x.energy(),
                        relative_error(inverse_mellin(X, g, SignalAxis::time), x));
    });
    s.run("operator_energy", 1e-6, [] {
        auto x = sample_function(make_axis(-20.0, 0.05, 801), [](double t) { return gauss(t, 0.0, 2.0, 1.3); });
        double e = 0.0;
        for (auto op : {translate_op(1.37), modulate_op(2.2), dilate_op(1.5), dilate_op(0.7)})
            e = std::max(e, std::abs(elementary_apply(op, x).energy() - x.energy()) / x.energy());
        return e;
    });
    s.run("projection_idempotence", 1e-9, [] {
        auto x = random_signal(make_axis(0.05, 0.01, 1024), 4);
        auto lx = random_signal(make_axis(-4.0, 0.01, 800), 6, SignalAxis::log_time);
        double e = 0.0;
        for (auto p : {time_window(1.0, 5.0), lowpass(7.0)}) {
            auto px = project(p, x);
            e = std::max(e, relative_error(project(p, px), px));
        }
        auto plx = project(mellin_lowpass(0.9), lx);
        return std::max(e, relative_error(project(mellin_lowpass(0.9), plx), plx));
    });
    s.run("window_modulation_commute", 1e-12, [] {
        const double T = 2.0;
        auto x = random_signal(make_axis(-1.0, 0.005, 1000), 13);
        auto a = project(time_window(0.0, T), elementary_apply(modulate_op(1.0 / T), x));
        auto b = elementary_apply(modulate_op(1.0 / T), project(time_window(0.0, T), x));
        return relative_error(a, b);
    });
}

void channels_suite(Suite& s)
{
    s.run("delay_doppler_path", 1e-9, [] {
        const double th = 0.7, ta = 0.35;
        const cdouble g{0.5, -0.2};
        auto c = make_one_path(OnePathKind::delay_doppler, th, ta, g);
        auto x = sample_function(make_axis(-6.0, 0.01, 1201), [](double t) { return gauss(t, 0.0, 0.6, 1.3); });
        auto ref = sample_function(x.grid(), [&](double t) { return g * gauss(t - ta, 0.0, 0.6, 1.3) * cis(th * t); });
        return relative_error(apply_channel(c, x), ref);
    });
    s.run("delay_dilation_path", 1e-9, [] {
        const double a0 = 1.25, b0 = -0.4;
        auto c = make_one_path(OnePathKind::delay_dilation, a0, b0);
        auto x = sample_function(make_axis(-6.0, 0.01, 1201), [](double t) { return gauss(t, 0.2, 0.5, 0.8); });
        auto ref = sample_function(x.grid(), [&](double t) { return gauss((t - b0) / a0, 0.2, 0.5, 0.8) / std::sqrt(a0); });
        return relative_error(apply_channel(c, x), ref);
    });
    s.run("identity", 1e-12, [] {
        auto x = sample_function(make_axis(-3.0, 0.02, 301), [](double t) { return gauss(t, 0.0, 0.4); });
        return relative_error(apply_channel(identity_channel(), x), x);
    });
    s.run("gridded_h_delay_integral", 1e-6, [] {
        auto kfn = [](double t, double tau) { return gauss(t, 0.5, 1.0, 0.3) * gauss(tau, 0.4, 0.15); };
        auto xfn = [](double t) { return gauss(t, 0.0, 0.8, 1.1); };
        auto k = sample_kernel(Rep::h, make_axis(-4.0, 0.05, 161), make_axis(-0.4, 0.01, 161), kfn);
        auto x = sample_function(make_axis(-8.0, 0.01, 1601), xfn);
        auto out = make_axis(-3.0, 0.05, 121);
        const QuadRule q = composite_gl(-0.4, 1.2, 64, 16);
        auto ref = sample_function(out, [&](double t) {
            cdouble acc = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i)
                acc += q.weights[i] * kfn(t, q.nodes[i]) * xfn(t - q.nodes[i]);
            return acc;
        });
        return relative_error(apply_time_varying(make_gridded(k), x, out), ref);
    });
}

void sysfuncs_suite(Suite& s)
{
    const Axis1D g1 = linspace_axis(-1.7, 2.3, 64), g2 = linspace_axis(0.15, 3.1, 64);
    s.run("closed_forms_delay_doppler", 1e-9, [&] {
        const cdouble g{0.8, -0.3};
        const double th = 0.45, ta = 0.7;
        auto c = make_analytic({OnePath{PathKind::delay_doppler, g, th, ta}}, Rep::S);
        auto eval = [&](Rep r) { return [&c, r](double x, double y) { return closed_form_value(c, r, x, y); }; };
        double e = max_grid_err(eval(Rep::T), [&](double t, double nu) { return g * cis(th * t - ta * nu); }, g1, g2);
        e = std::max(e, max_grid_err(eval(Rep::k2),
                                     [&](double t, double nu) { return g * cis(t * (nu + th) - ta * nu); }, g1, g2));
        e = std::max(e, max_grid_err(
                            eval(Rep::L),
                            [&](double a, double b) {
                                return g * std::abs(th) / (std::sqrt(a) * (1 - a) * (1 - a)) *
                                       cis(th * (b - a * ta) / (1 - a));
                            },
                            linspace_axis(0.2, 0.9, 64), g2));
        return e;
    });
    s.run("closed_forms_delay_dilation", 1e-9, [&] {
        const cdouble g{1.1, 0.2};
        const double a0 = 1.3, b0 = -0.25, sa = std::sqrt(a0);
        auto c = make_one_path(OnePathKind::delay_dilation, a0, b0, g);
        auto eval = [&](Rep r) { return [&c, r](double x, double y) { return closed_form_value(c, r, x, y); }; };
        double e = max_grid_err(
            eval(Rep::S),
            [&](double th, double tau) { return g * sa / std::abs(1 - a0) * cis(-th * (b0 - a0 * tau) / (1 - a0)); },
            g1, g2);
        e = std::max(e, max_grid_err(eval(Rep::k2),
                                     [&](double t, double nu) { return g / sa * cis(nu * (t - b0) / a0); }, g1, g2));
        return e;
    });
    s.run("narrowband_round_trip", 1e-6, [] {
        auto hf = [](double t, double tau) {
            return std::exp(-pi * (t - 0.3) * (t - 0.3) / 0.64) * cis(0.6 * t) *
                   std::exp(-pi * (tau - 0.4) * (tau - 0.4) / 0.0625);
        };
        const Axis1D ax = symmetric_axis(0.05, 96);
        auto h = make_gridded(sample_kernel(Rep::h, ax, ax, hf));
        auto inside = [&](double x) { return x >= ax.start - 1e-9 && x <= ax.back() + 1e-9; };
        double m = 0.0;
        for (Rep r : {Rep::S, Rep::k1, Rep::k3, Rep::M}) {
            auto back = convert_narrowband(convert_narrowband(h, r), Rep::h);
            const auto& bg = back.grid();
            for (std::size_t i = 0; i < bg.axis1.count; ++i)
                for (std::size_t j = 0; j < bg.axis2.count; ++j) {
                    const double t = bg.axis1.at(i), tau = bg.axis2.at(j);
                    if (inside(t) && inside(tau))
                        m = std::max(m, std::abs(bg.at(i, j) - hf(t, tau)));
                }
        }
        return m;
    });
    s.run("h_rho_round_trip", 1e-3, [] {
        auto hf = [](double t, double tau) {
            return std::exp(-0.5 * std::pow((t - 3.0) / 0.5, 2)) * std::exp(-0.5 * std::pow((tau - 0.3) / 0.1, 2)) *
                   cis(0.4 * t);
        };
        auto h = make_gridded(sample_kernel(Rep::h, make_axis(0.5, 0.02, 251), make_axis(-0.3, 0.01, 121), hf));
        auto rho = h_to_rho(h, make_axis(-3.0, 0.02, 301), make_axis(0.7, 0.002, 401));
        auto back = rho_to_h(rho, make_axis(2.0, 0.05, 41), make_axis(-0.1, 0.02, 21));
        std::vector<cdouble> ref;
        for (std::size_t i = 0; i < back.grid().axis1.count; ++i)
            for (std::size_t j = 0; j < back.grid().axis2.count; ++j)
                ref.push_back(hf(back.grid().axis1.at(i), back.grid().axis2.at(j)));
        return relative_l2(back.grid().values, ref);
    });
    s.run("S_from_L_equivalence", 1e-3, [] {
        auto L = make_gridded(sample_kernel(Rep::L, make_axis(1.0, 0.002, 51), make_axis(-0.1, 0.005, 121),
                                            [](double a, double b) -> cdouble {
                                                return std::exp(-0.5 * std::pow((a - 1.05) / 0.008, 2)) *
                                                       std::exp(-0.5 * std::pow((b - 0.2) / 0.04, 2));
                                            }));
        const Axis1D t = symmetric_axis(0.02, 1601);
        const Axis1D th = symmetric_axis(1.0 / (1601 * 0.02), 401);
        auto S = wideband_to_narrowband(L, Rep::S, th, make_axis(-0.4, 0.01, 121), t);
        auto x = sample_function(make_axis(-6.0, 0.02, 601), [](double u) { return gauss(u, 0.0, 0.5, 3.0); });
        const Axis1D out = make_axis(-3.0, 0.02, 301);
        return relative_error(apply_narrowband(S, x, out), apply_wideband(L, x, out));
    });
    s.run("L_from_S_equivalence", 2e-2, [] {
        auto S = make_gridded(sample_kernel(Rep::S, make_axis(0.0, 0.01, 61), make_axis(-0.1, 0.01, 61),
                                            [](double th, double tau) -> cdouble {
                                                return std::exp(-0.5 * std::pow((th - 0.3) / 0.05, 2)) *
                                                       std::exp(-0.5 * std::pow((tau - 0.2) / 0.04, 2));
                                            }));
        LFromSOptions o;
        o.a = linspace_axis(0.7, 1.05, 176);
        o.b = make_axis(-3.0, 0.004, 1501);
        auto L = narrowband_to_wideband(S, o);
        auto x = sample_function(make_axis(-12.0, 0.02, 1201), [](double u) { return gauss(u, 0.0, 1.0, 3.0); });
        const Axis1D out = make_axis(-4.0, 0.02, 401);
        return relative_error(apply_wideband(L, x, out), apply_narrowband(S, x, out));
    });
}

void canonical_suite(Suite& s)
{
    const double T = 2.0, W = 4.0;
    s.run("tf_lattice_taps", 1e-6, [&] {
        auto m = tf_taps(make_one_path(OnePathKind::delay_doppler, 1.5, 0.5), T, W, 1.0, 2.0);
        return single_tap_dev(m, 3, 2);
    });
    s.run("tf_offlattice_taps", 1e-6, [&] {
        const double th = 0.37, ta = 0.61;
        auto m = tf_taps(make_one_path(OnePathKind::delay_doppler, th, ta), T, W, 1.0, 1.0);
        const QuadRule q = composite_gl(0.0, T, 32, 16);
        double e = 0.0;
        for (const auto& t : m.taps) {
            cdouble f = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i)
                f += q.weights[i] * cis((th - t.m / T) * q.nodes[i]);
            e = std::max(e, std::abs(t.c - f / T * sinc(W * ta - t.n)));
        }
        return e;
    });
    s.run("ts_offlattice_sinc", 1e-6, [] {
        const double a0 = 2.0, b0 = 0.5, a = std::sqrt(a0);
        auto m = ts_taps(make_one_path(OnePathKind::delay_dilation, a, 0.5 * b0 * a), a0, b0);
        double e = 0.0;
        for (const auto& t : m.taps)
            e = std::max(e, std::abs(t.c - sinc(t.m - 0.5) * sinc(t.n - 0.5)));
        return e;
    });

    const Axis1D g = make_axis(-8.0, 0.01, 2001);
    auto xfn = [](double t) { return gauss(t, 1.0, 0.5, 0.7); };
    const SampledSignal x = sample_function(g, xfn);
    s.run("tf_lattice_apply", 1e-6, [&] {
        auto m = tf_taps(make_one_path(OnePathKind::delay_doppler, 1.5, 0.5), T, W, 1.0, 2.0);
        const Axis1D out = make_axis(0.0, 0.01, 200);
        auto ref = sample_function(out, [&](double t) { return xfn(t - 0.5) * cis(1.5 * t); });
        return relative_error(canonical_apply(m, x, out), ref);
    });
    s.run("ts_lattice_apply", 1e-6, [&] {
        const double a0 = 1.2, b0 = 0.3, a = a0 * a0, b = -2 * b0 * a;
        auto m = ts_taps(make_one_path(OnePathKind::delay_dilation, a, b), a0, b0);
        auto ref = sample_function(g, [&](double t) { return xfn((t - b) / a) / std::sqrt(a); });
        return std::max(single_tap_dev(m, 2, -2), relative_error(canonical_apply(m, x), ref));
    });
    s.run("fs_lattice_apply", 1e-6, [&] {
        const double a0 = 1.25, T1 = 1.0, T2 = 5.0, Om = 0.25, a = 1.0 / a0;
        auto m = fs_taps(make_one_path(OnePathKind::freq_scale, -3 * Om, a), a0, T1, T2);
        const Axis1D out = make_axis(T1, 0.01, 400);
        auto ref = sample_function(out, [&](double t) { return cis(-3 * Om * t) * xfn(t / a) / std::sqrt(a); });
        return std::max(single_tap_dev(m, -3, -1), relative_error(canonical_apply(m, x, out), ref));
    });
    // ratio e(2K, 2N) / e(K, N), worst of three random paths
    s.run_strict("tf_truncation_monotone", 1.0, [&] {
        const double Tm = 1.0, Bd = 1.0;
        Waveform xw = scale(sinc_waveform(W), 0.0);
        const double w[] = {0.8, -0.5, 0.3, 0.6};
        const double sh[] = {0.1, 0.45, 0.9, 1.3};
        for (int k = 0; k < 4; ++k)
            xw = add(xw, scale(apply(translate_op(sh[k]), sinc_waveform(W)), w[k]));
        auto xs = sample(xw, make_axis(-40.0, 1.0 / (8 * W), static_cast<std::size_t>(80 * 8 * W) + 1));
        const Axis1D out = make_axis(0.0, 1.0 / 64, 128);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const double th = Bd * (2.0 * u(rng) - 1.0), ta = Tm * u(rng);
            auto S = make_one_path(OnePathKind::delay_doppler, th, ta);
            auto ref = sample_function(out, [&](double t) { return xw.value(t - ta) * cis(th * t); });
            auto m1 = tf_taps(S, T, W, Tm, Bd);
            auto m2 = tf_taps(S, T, W, Tm, Bd, m1.bounds.doubled());
            worst = std::max(worst, relative_error(canonical_apply(m2, xs, out), ref) /
                                        relative_error(canonical_apply(m1, xs, out), ref));
        }
        return worst;
    });
}

void pairedup_suite(Suite& s)
{
    s.run("axioms_window", 1e-9, [] { return verify_paired_up(window_pair(0.0, 2.0)).max_deviation(); });
    s.run("axioms_lowpass", 1e-5, [] { return verify_paired_up(lowpass_pair(4.0)).max_deviation(); });
    s.run("axioms_mellin", 1e-4, [] { return verify_paired_up(mellin_pair(1.25)).max_deviation(); });

    ModelParams p;
    p.T = 2.0;
    p.W = 4.0;
    p.Tm = 1.0;
    p.Bd = 1.0;
    const Channel H = make_analytic({{PathKind::delay_doppler, {0.7, 0.1}, 0.5, 0.25},
                                     {PathKind::delay_doppler, {-0.3, 0.4}, -1.0, 0.75},
                                     {PathKind::delay_doppler, {0.2, 0.0}, 0.0, 0.0}},
                                    Rep::S);
    s.run("tf_matches_direct", 1e-4, [&] {
        auto ref = tf_taps(H, p.T, p.W, p.Tm, p.Bd);
        return max_tap_diff(pairedup_taps(ModelKind::tf, H, p, ref.bounds).taps, ref.taps);
    });
    s.run("tf_substitution_residual", 1e-5, [&] {
        auto pairs = model_pairs(ModelKind::tf, p);
        auto g = compute_grams(H, pairs.first, pairs.second, 16);
        auto sol = solve_coefficients(g.a, g.h);
        return substitution_residual(g.a, g.h, sol.taps);
    });
    s.run("ts_matches_direct", 1e-4, [] {
        ModelParams q;
        q.a0 = 2.0;
        q.b0 = 0.5;
        auto L = make_one_path(OnePathKind::delay_dilation, 2.0, 1.0 * 0.5 * 2.0, {0.6, -0.2});
        const TapBounds b{-2, 2, -2, 2};
        return max_tap_diff(pairedup_taps(ModelKind::ts, L, q, b).taps, ts_taps(L, q.a0, q.b0, b).taps);
    });
    s.run("scale_invariance", 1e-12, [&] {
        const cdouble gamma{-0.7, 1.9};
        auto pairs = model_pairs(ModelKind::tf, p);
        auto P = make_one_path(OnePathKind::delay_doppler, 0.37, 0.61);
        auto g1 = compute_grams(P, pairs.first, pairs.second, 8);
        auto g2 = compute_grams(scaled(P, gamma), pairs.first, pairs.second, 8);
        auto s1 = solve_coefficients(g1.a, g1.h), s2 = solve_coefficients(g2.a, g2.h);
        double e = 0.0, mx = 0.0;
        for (std::size_t i = 0; i < s1.taps.size(); ++i) {
            e = std::max(e, std::abs(s2.taps[i].c - gamma * s1.taps[i].c));
            mx = std::max(mx, std::abs(s1.taps[i].c));
        }
        return e / mx;
    });
}

} // namespace

bool ValidationReport::pass() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

std::string ValidationReport::to_json() const
{
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["pass"] = pass();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["check"] = c.check;
        if (std::isfinite(c.max_deviation))
            e["max_deviation"] = c.max_deviation;
        else
            e["max_deviation"] = nullptr;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        if (!c.note.empty())
            e["note"] = c.note;
        j["checks"].push_back(std::move(e));
    }
    return j.dump(2);
}

const std::vector<std::string>& validation_suites()
{
    static const std::vector<std::string> names = {"signals", "channels", "sysfuncs", "canonical", "pairedup", "all"};
    return names;
}

ValidationReport run_validation(const std::string& suite)
{
    using Runner = void (*)(Suite&);
    const std::vector<std::pair<std::string, Runner>> all = {{"signals", signals_suite},
                                                             {"channels", channels_suite},
                                                             {"sysfuncs", sysfuncs_suite},
                                                             {"canonical", canonical_suite},
                                                             {"pairedup", pairedup_suite}};
    ValidationReport out;
    out.suite = suite;
    bool found = false;
    for (const auto& [name, fn] : all) {
        if (suite != "all" && suite != name)
            continue;
        found = true;
        ValidationReport part;
        part.suite = name;
        Suite s(part);
        fn(s);
        out.checks.insert(out.checks.end(), part.checks.begin(), part.checks.end());
    }
    if (!found)
        throw InvalidArgument("unknown validation suite '" + suite +
                              "'; expected signals, channels, sysfuncs, canonical, pairedup or all");
    return out;
}

} // namespace tvch
