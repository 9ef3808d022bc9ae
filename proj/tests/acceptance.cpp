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

// Acceptance criteria, one line each. Exit code is the number of failures.

#include "tvch/pairedup.hpp"
#include "tvch/quadrature.hpp"
#include "tvch/sysfuncs.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>

using namespace tvch;
namespace fs = std::filesystem;

namespace {

using Fn2 = std::function<cdouble(double, double)>;

struct Outcome {
    bool pass = false;
    std::string detail;
};

cdouble gauss(double t, double c, double s, double f = 0.0)
{
    const double z = (t - c) / s;
    return std::exp(-0.5 * z * z) * cis(f * t);
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Outcome within(const std::string& what, double err, double tol)
{
    return {err <= tol, fmt((what + " %.3g (tol %.3g)").c_str(), err, tol)};
}

Outcome both(const Outcome& a, const Outcome& b)
{
    return {a.pass && b.pass, a.detail + "; " + b.detail};
}

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

double single_tap_dev(const CanonicalModel& m, int m0, int n0)
{
    double e = 0.0;
    for (const auto& t : m.taps)
        e = std::max(e, std::abs(t.c - (t.m == m0 && t.n == n0 ? 1.0 : 0.0)));
    return e;
}

double max_tap_diff(const std::vector<Tap>& a, const std::vector<Tap>& b)
{
    if (a.size() != b.size())
        return INFINITY;
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        e = std::max(e, std::abs(a[i].c - b[i].c));
    return e;
}

// ---------------------------------------------------------------------------

Outcome one_path_closed_forms()
{
    const Axis1D g1 = linspace_axis(-1.7, 2.3, 64), g2 = linspace_axis(0.15, 3.1, 64);
    double worst = 0.0;
    auto view = [](const Channel& c, Rep r) { return [&c, r](double x, double y) { return closed_form_value(c, r, x, y); }; };

    {
        const cdouble g{0.8, -0.3};
        const double th = 0.45, ta = 0.7;
        const Channel c = make_analytic({OnePath{PathKind::delay_doppler, g, th, ta}}, Rep::S);
        worst = std::max({worst,
                          max_grid_err(view(c, Rep::T), [&](double t, double nu) { return g * cis(th * t - ta * nu); },
                                       g1, g2),
                          max_grid_err(view(c, Rep::k1),
                                       [&](double x, double s) { return g * cis(-(s + ta) * (x - th)); }, g1, g2),
                          max_grid_err(view(c, Rep::k2),
                                       [&](double t, double nu) { return g * cis(t * (nu + th) - ta * nu); }, g1, g2),
                          max_grid_err(view(c, Rep::M),
                                       [&](double x, double t) { return g * cis(-ta * (x - th) + t * th); }, g1, g2),
                          max_grid_err(view(c, Rep::L),
                                       [&](double a, double b) {
                                           return g * std::abs(th) / (std::sqrt(a) * (1 - a) * (1 - a)) *
                                                  cis(th * (b - a * ta) / (1 - a));
                                       },
                                       linspace_axis(0.2, 0.9, 64), g2)});
        // distribution-valued entries: h = delta(tau - ta) e^{j2pi th t}, k3 = delta(theta - nu - th) e^{-j2pi ta nu}
        const ClosedForm h = closed_form(c.paths()[0], Rep::h);
        const ClosedForm k3 = closed_form(c.paths()[0], Rep::k3);
        if (h.support != ClosedForm::Support::line || k3.support != ClosedForm::Support::line)
            return {false, "delay-Doppler h or k3 is not a line mass"};
        worst = std::max({worst, std::abs(h.c1) + std::abs(h.c2 - 1.0) + std::abs(h.c0 - ta),
                          max_grid_err([&](double t, double) { return h.weight(t, ta); },
                                       [&](double t, double) { return g * cis(th * t); }, g1, g2)});
        const double s = k3.c1;
        if (s == 0.0)
            return {false, "k3 line has no theta component"};
        worst = std::max({worst, std::abs(k3.c2 / s + 1.0) + std::abs(k3.c0 / s - th),
                          max_grid_err([&](double, double nu) { return k3.weight(nu + th, nu) / std::abs(s); },
                                       [&](double, double nu) { return g * cis(-ta * nu); }, g1, g2)});
    }
    {
        const cdouble g{1.1, 0.2};
        const double a0 = 1.3, b0 = -0.25, sa = std::sqrt(a0);
        const Channel c = make_one_path(OnePathKind::delay_dilation, a0, b0, g);
        worst = std::max(
            {worst,
             max_grid_err(view(c, Rep::S),
                          [&](double th, double tau) { return g * sa / std::abs(1 - a0) * cis(-th * (b0 - a0 * tau) / (1 - a0)); },
                          g1, g2),
             max_grid_err(view(c, Rep::k1), [&](double th, double s) { return g * sa * cis(-th * (a0 * s + b0)); }, g1,
                          g2),
             max_grid_err(view(c, Rep::k2), [&](double t, double nu) { return g / sa * cis(nu * (t - b0) / a0); }, g1,
                          g2),
             max_grid_err(view(c, Rep::T),
                          [&](double t, double nu) { return g / sa * cis(nu * ((t - b0) / a0 - t)); }, g1, g2),
             max_grid_err(view(c, Rep::V),
                          [&](double tau, double nu) { return g * sa / std::abs(1 - a0) * cis(nu * (tau - b0) / (1 - a0)); },
                          g1, g2),
             max_grid_err(view(c, Rep::M), [&](double th, double t) { return g * sa * cis(-th * b0 + (1 - a0) * th * t); },
                          g1, g2)});
        // L is a point mass at (a0, b0); h lives on (1 - a0) t + a0 tau = b0 with weight g sqrt(a0)
        const ClosedForm L = closed_form(c.paths()[0], Rep::L);
        const ClosedForm h = closed_form(c.paths()[0], Rep::h);
        if (L.support != ClosedForm::Support::point || h.support != ClosedForm::Support::line)
            return {false, "delay-dilation L or h has the wrong support type"};
        const double s = h.c2 / a0;
        worst = std::max({worst, std::abs(L.c1 - a0) + std::abs(L.c2 - b0) + std::abs(L.weight(a0, b0) - g),
                          std::abs(h.c1 / s - (1 - a0)) + std::abs(h.c0 / s - b0),
                          max_grid_err([&](double t, double) { return h.weight(t, (b0 - (1 - a0) * t) / a0) / std::abs(s); },
                                       [&](double, double) { return g * sa; }, g1, g2)});
    }
    {
        const cdouble g{0.3, 0.9};
        const Channel c = make_one_path(OnePathKind::freq_scale, 0.6, 1.4, g);
        const ClosedForm r = closed_form(c.paths()[0], Rep::rho);
        if (r.support != ClosedForm::Support::point)
            return {false, "frequency-scale rho is not a point mass"};
        worst = std::max(worst, std::abs(r.c1 - 0.6) + std::abs(r.c2 - 1.4) + std::abs(r.weight(0.6, 1.4) - g));
    }
    return within("max abs error on 64x64 grids", worst, 1e-9);
}

Outcome lattice_exactness()
{
    const Axis1D g = make_axis(-8.0, 0.01, 2001);
    auto xfn = [](double t) { return gauss(t, 1.0, 0.5, 0.7); };
    const SampledSignal x = sample_function(g, xfn);
    double taps = 0.0, apply = 0.0;

    {
        const double T = 2.0, W = 4.0;
        const Channel c = make_one_path(OnePathKind::delay_doppler, 1.5, 0.5);
        const CanonicalModel m = tf_taps(c, T, W, 1.0, 2.0);
        const Axis1D out = make_axis(0.0, 0.01, 200);
        taps = std::max(taps, single_tap_dev(m, 3, 2));
        apply = std::max(apply, relative_error(canonical_apply(m, x, out), apply_channel(c, x, out)));
    }
    {
        const double a0 = 1.2, b0 = 0.3, a = a0 * a0, b = -2 * b0 * a;
        const Channel c = make_one_path(OnePathKind::delay_dilation, a, b);
        const CanonicalModel m = ts_taps(c, a0, b0);
        taps = std::max(taps, single_tap_dev(m, 2, -2));
        apply = std::max(apply, relative_error(canonical_apply(m, x), apply_channel(c, x)));
    }
    {
        const double a0 = 1.25, T1 = 1.0, T2 = 5.0, Om = 1.0 / (T2 - T1);
        const Channel c = make_one_path(OnePathKind::freq_scale, -3 * Om, 1.0 / a0);
        const CanonicalModel m = fs_taps(c, a0, T1, T2);
        const Axis1D out = make_axis(T1, 0.01, 400);
        const SampledSignal xp = sample_function(make_axis(0.01, 0.01, 1200), [](double t) { return gauss(t, 3.0, 0.5, 0.7); });
        taps = std::max(taps, single_tap_dev(m, -3, -1));
        apply = std::max(apply, relative_error(canonical_apply(m, xp, out), apply_channel(c, xp, out)));
    }
    return both(within("tf/ts/fs tap deviation", taps, 1e-6), within("apply relative L2", apply, 1e-6));
}

Outcome offlattice_sifting()
{
    const double a0 = 2.0, b0 = 0.5, a = std::sqrt(a0);
    const CanonicalModel m = ts_taps(make_one_path(OnePathKind::delay_dilation, a, 0.5 * b0 * a), a0, b0);
    double e = 0.0;
    for (const auto& t : m.taps)
        e = std::max(e, std::abs(t.c - sinc(t.m - 0.5) * sinc(t.n - 0.5)));
    return within("max |c - sinc sinc|", e, 1e-6);
}

Outcome coefficient_solver()
{
    ModelParams p;
    p.T = 2.0;
    p.W = 4.0;
    p.Tm = 1.0;
    p.Bd = 1.0;
    const Channel H = make_analytic({{PathKind::delay_doppler, {0.7, 0.1}, 0.5, 0.25},
                                     {PathKind::delay_doppler, {-0.3, 0.4}, -1.0, 0.75},
                                     {PathKind::delay_doppler, {0.2, 0.0}, 0.0, 0.0}},
                                    Rep::S);
    const CanonicalModel tf_ref = tf_taps(H, p.T, p.W, p.Tm, p.Bd);
    SolveResult tf_sol;
    const CanonicalModel tf_pu = pairedup_taps(ModelKind::tf, H, p, tf_ref.bounds, std::nullopt, nullptr, &tf_sol);

    ModelParams q;
    q.a0 = 2.0;
    q.b0 = 0.5;
    const Channel L = make_one_path(OnePathKind::delay_dilation, 2.0, 0.5 * 2.0, {0.6, -0.2});
    const TapBounds b{-2, 2, -2, 2};
    SolveResult ts_sol;
    const CanonicalModel ts_pu = pairedup_taps(ModelKind::ts, L, q, b, std::nullopt, nullptr, &ts_sol);

    const double diff = std::max(max_tap_diff(tf_pu.taps, tf_ref.taps), max_tap_diff(ts_pu.taps, ts_taps(L, q.a0, q.b0, b).taps));
    return both(within("max tap difference", diff, 1e-4),
                within("substitution residual", std::max(tf_sol.residual, ts_sol.residual), 1e-5));
}

Outcome operator_map_equivalence()
{
    double e1 = 0.0, e2 = 0.0;
    {
        const Channel L = make_gridded(sample_kernel(Rep::L, make_axis(1.0, 0.002, 51), make_axis(-0.1, 0.005, 121),
                                                     [](double a, double b) { return gauss(a, 1.05, 0.008) * gauss(b, 0.2, 0.04); }));
        const Axis1D t = symmetric_axis(0.02, 1601);
        const Axis1D th = symmetric_axis(1.0 / (1601 * 0.02), 401);
        const Channel S = wideband_to_narrowband(L, Rep::S, th, make_axis(-0.4, 0.01, 121), t);
        const SampledSignal x = sample_function(make_axis(-6.0, 0.02, 601), [](double u) { return gauss(u, 0.0, 0.5, 3.0); });
        const Axis1D out = make_axis(-3.0, 0.02, 301);
        e1 = relative_error(apply_narrowband(S, x, out), apply_wideband(L, x, out));
    }
    {
        const Channel S = make_gridded(sample_kernel(Rep::S, make_axis(0.0, 0.01, 61), make_axis(-0.1, 0.01, 61),
                                                     [](double th, double tau) { return gauss(th, 0.3, 0.05) * gauss(tau, 0.2, 0.04); }));
        LFromSOptions o;
        o.a = linspace_axis(0.7, 1.05, 176);
        o.b = make_axis(-3.0, 0.004, 1501);
        const Channel L = narrowband_to_wideband(S, o);
        const SampledSignal x = sample_function(make_axis(-12.0, 0.02, 1201), [](double u) { return gauss(u, 0.0, 1.0, 3.0); });
        const Axis1D out = make_axis(-4.0, 0.02, 401);
        e2 = relative_error(apply_wideband(L, x, out), apply_narrowband(S, x, out));
    }
    return both(within("S from L", e1, 1e-3), within("L from S", e2, 2e-2));
}

Outcome h_rho_equivalence()
{
    auto hf = [](double t, double tau) { return gauss(t, 3.0, 0.5, 0.4) * gauss(tau, 0.3, 0.1); };
    const Channel h = make_gridded(sample_kernel(Rep::h, make_axis(0.5, 0.02, 251), make_axis(-0.3, 0.01, 121), hf));
    const Channel rho = h_to_rho(h, make_axis(-3.0, 0.02, 301), make_axis(0.7, 0.002, 401));
    const Channel back = rho_to_h(rho, make_axis(2.0, 0.05, 41), make_axis(-0.1, 0.02, 21));
    const KernelGrid2D& bg = back.grid();
    std::vector<cdouble> ref;
    for (std::size_t i = 0; i < bg.axis1.count; ++i)
        for (std::size_t j = 0; j < bg.axis2.count; ++j)
            ref.push_back(hf(bg.axis1.at(i), bg.axis2.at(j)));
    const double trip = relative_l2(bg.values, ref);

    const SampledSignal x = sample_function(make_axis(0.02, 0.01, 800), [](double t) { return gauss(t, 2.8, 0.7, 1.1); });
    const Axis1D out = make_axis(2.0, 0.01, 200);
    const double app = relative_error(apply_frequency_scale(rho, x, out), apply_time_varying(h, x, out));
    return both(within("round trip", trip, 1e-3), within("apply on [2, 4)", app, 1e-3));
}

Outcome frequency_scale_theorem()
{
    const double a0 = 1.25, T1 = 1.0, T2 = 5.0, L0 = std::log(a0);
    auto rho = [&](double t, double a) {
        const double v = std::log(a) / L0;
        return gauss(t, 3.0, 0.6) * std::exp(-0.5 * v * v);
    };
    // h(t, tau) = rho(t, t/(t - tau)) t^{1/2} (t - tau)^{-3/2} over the scale range a0^{+-6}
    const double amax = std::pow(a0, 6.0), amin = 1.0 / amax, thi = 5.5;
    const double tau_lo = thi - thi / amin - 0.2, tau_hi = thi - thi / amax + 0.2;
    const Axis1D tA = make_axis(0.5, 0.02, 251);
    const Axis1D tauA = make_axis(tau_lo, 0.01, static_cast<std::size_t>((tau_hi - tau_lo) / 0.01) + 1);
    KernelGrid2D k = make_kernel(Rep::h, tA, tauA);
    for (std::size_t i = 0; i < tA.count; ++i)
        for (std::size_t j = 0; j < tauA.count; ++j) {
            const double t = tA.at(i), tau = tauA.at(j);
            if (t > tau)
                k.at(i, j) = rho(t, t / (t - tau)) * std::sqrt(t) / std::pow(t - tau, 1.5);
        }
    const Channel H = make_gridded(k);

    const double du = L0 / 16.0;
    const SampledSignal x = sample(apply(op_power(dilate_op(a0), 5), gamma0_waveform(a0)),
                                   make_axis(-60.0, du, static_cast<std::size_t>(120.0 / du)), SignalAxis::log_time);
    const Axis1D out = make_axis(T1, 0.01, 400);
    const SampledSignal y = apply_time_varying(H, x, out, SignalAxis::time);
    const CanonicalModel m1 = fs_taps(H, a0, T1, T2);
    const CanonicalModel m2 = fs_taps(H, a0, T1, T2, m1.bounds.doubled());
    const double e1 = relative_error(canonical_apply(m1, x, out, nullptr, SignalAxis::time), y);
    const double e2 = relative_error(canonical_apply(m2, x, out, nullptr, SignalAxis::time), y);
    Outcome o = within("default truncation", e1, 1e-2);
    o.pass = o.pass && e2 < e1;
    o.detail += fmt("; doubled bounds %.3g, ratio %.3g (must be < 1)", e2, e2 / e1);
    return o;
}

Outcome paired_up_axioms()
{
    const double w = verify_paired_up(window_pair(0.0, 2.0)).max_deviation();
    const double l = verify_paired_up(lowpass_pair(4.0)).max_deviation();
    const double m = verify_paired_up(mellin_pair(1.25)).max_deviation();
    return both(both(within("window", w, 1e-9), within("lowpass", l, 1e-5)), within("mellin", m, 1e-4));
}

Outcome truncation_monotonicity()
{
    const double T = 2.0, W = 4.0, Tm = 1.0, Bd = 1.0;
    Waveform xw = scale(sinc_waveform(W), 0.0);
    const double w[] = {0.8, -0.5, 0.3, 0.6};
    const double sh[] = {0.1, 0.45, 0.9, 1.3};
    for (int k = 0; k < 4; ++k)
        xw = add(xw, scale(apply(translate_op(sh[k]), sinc_waveform(W)), w[k]));
    const SampledSignal xs = sample(xw, make_axis(-40.0, 1.0 / (8 * W), static_cast<std::size_t>(80 * 8 * W) + 1));
    const Axis1D out = make_axis(0.0, 1.0 / 64, 128);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 3; ++trial) {
        const double th = Bd * (2.0 * u(rng) - 1.0), ta = Tm * u(rng);
        const Channel S = make_one_path(OnePathKind::delay_doppler, th, ta);
        const SampledSignal ref = sample_function(out, [&](double t) { return xw.value(t - ta) * cis(th * t); });
        const CanonicalModel m1 = tf_taps(S, T, W, Tm, Bd);
        const CanonicalModel m2 = tf_taps(S, T, W, Tm, Bd, m1.bounds.doubled());
        const double e1 = relative_error(canonical_apply(m1, xs, out), ref);
        const double e2 = relative_error(canonical_apply(m2, xs, out), ref);
        ok = ok && e2 < e1;
        worst = std::max(worst, e2 / e1);
    }
    return {ok, fmt("worst ratio e(2K,2N)/e(K,N) %.3g over %g random paths", worst, 3)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& tool, const std::string& config, const fs::path& work)
{
    if (tool.empty() || config.empty())
        return {false, "no tvch binary or config given"};
    fs::create_directories(work);
    std::vector<fs::path> dirs{work / "run_a", work / "run_b"};
    for (const auto& d : dirs) {
        fs::remove_all(d);
        const std::string cmd = "\"" + tool + "\" simulate --config \"" + config + "\" --out \"" + d.string() + "\" --seed 42 2>\"" + (work / "simulate.log").string() + "\"";
        if (std::system(cmd.c_str()) != 0)
            return {false, "simulate failed: " + cmd};
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        ++files;
        const fs::path other = dirs[1] / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other))
            return {false, e.path().filename().string() + " differs between runs"};
    }
    std::size_t files_b = std::distance(fs::directory_iterator(dirs[1]), fs::directory_iterator());
    if (files == 0 || files != files_b)
        return {false, "output file sets differ"};
    return {true, std::to_string(files) + " files byte-identical across two runs"};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::string tool, config, work = fs::temp_directory_path().string() + "/tvch_acceptance";
    app.add_option("--tvch", tool, "tvch binary for the determinism run");
    app.add_option("--config", config, "simulate config for the determinism run");
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"one-path closed forms", one_path_closed_forms},
        {"lattice exactness", lattice_exactness},
        {"off-lattice sifting", offlattice_sifting},
        {"coefficient solver equivalence", coefficient_solver},
        {"operator-map equivalence", operator_map_equivalence},
        {"h / rho equivalence", h_rho_equivalence},
        {"frequency-scale reconstruction", frequency_scale_theorem},
        {"paired-up axioms", paired_up_axioms},
        {"truncation monotonicity", truncation_monotonicity},
        {"determinism", [&] { return determinism(tool, config, work); }},
    };

    int failed = 0;
    int idx = 0;
    for (const auto& [name, fn] : criteria) {
        ++idx;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %2d  %-32s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", idx, name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
