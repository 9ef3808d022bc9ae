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

#include "doctest.h"

#include "tvch/quadrature.hpp"
#include "tvch/sysfuncs.hpp"

#include <cmath>
#include <functional>
#include <map>

using namespace tvch;

namespace {

using Fn = std::function<cdouble(double, double)>;

double max_err_on_grid(const Fn& a, const Fn& b, const Axis1D& x1, const Axis1D& x2)
{
    double m = 0.0;
    for (std::size_t i = 0; i < x1.count; ++i)
        for (std::size_t j = 0; j < x2.count; ++j)
            m = std::max(m, std::abs(a(x1.at(i), x2.at(j)) - b(x1.at(i), x2.at(j))));
    return m;
}

const Axis1D g64a = linspace_axis(-1.7, 2.3, 64);
const Axis1D g64b = linspace_axis(0.15, 3.1, 64);

// Separable Gaussian kernel h(t, tau) and its transforms, written out by hand.
struct GaussKernel {
    double t0 = 0.3, s1 = 0.8, th1 = 0.6, tau1 = 0.4, s2 = 0.25;
    cdouble h(double t, double tau) const
    {
        return std::exp(-pi * (t - t0) * (t - t0) / (s1 * s1)) * cis(th1 * t) *
               std::exp(-pi * (tau - tau1) * (tau - tau1) / (s2 * s2));
    }
    cdouble S(double th, double tau) const
    {
        const double d = th - th1;
        return s1 * std::exp(-pi * s1 * s1 * d * d) * cis(-d * t0) *
               std::exp(-pi * (tau - tau1) * (tau - tau1) / (s2 * s2));
    }
    cdouble H(double th, double nu) const
    {
        const double d = th - th1;
        return s1 * std::exp(-pi * s1 * s1 * d * d) * cis(-d * t0) * s2 *
               std::exp(-pi * s2 * s2 * nu * nu) * cis(-nu * tau1);
    }
};

KernelGrid2D sample_fn(Rep r, const Axis1D& a1, const Axis1D& a2, const Fn& f)
{
    KernelGrid2D k = make_kernel(r, a1, a2);
    for (std::size_t i = 0; i < a1.count; ++i)
        for (std::size_t j = 0; j < a2.count; ++j)
            k.at(i, j) = f(a1.at(i), a2.at(j));
    return k;
}

double grid_err(const KernelGrid2D& k, const Fn& f)
{
    double m = 0.0;
    for (std::size_t i = 0; i < k.axis1.count; ++i)
        for (std::size_t j = 0; j < k.axis2.count; ++j)
            m = std::max(m, std::abs(k.at(i, j) - f(k.axis1.at(i), k.axis2.at(j))));
    return m;
}

} // namespace

TEST_CASE("delay-Doppler function-valued closed forms")
{
    const cdouble g{0.8, -0.3};
    const double th = 0.45, ta = 0.7;
    auto c = make_analytic({OnePath{PathKind::delay_doppler, g, th, ta}}, Rep::S);
    const std::map<Rep, Fn> oracle = {
        {Rep::T, [&](double t, double nu) { return g * std::exp(cdouble{0, 2 * pi * (th * t - ta * nu)}); }},
        {Rep::k1, [&](double x, double s) { return g * std::exp(cdouble{0, -2 * pi * (s + ta) * (x - th)}); }},
        {Rep::k2, [&](double t, double nu) { return g * std::exp(cdouble{0, 2 * pi * (t * (nu + th) - ta * nu)}); }},
        {Rep::M, [&](double x, double t) { return g * std::exp(cdouble{0, 2 * pi * (-ta * (x - th) + t * th)}); }},
        {Rep::L, [&](double a, double b) {
             return g * std::abs(th) / (std::sqrt(a) * (1 - a) * (1 - a)) *
                    std::exp(cdouble{0, 2 * pi * th * (b - a * ta) / (1 - a)});
         }},
    };
    for (const auto& [rep, f] : oracle) {
        CAPTURE(rep_name(rep));
        Axis1D a1 = rep == Rep::L ? linspace_axis(0.2, 0.9, 64) : g64a;
        CHECK(max_err_on_grid([&](double x, double y) { return closed_form_value(c, rep, x, y); }, f, a1, g64b) <=
              1e-9);
    }
    CHECK(closed_form(c.paths()[0], Rep::S).support == ClosedForm::Support::point);
    CHECK(closed_form(c.paths()[0], Rep::h).support == ClosedForm::Support::line);
    CHECK_THROWS_AS(closed_form(c.paths()[0], Rep::rho), NoClosedForm);
    CHECK_THROWS_AS(closed_form_value(c, Rep::h, 0.0, 0.0), NoClosedForm);
}

TEST_CASE("delay-dilation function-valued closed forms")
{
    const cdouble g{1.1, 0.2};
    const double a0 = 1.3, b0 = -0.25;
    auto c = make_one_path(OnePathKind::delay_dilation, a0, b0, g);
    const double sa = std::sqrt(a0);
    const std::map<Rep, Fn> oracle = {
        {Rep::S, [&](double th, double tau) {
             return g * sa / std::abs(1 - a0) * std::exp(cdouble{0, -2 * pi * th * (b0 - a0 * tau) / (1 - a0)});
         }},
        {Rep::k1, [&](double th, double s) { return g * sa * std::exp(cdouble{0, -2 * pi * th * (a0 * s + b0)}); }},
        {Rep::k2, [&](double t, double nu) { return g / sa * std::exp(cdouble{0, 2 * pi * nu * (t - b0) / a0}); }},
        {Rep::T, [&](double t, double nu) { return g / sa * std::exp(cdouble{0, 2 * pi * nu * ((t - b0) / a0 - t)}); }},
        {Rep::V, [&](double tau, double nu) {
             return g * sa / std::abs(1 - a0) * std::exp(cdouble{0, 2 * pi * nu * (tau - b0) / (1 - a0)});
         }},
        {Rep::M, [&](double th, double t) {
             return g * sa * std::exp(cdouble{0, 2 * pi * (-th * b0 + (1 - a0) * th * t)});
         }},
    };
    for (const auto& [rep, f] : oracle) {
        CAPTURE(rep_name(rep));
        CHECK(max_err_on_grid([&](double x, double y) { return closed_form_value(c, rep, x, y); }, f, g64a, g64b) <=
              1e-9);
    }
    auto L = closed_form(c.paths()[0], Rep::L);
    CHECK(L.support == ClosedForm::Support::point);
    CHECK(L.c1 == a0);
    CHECK(L.c2 == b0);
    auto h = closed_form(c.paths()[0], Rep::h);
    CHECK(h.support == ClosedForm::Support::line);
    // support (1 - a0) t + a0 tau = b0
    CHECK(h.c1 == doctest::Approx(1 - a0));
    CHECK(h.c2 == doctest::Approx(a0));
    CHECK(h.c0 == doctest::Approx(b0));
}

TEST_CASE("S of a delay-dilation path reproduces the operator")
{
    // y(t) = int int S(th, tau) x(t - tau) e^{j2pi th t} must equal a0^{-1/2} x((t - b0)/a0).
    // Integrating th first gives a delta on the h line; check the h line against the definition.
    const double a0 = 0.8, b0 = 0.3;
    auto c = make_one_path(OnePathKind::delay_dilation, a0, b0);
    auto h = closed_form(c.paths()[0], Rep::h);
    // For fixed t, tau* solves c1 t + c2 tau = c0 and the weight is divided by |c2|.
    for (double t : {-1.0, 0.2, 1.7}) {
        const double tau = (h.c0 - h.c1 * t) / h.c2;
        CHECK(t - tau == doctest::Approx((t - b0) / a0));
        CHECK(std::abs(h.weight(t, tau) / std::abs(h.c2) - 1.0 / std::sqrt(a0)) <= 1e-12);
    }
}

TEST_CASE("frequency-scale paths only have a rho form")
{
    auto c = make_one_path(OnePathKind::freq_scale, 0.2, 1.5);
    CHECK(closed_form(c.paths()[0], Rep::rho).support == ClosedForm::Support::point);
    for (Rep r : all_reps())
        if (r != Rep::rho)
            CHECK_THROWS_AS(closed_form(c.paths()[0], r), NoClosedForm);
}

TEST_CASE("conversion paths")
{
    CHECK(conversion_path(Rep::h, Rep::h) == std::vector<Rep>{Rep::h});
    CHECK(conversion_path(Rep::h, Rep::S) == std::vector<Rep>{Rep::h, Rep::S});
    for (Rep a : all_reps())
        for (Rep b : all_reps()) {
            if (!is_narrowband(a) || !is_narrowband(b))
                CHECK_THROWS_AS(conversion_path(a, b), WrongFamily);
            else
                CHECK(conversion_path(a, b).back() == b);
        }
    CHECK(reachable_targets(Rep::L).empty());
    CHECK(reachable_targets(Rep::h).size() == 11);
}

TEST_CASE("gridded h to S and H match the transforms")
{
    GaussKernel gk;
    auto h = make_gridded(sample_fn(Rep::h, symmetric_axis(0.05, 128), symmetric_axis(0.025, 128),
                                    [&](double t, double tau) { return gk.h(t, tau); }));
    auto S = convert_narrowband(h, Rep::S);
    CHECK(grid_err(S.grid(), [&](double a, double b) { return gk.S(a, b); }) <= 1e-9);
    auto H1 = convert_narrowband(S, Rep::H);
    auto T = convert_narrowband(h, Rep::T);
    auto H2 = convert_narrowband(T, Rep::H);
    CHECK(grid_err(H1.grid(), [&](double a, double b) { return gk.H(a, b); }) <= 1e-9);
    // path independence
    CHECK(relative_l2(H1.grid().values, H2.grid().values) <= 1e-12);
    auto back = convert_narrowband(S, Rep::h);
    CHECK(relative_l2(back.grid().values, h.grid().values) <= 1e-12);
    CHECK(back.grid().axis1.start == doctest::Approx(h.grid().axis1.start));
}

TEST_CASE("shears follow the coordinate maps")
{
    GaussKernel gk;
    const double d = 0.04;
    auto h = make_gridded(sample_fn(Rep::h, symmetric_axis(d, 100), make_axis(-0.4, d, 40),
                                    [&](double t, double tau) { return gk.h(t, tau); }));
    auto k0 = convert_narrowband(h, Rep::k0);
    // k0(t, s) = h(t, t - s)
    CHECK(grid_err(k0.grid(), [&](double t, double s) {
              const double tau = t - s;
              if (tau < -0.4 - 1e-9 || tau > -0.4 + 39 * d + 1e-9)
                  return cdouble{};
              return gk.h(t, tau);
          }) <= 1e-12);
    auto back = convert_narrowband(k0, Rep::h);
    CHECK(grid_err(back.grid(), [&](double t, double tau) { return gk.h(t, tau); }) <= 1e-12);

    // Non-equal steps are rejected.
    auto bad = make_gridded(sample_fn(Rep::h, make_axis(0, 0.1, 4), make_axis(0, 0.2, 4),
                                      [](double, double) { return cdouble{1.0}; }));
    CHECK_THROWS_AS(convert_narrowband(bad, Rep::k0), GridError);
}

TEST_CASE("H to k3 to G chain")
{
    GaussKernel gk;
    const double d = 0.05;
    auto H = make_gridded(sample_fn(Rep::H, make_axis(-1.5, d, 60), make_axis(-1.5, d, 60),
                                    [&](double a, double b) { return gk.H(a, b); }));
    auto k3 = convert_narrowband(H, Rep::k3);
    // k3(phi, nu) = H(phi - nu, nu)
    auto in_range = [](double x) { return x >= -1.5 - 1e-9 && x <= -1.5 + 59 * 0.05 + 1e-9; };
    CHECK(grid_err(k3.grid(), [&](double phi, double nu) {
              return in_range(phi - nu) ? gk.H(phi - nu, nu) : cdouble{};
          }) <= 1e-12);
    auto G = convert_narrowband(k3, Rep::G);
    // G(theta, nu') = H(nu', theta - nu')
    CHECK(grid_err(G.grid(), [&](double th, double v) {
              return in_range(v) && in_range(th - v) ? gk.H(v, th - v) : cdouble{};
          }) <= 1e-12);
    auto back = convert_narrowband(k3, Rep::H);
    double m = 0.0;
    for (std::size_t i = 0; i < back.grid().axis1.count; ++i)
        for (std::size_t j = 0; j < back.grid().axis2.count; ++j) {
            const double a = back.grid().axis1.at(i), b = back.grid().axis2.at(j);
            cdouble ref = in_range(a) && in_range(b) ? gk.H(a, b) : cdouble{};
            m = std::max(m, std::abs(back.grid().at(i, j) - ref));
        }
    CHECK(m <= 1e-12);
}

TEST_CASE("Fourier edges are invertible for every narrowband pair")
{
    GaussKernel gk;
    // wide enough that h is negligible at the period edges, since shears zero-pad
    const Axis1D ax = symmetric_axis(0.05, 96);
    auto h = make_gridded(sample_fn(Rep::h, ax, ax, [&](double t, double tau) { return gk.h(t, tau); }));
    auto inside = [&](double x) { return x >= ax.start - 1e-9 && x <= ax.back() + 1e-9; };
    for (Rep r : {Rep::k1, Rep::k2, Rep::k3, Rep::G, Rep::V, Rep::M, Rep::g}) {
        CAPTURE(rep_name(r));
        auto c = convert_narrowband(h, r);
        auto back = convert_narrowband(c, Rep::h);
        // shears may have grown the grid; compare on the original lattice
        const auto& bg = back.grid();
        double m = 0.0;
        for (std::size_t i = 0; i < bg.axis1.count; ++i)
            for (std::size_t j = 0; j < bg.axis2.count; ++j) {
                const double t = bg.axis1.at(i), tau = bg.axis2.at(j);
                if (inside(t) && inside(tau))
                    m = std::max(m, std::abs(bg.at(i, j) - gk.h(t, tau)));
            }
        CHECK(m <= 1e-6);
    }
}

TEST_CASE("analytic conversions keep the paths")
{
    auto c = make_one_path(OnePathKind::delay_doppler, 0.2, 0.1);
    auto G = convert_narrowband(c, Rep::G);
    CHECK(G.analytic());
    CHECK(G.rep == Rep::G);
    CHECK(G.paths().size() == 1);
    CHECK_THROWS_AS(convert_narrowband(c, Rep::L), WrongFamily);
}

TEST_CASE("h from a gridded L matches the definition")
{
    auto kL = [](double a, double b) { return std::exp(-0.5 * std::pow((a - 1.1) / 0.02, 2)) * std::exp(-0.5 * std::pow((b - 0.2) / 0.05, 2)); };
    auto L = make_gridded(sample_fn(Rep::L, make_axis(1.0, 0.004, 51), make_axis(-0.1, 0.005, 121), kL));
    const Axis1D t = make_axis(-1.0, 0.1, 21), tau = make_axis(-0.2, 0.02, 31);
    auto h = wideband_to_narrowband(L, Rep::h, t, tau);
    // h(t, tau) = int sqrt(a) L(a, (1 - a) t + a tau) da
    auto q = composite_gl(1.0, 1.2, 40, 16);
    CHECK(grid_err(h.grid(), [&](double tt, double ta) {
              cdouble acc = 0.0;
              for (std::size_t i = 0; i < q.size(); ++i) {
                  const double a = q.nodes[i];
                  acc += q.weights[i] * std::sqrt(a) * kL(a, (1 - a) * tt + a * ta);
              }
              return acc;
          }) <= 1e-6);
    CHECK_THROWS_AS(wideband_to_narrowband(L, Rep::S, make_axis(-4.0, 0.1, 81), tau, make_axis(-1.0, 0.1, 21)),
                    ResolutionError);
    CHECK_THROWS_AS(wideband_to_narrowband(L, Rep::T, t, tau), WrongFamily);
}

TEST_CASE("h to rho to h round trip")
{
    // smooth kernel supported on t > 0, tau < t
    auto hf = [](double t, double tau) {
        return std::exp(-0.5 * std::pow((t - 3.0) / 0.5, 2)) * std::exp(-0.5 * std::pow((tau - 0.3) / 0.1, 2)) *
               cis(0.4 * t);
    };
    auto h = make_gridded(sample_fn(Rep::h, make_axis(0.5, 0.02, 251), make_axis(-0.3, 0.01, 121), hf));
    // a = t/(t - tau) ranges over about [0.8, 1.4]
    auto rho = h_to_rho(h, make_axis(-3.0, 0.02, 301), make_axis(0.7, 0.002, 401));
    auto back = rho_to_h(rho, make_axis(2.0, 0.05, 41), make_axis(-0.1, 0.02, 21));
    std::vector<cdouble> ref;
    for (std::size_t i = 0; i < back.grid().axis1.count; ++i)
        for (std::size_t j = 0; j < back.grid().axis2.count; ++j)
            ref.push_back(hf(back.grid().axis1.at(i), back.grid().axis2.at(j)));
    CHECK(relative_l2(back.grid().values, ref) <= 1e-3);
}

TEST_CASE("L2 of an analytic path applies in frequency")
{
    auto c = make_one_path(OnePathKind::delay_dilation, 1.2, 0.3);
    auto L2 = wideband_L2(c);
    auto x = sample_function(make_axis(-8.0, 0.02, 800), [](double t) { return std::exp(-t * t) * cis(1.5 * t); });
    auto X = fourier(x);
    auto Y = apply_wideband_freq(L2, X);
    auto Yref = fourier(apply_channel(c, x));
    CHECK(relative_l2(Y.values, Yref.values) <= 1e-6);
}
