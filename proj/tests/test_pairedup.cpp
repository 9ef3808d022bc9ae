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

#include "tvch/pairedup.hpp"
#include "tvch/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

using namespace tvch;

namespace {

double max_tap_diff(const std::vector<Tap>& a, const std::vector<Tap>& b)
{
    REQUIRE(a.size() == b.size());
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].m == b[i].m);
        REQUIRE(a[i].n == b[i].n);
        e = std::max(e, std::abs(a[i].c - b[i].c));
    }
    return e;
}

// sqrt(W/T) int_0^T e^{-j2pi l t/T} sinc(W t - k) dt
cdouble tf_gram_oracle(int k, int l, double T, double W)
{
    auto q = composite_gl(0.0, T, 200, 12);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        acc += q.weights[i] * sinc(W * q.nodes[i] - k) * cis(-l * q.nodes[i] / T);
    return std::sqrt(W / T) * acc;
}

std::vector<SampledSignal> test_signals()
{
    const Axis1D g = make_axis(-20.0, 1.0 / 32.0, 1281);
    return {sample(gaussian_waveform(0.8, 0.4, 1.0), g), sample(gaussian_waveform(1.3, 0.3, -0.5), g)};
}

} // namespace

TEST_CASE("preset pairs satisfy the paired-up axioms")
{
    SUBCASE("time window")
    {
        auto r = verify_paired_up(window_pair(0.0, 2.0));
        CHECK(r.max_deviation() <= 1e-9);
        CHECK(r.range == 4);
    }
    SUBCASE("lowpass")
    {
        CHECK(verify_paired_up(lowpass_pair(4.0)).max_deviation() <= 1e-5);
    }
    SUBCASE("Mellin")
    {
        CHECK(verify_paired_up(mellin_pair(1.25)).max_deviation() <= 1e-4);
    }
    SUBCASE("window on an offset interval")
    {
        CHECK(verify_paired_up(window_pair(1.0, 5.0)).max_deviation() <= 1e-9);
    }
}

TEST_CASE("custom pairs are checked on samples")
{
    const OperatorPair w = window_pair(0.0, 2.0);
    const OperatorPair c = custom_pair("my window", w.P, w.U, w.e0);
    CHECK(c.family == PairFamily::custom);
    CHECK(verify_paired_up(c, 2).max_deviation() <= 1e-2);

    // A translate that does not commute with the window.
    const OperatorPair bad = custom_pair("bad", w.P, translate_op(0.5), w.e0);
    auto r = verify_paired_up(bad, 2);
    CHECK(r.commutation > 0.1);
    CHECK(r.orthonormality > 0.1);
}

TEST_CASE("pair constructors reject bad parameters")
{
    CHECK_THROWS_AS(window_pair(2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(lowpass_pair(0.0), InvalidArgument);
    CHECK_THROWS_AS(mellin_pair(1.0), InvalidArgument);
    CHECK_THROWS_AS(make_gram(-1), InvalidArgument);
}

TEST_CASE("identity channel gives h = a")
{
    const Channel I = identity_channel();
    SUBCASE("tf pairs")
    {
        auto g = compute_grams(I, window_pair(0.0, 2.0), lowpass_pair(4.0), 6);
        for (std::size_t i = 0; i < g.a.values.size(); ++i)
            CHECK(std::abs(g.h.values[i] - g.a.values[i]) <= 1e-14);
    }
    SUBCASE("ts pairs")
    {
        auto g = compute_grams(I, mellin_pair(2.0), lowpass_pair(2.0), 4);
        for (std::size_t i = 0; i < g.a.values.size(); ++i)
            CHECK(std::abs(g.h.values[i] - g.a.values[i]) <= 1e-14);
    }
    SUBCASE("model pairs solve to a single unit tap")
    {
        const OperatorPair P = window_pair(0.0, 2.0), Q = lowpass_pair(4.0);
        auto g = compute_grams(I, P, Q, 8);
        auto s = solve_coefficients(g.a, g.h);
        CHECK(std::abs(s.tap(0, 0) - 1.0) <= 1e-9);
        for (const auto& t : s.taps)
            if (t.m != 0 || t.n != 0)
                CHECK(std::abs(t.c) <= 1e-6);
    }
    SUBCASE("identical pairs")
    {
        // a_{k,l} = delta_{k,l}: the symbol is a Dirichlet kernel in theta1 + theta2,
        // with zeros on a 17-point grid
        const OperatorPair w = window_pair(0.0, 2.0);
        auto g = compute_grams(I, w, w, 8);
        for (int k = -8; k <= 8; ++k)
            for (int l = -8; l <= 8; ++l)
                CHECK(std::abs(g.a.at(k, l) - (k == l ? 1.0 : 0.0)) <= 1e-12);
        SolveOptions o;
        o.M = 17;
        CHECK_THROWS_AS(solve_coefficients(g.a, g.h, o), IllConditionedPair);
    }
}

TEST_CASE("tf Gram table matches direct quadrature")
{
    const double T = 2.0, W = 4.0;
    auto g = compute_grams(identity_channel(), window_pair(0.0, T), lowpass_pair(W), 6);
    double e = 0.0;
    for (int k = -6; k <= 6; ++k)
        for (int l = -6; l <= 6; ++l)
            e = std::max(e, std::abs(g.a.at(k, l) - tf_gram_oracle(k, l, T, W)));
    CHECK(e <= 1e-6);
}

TEST_CASE("lattice delay shifts the Gram table")
{
    const double T = 2.0, W = 4.0;
    const int n0 = 2;
    auto H = make_one_path(OnePathKind::delay, n0 / W);
    auto g = compute_grams(H, window_pair(0.0, T), lowpass_pair(W), 6);
    double e = 0.0;
    for (int u = -6; u + n0 <= 6; ++u)
        for (int s = -6; s <= 6; ++s)
            e = std::max(e, std::abs(g.h.at(u, s) - g.a.at(u + n0, s)));
    CHECK(e <= 1e-6);
}

TEST_CASE("tf symbol approaches the closed form")
{
    // A = sqrt(WT) e^{j2pi WT theta1 theta2} for theta1 in [-1/2, 1/2), theta2 in [0, 1)
    const double T = 2.0, W = 4.0;
    const int R = 16;
    auto g = compute_grams(identity_channel(), window_pair(0.0, T), lowpass_pair(W), R);
    double e = 0.0;
    for (double t1 = -0.3; t1 <= 0.3; t1 += 0.05)
        for (double t2 = 0.2; t2 <= 0.8; t2 += 0.05) {
            cdouble A = 0.0;
            for (int k = -R; k <= R; ++k)
                for (int l = -R; l <= R; ++l)
                    A += g.a.at(k, l) * cis(k * t1 + l * t2);
            e = std::max(e, std::abs(A - std::sqrt(W * T) * cis(W * T * t1 * t2)));
        }
    CHECK(e <= 0.05 * std::sqrt(W * T));

    auto s = solve_coefficients(g.a, g.h);
    CHECK(s.M == 4 * R + 1);
    CHECK(s.min_abs_A >= s.epsilon_A);
    CHECK(s.epsilon_A == doctest::Approx(1e-6 * s.max_abs_A));
}

TEST_CASE("pairedup taps equal the canonical taps")
{
    SUBCASE("tf")
    {
        ModelParams p;
        p.T = 2.0;
        p.W = 4.0;
        p.Tm = 1.0;
        p.Bd = 1.0;
        auto H = make_analytic({{PathKind::delay_doppler, {0.7, 0.1}, 0.5, 0.25},
                                {PathKind::delay_doppler, {-0.3, 0.4}, -1.0, 0.75},
                                {PathKind::delay_doppler, {0.2, 0.0}, 0.0, 0.0}},
                               Rep::S);
        auto ref = tf_taps(H, p.T, p.W, p.Tm, p.Bd);
        auto m = pairedup_taps(ModelKind::tf, H, p, ref.bounds);
        CHECK(max_tap_diff(m.taps, ref.taps) <= 1e-5);
        CHECK(m.warnings.empty());
        CHECK(m.provenance.back().rfind("pairedup:", 0) == 0);
    }
    SUBCASE("ts")
    {
        ModelParams p;
        p.a0 = 2.0;
        p.b0 = 0.5;
        auto L = make_one_path(OnePathKind::delay_dilation, 2.0, 1.0 * 0.5 * 2.0, {0.6, -0.2});
        TapBounds b{-2, 2, -2, 2};
        auto ref = ts_taps(L, p.a0, p.b0, b);
        auto m = pairedup_taps(ModelKind::ts, L, p, b);
        CHECK(max_tap_diff(m.taps, ref.taps) <= 1e-4);
    }
    SUBCASE("fs")
    {
        ModelParams p;
        p.a0 = 1.25;
        p.T1 = 1.0;
        p.T2 = 3.0;
        auto rho = make_analytic({{PathKind::freq_scale, {0.7, 0.1}, 0.5, 1.25},
                                  {PathKind::freq_scale, {-0.3, 0.4}, -1.0, 1.0 / 1.5625}},
                                 Rep::rho);
        TapBounds b{-2, 2, -2, 2};
        auto ref = fs_taps(rho, p.a0, p.T1, p.T2, b);
        auto m = pairedup_taps(ModelKind::fs, rho, p, b);
        CHECK(max_tap_diff(m.taps, ref.taps) <= 1e-4);
    }
}

TEST_CASE("solved taps satisfy the coefficient equations")
{
    const double T = 2.0, W = 4.0;
    auto H = make_analytic({{PathKind::delay_doppler, {0.7, 0.1}, 0.5, 0.25},
                            {PathKind::delay_doppler, {-0.3, 0.4}, -0.5, 0.5}},
                           Rep::S);
    auto g = compute_grams(H, window_pair(0.0, T), lowpass_pair(W), 8);
    auto s = solve_coefficients(g.a, g.h);
    CHECK(s.residual <= 1e-5);
    CHECK(substitution_residual(g.a, g.h, s.taps) == doctest::Approx(s.residual));
    // the transform-only solution is only an approximation at finite R
    SolveOptions o;
    o.refine = false;
    auto s0 = solve_coefficients(g.a, g.h, o);
    CHECK(s0.recipe_residual == s0.residual);
    CHECK(s0.residual > s.residual);
}

TEST_CASE("scaling the channel scales the taps")
{
    const double T = 2.0, W = 4.0;
    const cdouble gamma{-0.7, 1.9};
    auto H = make_one_path(OnePathKind::delay_doppler, 0.37, 0.61);
    auto P = window_pair(0.0, T), Q = lowpass_pair(W);
    auto g1 = compute_grams(H, P, Q, 8);
    auto g2 = compute_grams(scaled(H, gamma), P, Q, 8);
    auto s1 = solve_coefficients(g1.a, g1.h);
    auto s2 = solve_coefficients(g2.a, g2.h);
    double e = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < s1.taps.size(); ++i) {
        e = std::max(e, std::abs(s2.taps[i].c - gamma * s1.taps[i].c));
        mx = std::max(mx, std::abs(s1.taps[i].c));
    }
    CHECK(e <= 1e-12 * mx);
}

TEST_CASE("a vanishing symbol is rejected")
{
    GramTable a = make_gram(3), h = make_gram(3);
    SUBCASE("zero table")
    {
        CHECK_THROWS_AS(solve_coefficients(a, h), IllConditionedPair);
    }
    SUBCASE("zero on the grid")
    {
        a.at(0, 0) = 1.0;
        a.at(1, 0) = -1.0;
        h.at(0, 0) = 1.0;
        try {
            solve_coefficients(a, h);
            FAIL("expected IllConditionedPair");
        } catch (const IllConditionedPair& e) {
            CHECK(e.theta1() == 0.0);
            CHECK(std::string(e.what()).find("theta1") != std::string::npos);
        }
    }
    SUBCASE("mismatched tables")
    {
        a.at(0, 0) = 1.0;
        CHECK_THROWS_AS(solve_coefficients(a, make_gram(2)), InvalidArgument);
    }
}

TEST_CASE("expansion residuals")
{
    const double T = 2.0, W = 4.0;
    auto P = window_pair(0.0, T), Q = lowpass_pair(W);
    const auto xs = test_signals();
    SUBCASE("identity channel")
    {
        auto H = identity_channel();
        auto g = compute_grams(H, P, Q, 8);
        auto s = solve_coefficients(g.a, g.h);
        CHECK(verify_expansion(H, P, Q, s.taps, xs).max() <= 1e-9);
    }
    SUBCASE("on-lattice path")
    {
        auto H = make_one_path(OnePathKind::delay_doppler, 0.5, 0.5);
        auto g = compute_grams(H, P, Q, 8);
        auto s = solve_coefficients(g.a, g.h);
        auto r = verify_expansion(H, P, Q, s.taps, xs);
        CHECK(r.residuals.size() == xs.size());
        CHECK(r.max() <= 1e-6);
    }
    SUBCASE("off-lattice path improves when R doubles")
    {
        auto H = make_one_path(OnePathKind::delay_doppler, 0.5, 0.61);
        double prev = 1e300;
        for (int R : {8, 16}) {
            auto g = compute_grams(H, P, Q, R);
            auto s = solve_coefficients(g.a, g.h);
            const double r = verify_expansion(H, P, Q, s.taps, xs).max();
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("pairedup warns when the bounds are too tight")
{
    ModelParams p;
    p.T = 2.0;
    p.W = 4.0;
    auto H = make_one_path(OnePathKind::delay_doppler, 0.37, 0.61);
    auto m = pairedup_taps(ModelKind::tf, H, p, TapBounds{-1, 1, -1, 1});
    CHECK(!m.warnings.empty());
}

TEST_CASE("Gram tables round-trip through CSV")
{
    auto g = compute_grams(identity_channel(), window_pair(0.0, 2.0), lowpass_pair(4.0), 3);
    std::stringstream ss;
    write_gram_csv(ss, g.a);
    const GramTable back = read_gram_csv(ss);
    REQUIRE(back.R == 3);
    for (std::size_t i = 0; i < back.values.size(); ++i)
        CHECK(back.values[i] == g.a.values[i]);

    std::stringstream bad("m,n,re,im\n0,0,1,0\n1,0,1,0\n");
    CHECK_THROWS_AS(read_gram_csv(bad), InvalidArgument);

    auto j = nlohmann::json::parse(gram_sidecar(window_pair(0.0, 2.0), lowpass_pair(4.0), 3, 13, 1e-6));
    CHECK(j.at("R") == 3);
    CHECK(j.at("M") == 13);
    CHECK(j.contains("pairP"));
    CHECK(j.contains("pairQ"));
    CHECK(j.contains("epsilon_A"));
}

TEST_CASE("model pairs")
{
    ModelParams p;
    p.T = 2.0;
    p.W = 4.0;
    p.a0 = 2.0;
    p.b0 = 0.5;
    p.T1 = 1.0;
    p.T2 = 3.0;
    CHECK(model_pairs(ModelKind::tf, p).first.family == PairFamily::window);
    CHECK(model_pairs(ModelKind::tf, p).second.family == PairFamily::lowpass);
    CHECK(model_pairs(ModelKind::ts, p).first.family == PairFamily::mellin);
    CHECK(model_pairs(ModelKind::ts, p).second.p1 == doctest::Approx(2.0));
    CHECK(model_pairs(ModelKind::fs, p).second.family == PairFamily::mellin);
    p.b0 = 0.0;
    CHECK_THROWS_AS(model_pairs(ModelKind::ts, p), InvalidArgument);
}
