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

#include "tvch/canonical.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tvch {

// Closed-form families known to the Gram quadrature. Custom pairs are
// handled with sampled inner products.
enum class PairFamily { window, lowpass, mellin, custom };

const char* pair_family_name(PairFamily f);

// (P, U, e0): P an orthogonal projection, U unitary with PU = UP, and
// {U^m e0} an orthonormal basis of Ran P. e0 is sampled on the grid the
// sampled checks run on; e0_fn is its closed form when one exists.
struct OperatorPair {
    std::string name;
    PairFamily family = PairFamily::custom;
    ProjectionSpec P;
    ElementaryOpSpec U;
    SampledSignal e0;
    Waveform e0_fn;
    double p1 = 0.0; ///< T1 | W | a0, by family
    double p2 = 0.0; ///< T2 for window pairs

    void validate() const;
};

// (1_[T1,T2), M_Omega, sqrt(Omega) 1_[T1,T2)) with Omega = 1/(T2 - T1).
OperatorPair window_pair(double T1, double T2);
// (Q_W, T_{1/W}, sqrt(W) sinc(W t)).
OperatorPair lowpass_pair(double W);
// (R_alpha, D_a0, gamma0) with alpha = 1/ln a0, the band of gamma0.
OperatorPair mellin_pair(double a0);
OperatorPair custom_pair(std::string name, const ProjectionSpec& P, const ElementaryOpSpec& U, SampledSignal e0);

// Deviations from the four axioms. The first three are relative L2 norms
// over a fixed set of test signals; orthonormality is
// max |<U^m e0, U^n e0> - delta_mn| over |m|, |n| <= R.
struct PairedUpReport {
    std::string pair;
    int range = 0;
    double idempotence = 0.0;
    double unitarity = 0.0;
    double commutation = 0.0;
    double orthonormality = 0.0;

    double max_deviation() const;
};

PairedUpReport verify_paired_up(const OperatorPair& pair, int R = 4);

// Values over (k, l) in [-R, R]^2, row-major in k.
struct GramTable {
    int R = 0;
    std::vector<cdouble> values;

    int side() const { return 2 * R + 1; }
    cdouble at(int k, int l) const;
    cdouble& at(int k, int l);
    bool contains(int k, int l) const { return std::abs(k) <= R && std::abs(l) <= R; }
};

GramTable make_gram(int R);

struct Grams {
    GramTable a; ///< a_{k,l} = <V^k f0, U^l e0>
    GramTable h; ///< h_{u,s} = <H V^u f0, U^s e0>
    std::string method;
};

// (P, U, e0) = pairP, (Q, V, f0) = pairQ. Analytic channels with a window P
// pair, or a Mellin P pair over a lowpass Q pair, use quadrature of the
// closed forms; everything else uses sampled inner products on e0's grid.
Grams compute_grams(const Channel& H, const OperatorPair& pairP, const OperatorPair& pairQ, int R);

struct SolveOptions {
    std::optional<TapBounds> bounds; ///< default [-r, r]^2 with r = max(1, R/4)
    std::optional<int> M;            ///< transform grid, default 4R + 1
    double epsilon = 1e-6;           ///< gate on min|A| relative to max|A|
    bool refine = true;              ///< least-squares pass over the interior equations
};

struct SolveResult {
    TapBounds bounds;
    std::vector<Tap> taps; ///< row-major over (m, n)
    int M = 0;
    double min_abs_A = 0.0;
    double max_abs_A = 0.0;
    double epsilon_A = 0.0;
    double recipe_residual = 0.0; ///< residual of the transform-only solution
    double residual = 0.0;        ///< residual of the returned taps

    cdouble tap(int m, int n) const;
};

// Solves sum_{m,n} c_{m,n} a_{n+u, s-m} = h_{u,s}. A = sum a_{k,l} z1^k z2^l is
// inverted on an M x M grid of the unit torus and the result is convolved with
// h; c_{m,n} is read at (-n, m). The refinement then solves the equations
// whose a indices all lie inside the table, restricted to the tap bounds.
// Residuals are max |lhs - h| / max |h| over those equations.
// IllConditionedPair when min|A| < epsilon max|A|.
SolveResult solve_coefficients(const GramTable& a, const GramTable& h, const SolveOptions& opt = {});

// max |sum c a - h| / max |h| over the equations inside the table.
double substitution_residual(const GramTable& a, const GramTable& h, const std::vector<Tap>& taps);

struct ExpansionReport {
    std::vector<double> residuals; ///< ||PHQx - sum c P U^m V^n Q x|| / ||PHQx|| per signal

    double max() const;
};

ExpansionReport verify_expansion(const Channel& H, const OperatorPair& pairP, const OperatorPair& pairQ,
                                 const std::vector<Tap>& taps, const std::vector<SampledSignal>& signals);

// Pair choices of the three canonical models:
//   tf: window [0, T] with lowpass W      ts: Mellin a0 with lowpass 1/b0
//   fs: window [T1, T2] with Mellin a0
std::pair<OperatorPair, OperatorPair> model_pairs(ModelKind kind, const ModelParams& p);

// Canonical taps through compute_grams and solve_coefficients. R defaults to
// four times the largest bound. The tables and the solve are copied out when
// the pointers are set.
CanonicalModel pairedup_taps(ModelKind kind, const Channel& H, const ModelParams& p, const TapBounds& bounds,
                             std::optional<int> R = std::nullopt, Grams* grams = nullptr,
                             SolveResult* solve = nullptr);

// Gram tables use the tap CSV layout `m,n,re,im` with k in the first column.
void write_gram_csv(std::ostream& os, const GramTable& g);
GramTable read_gram_csv(std::istream& is);
std::string gram_sidecar(const OperatorPair& pairP, const OperatorPair& pairQ, int R, int M, double epsilon_A);

} // namespace tvch
