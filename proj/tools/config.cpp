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

#include "config.hpp"

#include "tvch/io.hpp"
#include "tvch/kernel.hpp"
#include "tvch/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tvch::cli {

namespace {

std::string join_path(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> out;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.'))
        if (!part.empty() && part.front() != '[')
            out.push_back(part);
    return out;
}

} // namespace

ConfigDoc ConfigDoc::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

ConfigDoc ConfigDoc::parse(const std::string& text, const std::string& name)
{
    ConfigDoc d;
    d.name_ = name;
    d.text_ = text;
    try {
        d.root_ = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
        throw ConfigError(name + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
    if (!d.root_.is_object())
        throw ConfigError(name + ":1: config must be a JSON object");
    return d;
}

std::uint64_t ConfigDoc::hash() const
{
    return fnv1a64(root_.dump());
}

int ConfigDoc::line_of(const std::string& path) const
{
    std::size_t pos = 0;
    bool found = false;
    for (const auto& key : split_path(path)) {
        const auto at = text_.find("\"" + key + "\"", pos);
        if (at == std::string::npos)
            break;
        pos = at;
        found = true;
    }
    if (!found)
        return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
}

std::string ConfigDoc::resolve(const std::string& file) const
{
    const std::filesystem::path p(file);
    if (p.is_absolute())
        return file;
    return (std::filesystem::path(name_).parent_path() / p).string();
}

void ConfigDoc::fail(const std::string& path, const std::string& msg) const
{
    throw ConfigError(name_ + ":" + std::to_string(line_of(path)) + ": " + path + ": " + msg);
}

// ---------------------------------------------------------------------------

Section::Section(const ConfigDoc& doc, const nlohmann::json& j, std::string path)
    : doc_(&doc), j_(&j), path_(std::move(path))
{
    if (!j.is_object())
        doc.fail(path_, "expected an object");
}

bool Section::has(const std::string& key) const
{
    return j_->contains(key);
}

const nlohmann::json& Section::get(const std::string& key) const
{
    if (!j_->contains(key))
        fail(key, "missing required key");
    used_.push_back(key);
    return j_->at(key);
}

const nlohmann::json& Section::raw(const std::string& key) const
{
    return get(key);
}

void Section::fail(const std::string& key, const std::string& msg) const
{
    doc_->fail(join_path(path_, key), msg);
}

double Section::num(const std::string& key) const
{
    const auto& v = get(key);
    if (!v.is_number())
        fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        fail(key, "must be finite");
    return d;
}

double Section::num(const std::string& key, double fallback) const
{
    return has(key) ? num(key) : fallback;
}

std::optional<double> Section::opt_num(const std::string& key) const
{
    if (!has(key))
        return std::nullopt;
    return num(key);
}

double Section::positive(const std::string& key) const
{
    const double v = num(key);
    if (!(v > 0.0))
        fail(key, "must be > 0");
    return v;
}

int Section::integer(const std::string& key, int fallback) const
{
    if (!has(key))
        return fallback;
    const auto& v = get(key);
    if (!v.is_number_integer())
        fail(key, "expected an integer");
    return v.get<int>();
}

std::size_t Section::count(const std::string& key) const
{
    const auto& v = get(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        fail(key, "expected a positive integer");
    return v.get<std::size_t>();
}

std::string Section::str(const std::string& key) const
{
    const auto& v = get(key);
    if (!v.is_string())
        fail(key, "expected a string");
    return v.get<std::string>();
}

std::string Section::str(const std::string& key, const std::string& fallback) const
{
    return has(key) ? str(key) : fallback;
}

cdouble Section::complex(const std::string& key, cdouble fallback) const
{
    if (!has(key))
        return fallback;
    const auto& v = get(key);
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(key, "expected a number or [re, im]");
}

Section Section::sub(const std::string& key) const
{
    return Section(*doc_, get(key), join_path(path_, key));
}

std::vector<Section> Section::list(const std::string& key) const
{
    const auto& v = get(key);
    if (!v.is_array() || v.empty())
        fail(key, "expected a non-empty array");
    std::vector<Section> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.emplace_back(*doc_, v[i], join_path(path_, key) + ".[" + std::to_string(i) + "]");
    return out;
}

void Section::finish() const
{
    for (auto it = j_->begin(); it != j_->end(); ++it)
        if (std::find(used_.begin(), used_.end(), it.key()) == used_.end())
            fail(it.key(), "unknown key (keys carry their unit, e.g. tau0_s, W_hz)");
}

// ---------------------------------------------------------------------------

namespace {

OnePath read_path(const Section& s)
{
    const std::string kind = s.str("kind");
    OnePath p;
    p.gain = s.complex("gain", 1.0);
    if (kind == "delay") {
        p.kind = PathKind::delay_doppler;
        p.p2 = s.num("tau0_s");
    } else if (kind == "delay_doppler") {
        p.kind = PathKind::delay_doppler;
        p.p1 = s.num("theta0_hz");
        p.p2 = s.num("tau0_s");
    } else if (kind == "delay_dilation") {
        p.kind = PathKind::delay_dilation;
        p.p1 = s.positive("scale");
        p.p2 = s.num("b0_s");
    } else if (kind == "freq_scale") {
        p.kind = PathKind::freq_scale;
        p.p1 = s.num("omega0_hz");
        p.p2 = s.positive("scale");
    } else {
        s.fail("kind", "unknown path kind '" + kind + "'; expected delay, delay_doppler, delay_dilation or freq_scale");
    }
    s.finish();
    return p;
}

Rep default_view(const std::vector<OnePath>& paths)
{
    const PathKind k = paths.front().kind;
    for (const auto& p : paths)
        if (p.kind != k)
            return Rep::h;
    switch (k) {
    case PathKind::delay_doppler:
        return Rep::S;
    case PathKind::delay_dilation:
        return Rep::L;
    case PathKind::freq_scale:
        return Rep::rho;
    }
    return Rep::h;
}

} // namespace

Channel read_channel(const ConfigDoc& doc)
{
    if (!doc.root().contains("channel"))
        doc.fail("channel", "missing required section");
    Section s(doc, doc.root().at("channel"), "channel");
    Channel c;
    if (s.has("paths")) {
        std::vector<OnePath> paths;
        for (const auto& ps : s.list("paths"))
            paths.push_back(read_path(ps));
        Rep view = default_view(paths);
        if (s.has("view")) {
            try {
                view = parse_rep(s.str("view"));
            } catch (const Error& e) {
                s.fail("view", e.what());
            }
        } else if (view == Rep::h) {
            s.fail("paths", "mixed path kinds need an explicit \"view\"");
        }
        try {
            c = make_analytic(std::move(paths), view);
        } catch (const Error& e) {
            s.fail("paths", e.what());
        }
    } else if (s.has("kernel_file")) {
        const std::string file = s.str("kernel_file");
        std::optional<Rep> rep;
        if (s.has("rep")) {
            try {
                rep = parse_rep(s.str("rep"));
            } catch (const Error& e) {
                s.fail("rep", e.what());
            }
        }
        try {
            c = make_gridded(load_kernel(doc.resolve(file), rep));
        } catch (const Error& e) {
            s.fail("kernel_file", e.what());
        }
        c.provenance.push_back("kernel file " + file);
    } else {
        s.fail("paths", "channel needs \"paths\" or \"kernel_file\"");
    }
    s.finish();
    return c;
}

Axis1D read_axis(const Section& s)
{
    const double start = s.num("start");
    const double step = s.positive("step");
    const std::size_t n = s.count("count");
    s.finish();
    return make_axis(start, step, n);
}

SignalSpec read_signal(const ConfigDoc& doc)
{
    if (!doc.root().contains("signal"))
        doc.fail("signal", "missing required section");
    Section s(doc, doc.root().at("signal"), "signal");
    SignalSpec out;
    out.pulse = s.str("pulse");

    if (out.pulse == "file") {
        const std::string file = s.str("file");
        try {
            out.x = load_signal_csv(doc.resolve(file));
        } catch (const Error& e) {
            s.fail("file", e.what());
        }
    } else {
        const bool log_axis = out.pulse == "gamma0";
        Axis1D g;
        if (log_axis) {
            const double a0 = s.positive("a0");
            if (!(a0 > 1.0))
                s.fail("a0", "must be > 1");
            const double step = s.num("step_ln_s", std::log(a0) / 16.0);
            const double dur = s.positive("duration_ln_s");
            const double start = s.num("start_ln_s", -0.5 * dur);
            if (!(step > 0.0))
                s.fail("step_ln_s", "must be > 0");
            g = make_axis(start, step, static_cast<std::size_t>(std::llround(dur / step)) + 1);
            const int shift = s.integer("dilation_power", 0);
            Waveform w = apply(op_power(dilate_op(a0), shift), gamma0_waveform(a0));
            out.x = sample(w, g, SignalAxis::log_time);
        } else {
            const double dur = s.positive("duration_s");
            const std::optional<double> W = s.opt_num("W_hz");
            if (W && !(*W > 0.0))
                s.fail("W_hz", "must be > 0");
            double step = 0.0;
            if (s.has("step_s"))
                step = s.positive("step_s");
            else if (W)
                step = 1.0 / (8.0 * *W);
            else
                s.fail("step_s", "set step_s or W_hz");
            const double start = s.num("start_s", -0.5 * dur);
            g = make_axis(start, step, static_cast<std::size_t>(std::llround(dur / step)) + 1);
            const double c = s.num("center_s", 0.0);
            if (out.pulse == "sinc") {
                if (!W)
                    s.fail("W_hz", "sinc pulses need W_hz");
                out.x = sample(apply(translate_op(c), sinc_waveform(*W)), g);
            } else if (out.pulse == "gaussian") {
                const double sd = s.positive("sigma_s");
                const double f = s.num("carrier_hz", 0.0);
                out.x = sample_function(g, [&](double t) {
                    const double z = (t - c) / sd;
                    return std::exp(-0.5 * z * z) * cis(f * t);
                });
            } else if (out.pulse == "zero") {
                out.x = make_signal(g);
            } else {
                s.fail("pulse", "unknown pulse '" + out.pulse + "'; expected sinc, gaussian, gamma0, zero or file");
            }
        }
    }
    if (s.has("noise")) {
        Section n = s.sub("noise");
        out.snr_db = n.num("snr_db");
        n.finish();
    }
    s.finish();
    return out;
}

ModelSpec read_model(const ConfigDoc& doc)
{
    if (!doc.root().contains("model"))
        doc.fail("model", "missing required section");
    Section s(doc, doc.root().at("model"), "model");
    ModelSpec m;
    const std::string kind = s.str("kind");
    try {
        m.kind = parse_model_kind(kind);
    } catch (const Error& e) {
        s.fail("kind", e.what());
    }
    ModelParams& p = m.params;
    switch (m.kind) {
    case ModelKind::tf:
        p.T = s.positive("T_s");
        p.W = s.positive("W_hz");
        p.Tm = s.num("Tm_s", 0.0);
        p.Bd = s.num("Bd_hz", 0.0);
        if (p.Tm < 0.0)
            s.fail("Tm_s", "must be >= 0");
        if (p.Bd < 0.0)
            s.fail("Bd_hz", "must be >= 0");
        break;
    case ModelKind::ts:
        p.a0 = s.positive("a0");
        p.b0 = s.positive("b0_s");
        if (!(p.a0 > 1.0))
            s.fail("a0", "must be > 1");
        break;
    case ModelKind::fs:
        p.a0 = s.positive("a0");
        p.T1 = s.num("T1_s");
        p.T2 = s.num("T2_s");
        if (!(p.a0 > 1.0))
            s.fail("a0", "must be > 1");
        if (!(p.T1 > 0.0 && p.T2 > p.T1))
            s.fail("T2_s", "need 0 < T1_s < T2_s");
        break;
    }
    if (s.has("bounds")) {
        Section b = s.sub("bounds");
        TapBounds tb;
        tb.m_min = b.integer("m_min", tb.m_min);
        tb.m_max = b.integer("m_max", tb.m_max);
        tb.n_min = b.integer("n_min", tb.n_min);
        tb.n_max = b.integer("n_max", tb.n_max);
        b.finish();
        try {
            tb.validate();
        } catch (const Error& e) {
            s.fail("bounds", e.what());
        }
        m.bounds = tb;
    }
    m.doublings = s.integer("truncation_doublings", 0);
    if (m.doublings < 0 || m.doublings > 4)
        s.fail("truncation_doublings", "must be in [0, 4]");
    if (s.has("R")) {
        m.R = s.integer("R", 0);
        if (*m.R < 1)
            s.fail("R", "must be >= 1");
    }
    s.finish();
    return m;
}

Axis1D read_observation(const ConfigDoc& doc, const ModelSpec& m, const SampledSignal& x)
{
    if (doc.root().contains("observation")) {
        Section s(doc, doc.root().at("observation"), "observation");
        const double start = s.num("start_s");
        const double step = s.positive("step_s");
        const std::size_t n = s.count("count");
        s.finish();
        return make_axis(start, step, n);
    }
    // time-axis step of the input, or 1/64 s for log-time inputs
    const double step = x.axis == SignalAxis::time ? x.dt : 1.0 / 64.0;
    auto window = [&](double lo, double hi) {
        return make_axis(lo, step, static_cast<std::size_t>(std::llround((hi - lo) / step)));
    };
    switch (m.kind) {
    case ModelKind::tf:
        return window(0.0, m.params.T);
    case ModelKind::fs:
        return window(m.params.T1, m.params.T2);
    case ModelKind::ts:
        break;
    }
    if (x.axis != SignalAxis::time)
        doc.fail("observation", "log-time inputs need an explicit observation grid");
    return x.grid();
}

} // namespace tvch::cli
