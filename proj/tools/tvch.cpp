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
#include "tvch/pairedup.hpp"
#include "tvch/sysfuncs.hpp"
#include "tvch/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace tvch::cli {
namespace {

enum Exit { ok = 0, check_failed = 1, config_error = 2, numerical_error = 3 };

struct Options {
    std::string config;
    std::string out = ".";
    std::string method = "direct";
    std::uint64_t seed = 1;
    bool verbose = false;
    std::string suite = "all";
};

struct Run {
    const Options& opt;
    std::string command;
    std::string config_hash;

    void log(const std::string& msg) const
    {
        if (opt.verbose)
            std::cerr << "tvch " << command << ": " << msg << "\n";
    }

    ordered_json base(const char* module) const
    {
        ordered_json j;
        j["config_hash"] = config_hash;
        j["library_version"] = version();
        j["modules"] = {"cli", module};
        j["command"] = command;
        j["method"] = opt.method;
        j["seed"] = opt.seed;
        return j;
    }

    fs::path path(const std::string& name) const { return fs::path(opt.out) / name; }
};

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream os(p);
    if (!os)
        throw InvalidArgument("cannot write " + p.string());
    os << text << "\n";
}

ordered_json grid_json(const SampledSignal& x)
{
    return {{"axis", x.axis == SignalAxis::time ? "time" : "log_time"},
            {"unit", x.axis == SignalAxis::time ? "s" : "ln s"},
            {"start", x.t0},
            {"step", x.dt},
            {"count", x.size()}};
}

void save_signal(const Run& run, const std::string& name, const SampledSignal& x, const char* module)
{
    const fs::path p = run.path(name);
    save_signal_csv(p.string(), x);
    ordered_json j = run.base(module);
    j["grid"] = grid_json(x);
    write_text(p.string() + ".json", j.dump(2));
    run.log("wrote " + p.string());
}

TapBounds default_bounds(const ModelSpec& m)
{
    if (m.bounds)
        return *m.bounds;
    TapBounds b;
    if (m.kind == ModelKind::tf) {
        const int mm = static_cast<int>(std::ceil(m.params.T * m.params.Bd - 1e-9));
        b.m_min = -mm;
        b.m_max = mm;
        b.n_min = 0;
        b.n_max = static_cast<int>(std::ceil(m.params.W * m.params.Tm - 1e-9));
    }
    return b;
}

Channel as_model_input(const Channel& c, ModelKind kind)
{
    if (c.analytic())
        return c;
    if (kind == ModelKind::tf && c.rep != Rep::S && is_narrowband(c.rep))
        return convert_narrowband(c, Rep::S);
    return c;
}

CanonicalModel direct_taps(const Channel& c, const ModelSpec& m, const std::optional<TapBounds>& bounds)
{
    const ModelParams& p = m.params;
    switch (m.kind) {
    case ModelKind::tf:
        return tf_taps(c, p.T, p.W, p.Tm, p.Bd, bounds);
    case ModelKind::ts:
        return ts_taps(c, p.a0, p.b0, bounds.value_or(TapBounds{}));
    case ModelKind::fs:
        return fs_taps(c, p.a0, p.T1, p.T2, bounds.value_or(TapBounds{}));
    }
    throw InvalidArgument("unknown model kind");
}

CanonicalModel taps_for(const Run& run, const Channel& c, const ModelSpec& m, const TapBounds* level_bounds,
                        Grams* grams = nullptr, SolveResult* solve = nullptr)
{
    const Channel in = as_model_input(c, m.kind);
    if (run.opt.method == "pairedup") {
        const TapBounds b = level_bounds ? *level_bounds : default_bounds(m);
        return pairedup_taps(m.kind, in, m.params, b, m.R, grams, solve);
    }
    std::optional<TapBounds> b = m.bounds;
    if (level_bounds)
        b = *level_bounds;
    return direct_taps(in, m, b);
}

void echo_warnings(const std::vector<std::string>& w)
{
    for (const auto& s : w)
        std::cerr << "warning: " << s << "\n";
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Run& run, const ConfigDoc& doc)
{
    const Channel c = read_channel(doc);
    const SignalSpec sig = read_signal(doc);
    const ModelSpec m = read_model(doc);
    const Axis1D obs = read_observation(doc, m, sig.x);

    save_signal(run, "input.csv", sig.x, "signals");
    const SampledSignal y = apply_channel(c, sig.x, obs, SignalAxis::time);
    save_signal(run, "continuous.csv", y, "channels");
    const double y_energy = y.energy();

    ordered_json levels = ordered_json::array();
    std::vector<std::string> warnings = c.warnings;
    TapBounds b = default_bounds(m);
    for (int k = 0; k <= m.doublings; ++k) {
        const CanonicalModel model = taps_for(run, c, m, &b);
        warnings.insert(warnings.end(), model.warnings.begin(), model.warnings.end());
        ApplyReport rep;
        const SampledSignal yk = canonical_apply(model, sig.x, obs, &rep, SignalAxis::time);
        warnings.insert(warnings.end(), rep.warnings.begin(), rep.warnings.end());
        save_signal(run, "canonical_" + std::to_string(k) + ".csv", yk, "canonical");

        ordered_json lv;
        lv["level"] = k;
        lv["bounds"] = {{"m_min", b.m_min}, {"m_max", b.m_max}, {"n_min", b.n_min}, {"n_max", b.n_max}};
        lv["taps"] = model.taps.size();
        if (y_energy > 0.0) {
            lv["error"] = relative_error(yk, y);
            lv["status"] = "ok";
        } else {
            lv["error"] = nullptr;
            lv["status"] = "not_applicable";
        }
        lv["range_deviation"] = rep.range_deviation;
        levels.push_back(lv);
        run.log("level " + std::to_string(k) + ": " + std::to_string(model.taps.size()) + " taps");
        b = b.doubled();
    }

    ordered_json metrics = run.base("canonical");
    metrics["model"] = model_kind_name(m.kind);
    metrics["observation"] = grid_json(y);
    metrics["levels"] = levels;

    if (sig.snr_db) {
        std::mt19937_64 rng(run.opt.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double p_sig = y_energy / (static_cast<double>(y.size()) * y.dt);
        const double sd = std::sqrt(p_sig / std::pow(10.0, *sig.snr_db / 10.0) / 2.0);
        SampledSignal r = y;
        for (auto& v : r.samples)
            v += cdouble(sd * gauss(rng), sd * gauss(rng));
        save_signal(run, "received.csv", r, "channels");
        metrics["noise"] = {{"snr_db", *sig.snr_db}, {"sigma_per_component", sd}};
    }
    metrics["warnings"] = warnings;
    echo_warnings(warnings);
    write_text(run.path("metrics.json"), metrics.dump(2));
    return ok;
}

void save_gram(const Run& run, const std::string& name, const GramTable& g, const std::string& sidecar,
               const std::string& method)
{
    const fs::path p = run.path(name);
    std::ofstream os(p);
    if (!os)
        throw InvalidArgument("cannot write " + p.string());
    write_gram_csv(os, g);
    ordered_json j = ordered_json::parse(sidecar);
    j.update(run.base("pairedup"));
    j["gram_method"] = method;
    write_text(p.string() + ".json", j.dump(2));
}

int cmd_decompose(const Run& run, const ConfigDoc& doc)
{
    const Channel c = read_channel(doc);
    const ModelSpec m = read_model(doc);
    Grams g;
    SolveResult s;
    const CanonicalModel model = taps_for(run, c, m, m.bounds ? &*m.bounds : nullptr, &g, &s);
    echo_warnings(c.warnings);
    echo_warnings(model.warnings);

    ordered_json extra = run.base(run.opt.method == "pairedup" ? "pairedup" : "canonical");
    if (run.opt.method == "pairedup") {
        extra["solve"] = {{"M", s.M},
                          {"R", g.a.R},
                          {"min_abs_A", s.min_abs_A},
                          {"max_abs_A", s.max_abs_A},
                          {"recipe_residual", s.recipe_residual},
                          {"residual", s.residual}};
        const auto pairs = model_pairs(m.kind, m.params);
        const std::string sc = gram_sidecar(pairs.first, pairs.second, g.a.R, s.M, s.epsilon_A);
        save_gram(run, "gram_a.csv", g.a, sc, g.method);
        save_gram(run, "gram_h.csv", g.h, sc, g.method);
    }
    save_taps(run.path("taps.csv").string(), model, extra.dump());
    run.log("wrote " + std::to_string(model.taps.size()) + " taps");
    return ok;
}

// ---------------------------------------------------------------------------

std::vector<Rep> valid_targets(Rep from)
{
    std::vector<Rep> out;
    auto add = [&](Rep r) {
        if (r != from && std::find(out.begin(), out.end(), r) == out.end())
            out.push_back(r);
    };
    if (is_narrowband(from)) {
        const auto nb = reachable_targets(from);
        for (Rep r : nb)
            add(r);
        if (std::find(nb.begin(), nb.end(), Rep::S) != nb.end() || from == Rep::S)
            add(Rep::L);
        if (from == Rep::h)
            add(Rep::rho);
    } else if (from == Rep::L) {
        for (Rep r : {Rep::k0, Rep::h, Rep::S, Rep::L2})
            add(r);
    } else if (from == Rep::rho) {
        add(Rep::h);
    }
    return out;
}

std::string rep_list(const std::vector<Rep>& reps)
{
    std::string s;
    for (Rep r : reps)
        s += (s.empty() ? "" : ", ") + std::string(rep_name(r));
    return s.empty() ? "(none)" : s;
}

int cmd_convert(const Run& run, const ConfigDoc& doc)
{
    const Channel c = read_channel(doc);
    if (!doc.root().contains("convert"))
        doc.fail("convert", "missing required section");
    Section s(doc, doc.root().at("convert"), "convert");
    Rep target{};
    try {
        target = parse_rep(s.str("target"));
    } catch (const Error& e) {
        s.fail("target", e.what());
    }
    std::optional<Axis1D> ax1, ax2, t_axis;
    if (s.has("axis1"))
        ax1 = read_axis(s.sub("axis1"));
    if (s.has("axis2"))
        ax2 = read_axis(s.sub("axis2"));
    if (s.has("t_axis"))
        t_axis = read_axis(s.sub("t_axis"));
    const double eps_a = s.num("eps_a", 0.01);
    s.finish();

    auto need_axes = [&] {
        if (!ax1 || !ax2)
            s.fail(ax1 ? "axis2" : "axis1", std::string("target ") + rep_name(target) + " needs axis1 and axis2");
    };

    const Rep from = c.rep;
    Channel out;
    if (c.analytic()) {
        need_axes();
        out = make_gridded(sample_closed_form(c, target, *ax1, *ax2));
    } else {
        const auto targets = valid_targets(from);
        if (std::find(targets.begin(), targets.end(), target) == targets.end())
            throw WrongFamily(std::string("cannot convert ") + rep_name(from) + " to " + rep_name(target) +
                              "; valid targets: " + rep_list(targets));
        if (is_narrowband(from) && is_narrowband(target)) {
            out = convert_narrowband(c, target);
        } else if (target == Rep::L) {
            need_axes();
            const Channel S = from == Rep::S ? c : convert_narrowband(c, Rep::S);
            LFromSOptions o;
            o.a = *ax1;
            o.b = *ax2;
            o.eps_a = eps_a;
            out = narrowband_to_wideband(S, o);
        } else if (target == Rep::rho) {
            need_axes();
            out = h_to_rho(c, *ax1, *ax2);
        } else if (from == Rep::rho) {
            need_axes();
            out = rho_to_h(c, *ax1, *ax2);
        } else if (target == Rep::L2) {
            out = wideband_L2(c);
        } else {
            need_axes();
            out = wideband_to_narrowband(c, target, *ax1, *ax2, t_axis);
        }
    }
    const std::vector<std::string> prov{rep_name(from), rep_name(target)};
    std::vector<std::string> warnings = c.warnings;
    warnings.insert(warnings.end(), out.warnings.begin(), out.warnings.end());
    echo_warnings(warnings);
    ordered_json extra = run.base("sysfuncs");
    extra.erase("method");
    extra["source"] = c.analytic() ? "closed form" : "kernel";
    if (!c.analytic())
        extra["conversion_path"] = out.provenance;
    save_kernel(run.path("kernel.csv").string(), out.grid(), prov, warnings, extra.dump());
    run.log(std::string("wrote ") + rep_name(target) + " kernel");
    return ok;
}

int cmd_validate(const Run& run)
{
    const ValidationReport r = run_validation(run.opt.suite);
    const std::string text = r.to_json();
    std::cout << text << "\n";
    if (!run.opt.out.empty() && run.opt.out != "-")
        write_text(run.path("validate.json"), text);
    return r.pass() ? ok : check_failed;
}

int dispatch(const Options& opt, const std::string& command)
{
    Run run{opt, command, ""};
    if (command == "validate") {
        if (!opt.out.empty() && opt.out != "-")
            fs::create_directories(opt.out);
        return cmd_validate(run);
    }
    if (opt.config.empty())
        throw ConfigError(command + ": --config is required");
    const ConfigDoc doc = ConfigDoc::load(opt.config);
    for (auto it = doc.root().begin(); it != doc.root().end(); ++it) {
        static const std::vector<std::string> known{"channel", "signal", "model", "observation", "convert"};
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            doc.fail(it.key(), "unknown section");
    }
    run.config_hash = hex64(doc.hash());
    fs::create_directories(opt.out);
    if (command == "simulate")
        return cmd_simulate(run, doc);
    if (command == "decompose")
        return cmd_decompose(run, doc);
    return cmd_convert(run, doc);
}

} // namespace
} // namespace tvch::cli

int main(int argc, char** argv)
{
    using namespace tvch::cli;
    CLI::App app{"Time-varying channel models: simulate, decompose, convert, validate"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool config) {
        if (config)
            sub->add_option("--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_flag("--verbose,-v", opt.verbose, "progress on stderr");
    };
    auto add_method = [&](CLI::App* sub) {
        sub->add_option("--method", opt.method, "tap computation")
            ->check(CLI::IsMember({"direct", "pairedup"}))
            ->capture_default_str();
    };

    auto* sim = app.add_subcommand("simulate", "continuous and canonical outputs for one input");
    add_common(sim, true);
    add_method(sim);
    sim->add_option("--seed", opt.seed, "noise seed")->capture_default_str();

    auto* dec = app.add_subcommand("decompose", "canonical taps of a channel");
    add_common(dec, true);
    add_method(dec);

    auto* conv = app.add_subcommand("convert", "convert a kernel to another representation");
    add_common(conv, true);

    auto* val = app.add_subcommand("validate", "run built-in numerical checks");
    add_common(val, false);
    val->add_option("suite", opt.suite, "suite name")
        ->check(CLI::IsMember(tvch::validation_suites()))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(opt, command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const tvch::IllConditionedPair& e) {
        std::cerr << "numerical error: " << e.what() << " (theta1 = " << e.theta1() << ", theta2 = " << e.theta2()
                  << ")\n";
        return numerical_error;
    } catch (const tvch::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return numerical_error;
    } catch (const tvch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    }
}
