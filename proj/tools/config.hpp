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
#include "tvch/channel.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvch::cli {

// Bad or inconsistent configuration. The message carries file:line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON document plus the text it came from, for line numbers in errors.
class ConfigDoc {
public:
    static ConfigDoc load(const std::string& path);
    static ConfigDoc parse(const std::string& text, const std::string& name);

    const nlohmann::json& root() const { return root_; }
    const std::string& name() const { return name_; }
    // FNV-1a over the compact dump; key order is normalised by the parser.
    std::uint64_t hash() const;

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const;
    int line_of(const std::string& path) const;
    // Relative file names are taken relative to the config file.
    std::string resolve(const std::string& file) const;

private:
    std::string name_;
    std::string text_;
    nlohmann::json root_;
};

// Typed access to one object of the document. Every key must be read or
// listed as known, otherwise finish() reports it.
class Section {
public:
    Section(const ConfigDoc& doc, const nlohmann::json& j, std::string path);

    bool has(const std::string& key) const;
    double num(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    double positive(const std::string& key) const;
    std::optional<double> opt_num(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    std::size_t count(const std::string& key) const;
    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    cdouble complex(const std::string& key, cdouble fallback) const;
    Section sub(const std::string& key) const;
    std::vector<Section> list(const std::string& key) const;
    const nlohmann::json& raw(const std::string& key) const;

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
    void finish() const;
    const std::string& path() const { return path_; }

private:
    const nlohmann::json& get(const std::string& key) const;

    const ConfigDoc* doc_;
    const nlohmann::json* j_;
    std::string path_;
    mutable std::vector<std::string> used_;
};

struct SignalSpec {
    SampledSignal x;
    std::string pulse;
    std::optional<double> snr_db;
};

struct ModelSpec {
    ModelKind kind = ModelKind::tf;
    ModelParams params;
    std::optional<TapBounds> bounds;
    int doublings = 0;
    std::optional<int> R;
};

// Each takes the top-level document and reads its own section.
Channel read_channel(const ConfigDoc& doc);
SignalSpec read_signal(const ConfigDoc& doc);
ModelSpec read_model(const ConfigDoc& doc);
Axis1D read_axis(const Section& s);
// Observation grid; defaults follow the model window.
Axis1D read_observation(const ConfigDoc& doc, const ModelSpec& m, const SampledSignal& x);

} // namespace tvch::cli
