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

#include "tvch/kernel.hpp"

#include "tvch/io.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tvch {

namespace {

struct RepInfo {
    Rep rep;
    const char* name;
    AxisRole a1;
    AxisRole a2;
};

const RepInfo rep_table[] = {
    {Rep::k0, "k0", {"t", "s"}, {"s", "s"}},
    {Rep::k1, "k1", {"theta", "Hz"}, {"s", "s"}},
    {Rep::k2, "k2", {"t", "s"}, {"nu", "Hz"}},
    {Rep::k3, "k3", {"theta", "Hz"}, {"nu", "Hz"}},
    {Rep::h, "h", {"t", "s"}, {"tau", "s"}},
    {Rep::S, "S", {"theta", "Hz"}, {"tau", "s"}},
    {Rep::T, "T", {"t", "s"}, {"nu", "Hz"}},
    {Rep::H, "H", {"theta", "Hz"}, {"nu", "Hz"}},
    {Rep::G, "G", {"theta", "Hz"}, {"nu", "Hz"}},
    {Rep::V, "V", {"tau", "s"}, {"nu", "Hz"}},
    {Rep::M, "M", {"theta", "Hz"}, {"t", "s"}},
    {Rep::g, "g", {"t", "s"}, {"tau", "s"}},
    {Rep::L, "L", {"a", "1"}, {"b", "s"}},
    {Rep::L2, "L2", {"a", "1"}, {"theta", "Hz"}},
    {Rep::rho, "rho", {"omega", "Hz"}, {"a", "1"}},
};

const RepInfo& info(Rep r)
{
    for (const auto& e : rep_table)
        if (e.rep == r)
            return e;
    throw InvalidArgument("unknown representation");
}

nlohmann::json axis_json(const Axis1D& a, AxisRole role)
{
    return {{"role", role.name}, {"unit", role.unit}, {"start", a.start}, {"step", a.step}, {"count", a.count}};
}

} // namespace

const char* rep_name(Rep r)
{
    return info(r).name;
}

Rep parse_rep(const std::string& name)
{
    for (const auto& e : rep_table)
        if (name == e.name)
            return e.rep;
    throw InvalidArgument("unknown representation '" + name + "'");
}

bool is_narrowband(Rep r)
{
    return r != Rep::L && r != Rep::L2 && r != Rep::rho;
}

const std::vector<Rep>& all_reps()
{
    static const std::vector<Rep> v = [] {
        std::vector<Rep> out;
        for (const auto& e : rep_table)
            out.push_back(e.rep);
        return out;
    }();
    return v;
}

std::pair<AxisRole, AxisRole> axis_roles(Rep r)
{
    const auto& e = info(r);
    return {e.a1, e.a2};
}

void KernelGrid2D::validate() const
{
    if (axis1.count == 0 || axis2.count == 0)
        throw GridError("kernel grid is empty");
    if (!(axis1.step > 0.0) || !(axis2.step > 0.0))
        throw GridError("kernel axes must be strictly increasing");
    if (values.size() != axis1.count * axis2.count)
        throw GridError("kernel value count does not match its axes");
}

KernelGrid2D make_kernel(Rep rep, const Axis1D& axis1, const Axis1D& axis2)
{
    KernelGrid2D k;
    k.rep = rep;
    k.axis1 = axis1;
    k.axis2 = axis2;
    k.values.assign(axis1.count * axis2.count, cdouble{});
    return k;
}

double trapezoid_weight(const Axis1D& a, std::size_t i)
{
    if (a.count < 2)
        return a.step;
    return (i == 0 || i + 1 == a.count) ? 0.5 * a.step : a.step;
}

void write_kernel_csv(std::ostream& os, const KernelGrid2D& k)
{
    k.validate();
    os << "axis1,axis2,re,im\n";
    for (std::size_t i = 0; i < k.axis1.count; ++i)
        for (std::size_t j = 0; j < k.axis2.count; ++j) {
            const cdouble v = k.at(i, j);
            os << format_double(k.axis1.at(i)) << ',' << format_double(k.axis2.at(j)) << ','
               << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
}

KernelGrid2D read_kernel_csv(std::istream& is, Rep rep)
{
    std::string line;
    if (!std::getline(is, line) || trim(line) != "axis1,axis2,re,im")
        throw InvalidArgument("kernel CSV header must be axis1,axis2,re,im");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        rows.push_back(split_csv_doubles(line, 4, lineno));
    }
    if (rows.empty())
        throw InvalidArgument("kernel CSV has no rows");
    std::size_t n2 = 1;
    while (n2 < rows.size() && rows[n2][0] == rows[0][0])
        ++n2;
    if (rows.size() % n2 != 0)
        throw InvalidArgument("kernel CSV is not a dense rectangular grid");
    const std::size_t n1 = rows.size() / n2;
    auto fit = [](double first, double last, std::size_t n) {
        return n > 1 ? (last - first) / static_cast<double>(n - 1) : 1.0;
    };
    Axis1D a1 = make_axis(rows[0][0], fit(rows[0][0], rows[(n1 - 1) * n2][0], n1), n1);
    Axis1D a2 = make_axis(rows[0][1], fit(rows[0][1], rows[n2 - 1][1], n2), n2);
    KernelGrid2D k = make_kernel(rep, a1, a2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const auto& r = rows[i * n2 + j];
            if (std::abs(r[0] - a1.at(i)) > 1e-9 * a1.step || std::abs(r[1] - a2.at(j)) > 1e-9 * a2.step)
                throw InvalidArgument("kernel CSV grid is not uniform at row " + std::to_string(i * n2 + j + 2));
            k.at(i, j) = {r[2], r[3]};
        }
    return k;
}

std::string kernel_sidecar(const KernelGrid2D& k, const std::vector<std::string>& provenance,
                           const std::vector<std::string>& warnings, const std::string& extra)
{
    auto roles = axis_roles(k.rep);
    nlohmann::json j;
    j["representation"] = rep_name(k.rep);
    j["axis1"] = axis_json(k.axis1, roles.first);
    j["axis2"] = axis_json(k.axis2, roles.second);
    j["provenance"] = provenance;
    j["warnings"] = warnings;
    j["library_version"] = version();
    auto e = nlohmann::json::parse(extra);
    if (!e.is_object())
        throw InvalidArgument("sidecar extra fields must be a JSON object");
    for (auto it = e.begin(); it != e.end(); ++it)
        j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

Rep sidecar_rep(const std::string& sidecar_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(sidecar_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("kernel sidecar is not valid JSON: ") + e.what());
    }
    if (!j.contains("representation") || !j["representation"].is_string())
        throw InvalidArgument("kernel sidecar has no representation");
    return parse_rep(j["representation"].get<std::string>());
}

void save_kernel(const std::string& path, const KernelGrid2D& k, const std::vector<std::string>& provenance,
                 const std::vector<std::string>& warnings, const std::string& extra)
{
    std::ofstream os(path);
    if (!os)
        throw InvalidArgument("cannot write " + path);
    write_kernel_csv(os, k);
    std::ofstream js(path + ".json");
    if (!js)
        throw InvalidArgument("cannot write " + path + ".json");
    js << kernel_sidecar(k, provenance, warnings, extra);
}

KernelGrid2D load_kernel(const std::string& path, std::optional<Rep> fallback)
{
    std::ifstream is(path);
    if (!is)
        throw InvalidArgument("cannot read " + path);
    std::ifstream js(path + ".json");
    Rep rep;
    if (js) {
        std::stringstream ss;
        ss << js.rdbuf();
        rep = sidecar_rep(ss.str());
    } else if (fallback) {
        rep = *fallback;
    } else {
        throw InvalidArgument("no sidecar for " + path + " and no representation given");
    }
    return read_kernel_csv(is, rep);
}

} // namespace tvch
