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

#include <string>
#include <vector>

namespace tvch {

struct CheckResult {
    std::string check;
    double max_deviation = 0.0; ///< +inf when the check threw
    double tolerance = 0.0;
    bool pass = false;
    std::string note; ///< error text or extra context, may be empty
};

struct ValidationReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const;
    // {"suite", "pass", "checks": [{check, max_deviation, tolerance, pass[, note]}]}
    std::string to_json() const;
};

// signals, channels, sysfuncs, canonical, pairedup, all
const std::vector<std::string>& validation_suites();

// InvalidArgument for an unknown suite. Checks never throw; failures are
// reported with pass = false.
ValidationReport run_validation(const std::string& suite);

} // namespace tvch
