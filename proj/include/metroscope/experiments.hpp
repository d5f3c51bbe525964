// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace metroscope::experiments {

using Json = nlohmann::json;
using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// One acceptance condition evaluated by an experiment. Soft checks are
/// reported but never change the exit status.
struct Check {
    std::string name;
    bool passed;
    std::string detail;
    bool soft = false;
};

struct Result {
    Table table;
    std::vector<Check> checks;

    bool hard_checks_pass() const;
};

struct Info {
    std::string name;
    std::string summary;
    /// CSV column documentation shown in --help.
    std::string columns;
    /// Parameter names with their defaults; the type of each default is the
    /// type the parameter must have.
    Json defaults;
};

const std::vector<Info>& catalogue();
const Info& info(const std::string& name);

/// Merges defaults, a config object and overrides (later wins). Throws
/// ArgumentError on unknown keys or type mismatches. Run-level keys
/// (workers, out, check) are not parameters and must be removed first.
Json resolve_parameters(const std::string& name, const Json& config, const Json& overrides);

/// Converts command-line text to the type of `default_value`. Lists are
/// comma-separated; booleans accept true/false/1/0.
Json parse_override(const Json& default_value, const std::string& text);

/// Runs an experiment on resolved parameters with `workers` Monte Carlo threads.
Result run(const std::string& name, const Json& params, int workers);

/// RFC-4180 CSV with a header row; doubles printed with %.17g.
void write_csv(std::ostream& out, const Table& table);

/// Sidecar document with schema "metroscope-result/1".
Json sidecar(const std::string& name, const Json& params, const Result& result, double wall_seconds,
             int workers);

/// git-describe-style build version.
const char* version();

}  // namespace metroscope::experiments
