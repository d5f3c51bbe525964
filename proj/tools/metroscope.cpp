// Copyright 2026 The metroscope Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver: one subcommand per experiment. Results go to stdout as
// CSV, or to --out PATH with a PATH.json sidecar. Exit status is 0 on success,
// 2 when --check is given and a hard check fails, 1 on any error.

#include "metroscope/common.hpp"
#include "metroscope/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace ex = metroscope::experiments;

namespace {

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::map<std::string, std::optional<std::string>> values;
    std::map<std::string, bool> flags;
    std::string config_path;
    std::string out_path;
    bool check = false;
    int workers = 0;
};

std::string type_hint(const ex::Json& v)
{
    if (v.is_array()) {
        return "LIST";
    }
    if (v.is_number_integer()) {
        return "INT";
    }
    if (v.is_number_float()) {
        return "FLOAT";
    }
    return "TEXT";
}

void add_command(CLI::App& root, Command& cmd, const ex::Info& info)
{
    cmd.name = info.name;
    cmd.app = root.add_subcommand(info.name, info.summary);
    cmd.app->footer("CSV columns: " + info.columns);
    for (auto it = info.defaults.begin(); it != info.defaults.end(); ++it) {
        const std::string key = it.key();
        if (it.value().is_boolean()) {
            cmd.app->add_flag("--" + key, cmd.flags[key], "default " + it.value().dump());
            continue;
        }
        auto* opt = cmd.app->add_option("--" + key, cmd.values[key], "default " + it.value().dump());
        opt->type_name(type_hint(it.value()));
    }
    cmd.app->add_option("--config", cmd.config_path, "JSON file with parameter values")->check(CLI::ExistingFile);
    cmd.app->add_option("--out", cmd.out_path, "write CSV to PATH and metadata to PATH.json");
    cmd.app->add_flag("--check", cmd.check, "exit with status 2 if a hard check fails");
    cmd.app->add_option("--workers", cmd.workers, "Monte Carlo threads (0 = all cores)")->check(CLI::NonNegativeNumber);
}

int execute(Command& cmd)
{
    const ex::Info& info = ex::info(cmd.name);
    ex::Json config = ex::Json::object();
    if (!cmd.config_path.empty()) {
        std::ifstream in(cmd.config_path);
        config = ex::Json::parse(in);
        if (!config.is_object()) {
            throw metroscope::ArgumentError("config file must hold a JSON object");
        }
        // run-level settings; the command line wins
        if (config.contains("workers") && cmd.app->count("--workers") == 0) {
            cmd.workers = config["workers"].get<int>();
        }
        if (config.contains("out") && cmd.out_path.empty()) {
            cmd.out_path = config["out"].get<std::string>();
        }
        if (config.contains("check") && !cmd.check) {
            cmd.check = config["check"].get<bool>();
        }
        config.erase("workers");
        config.erase("out");
        config.erase("check");
    }
    ex::Json overrides = ex::Json::object();
    for (const auto& [key, text] : cmd.values) {
        if (text) {
            overrides[key] = ex::parse_override(info.defaults[key], *text);
        }
    }
    for (const auto& [key, set] : cmd.flags) {
        if (set) {
            overrides[key] = true;
        }
    }
    const ex::Json params = ex::resolve_parameters(cmd.name, config, overrides);

    const auto start = std::chrono::steady_clock::now();
    const ex::Result result = ex::run(cmd.name, params, cmd.workers);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (cmd.out_path.empty()) {
        ex::write_csv(std::cout, result.table);
    } else {
        std::ofstream csv(cmd.out_path, std::ios::binary);
        if (!csv) {
            throw metroscope::ArgumentError("cannot write " + cmd.out_path);
        }
        ex::write_csv(csv, result.table);
        std::ofstream meta(cmd.out_path + ".json");
        meta << ex::sidecar(cmd.name, params, result, seconds, cmd.workers).dump(2) << '\n';
        if (!csv || !meta) {
            throw metroscope::Error("failed writing results to " + cmd.out_path);
        }
    }
    for (const ex::Check& c : result.checks) {
        std::cerr << (c.passed ? "PASS" : (c.soft ? "SOFT-FAIL" : "FAIL")) << "  " << c.name << "  (" << c.detail
                  << ")\n";
    }
    if (cmd.check && !result.hard_checks_pass()) {
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App root{"metroscope: random-state metrology experiments"};
    root.require_subcommand(1);
    root.set_version_flag("--version", std::string(ex::version()));
    std::vector<Command> commands(ex::catalogue().size());
    for (std::size_t i = 0; i < commands.size(); ++i) {
        add_command(root, commands[i], ex::catalogue()[i]);
    }
    try {
        root.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = root.exit(e);
        return code == 0 ? 0 : 1;
    }
    for (Command& cmd : commands) {
        if (cmd.app->parsed()) {
            try {
                return execute(cmd);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 1;
            }
        }
    }
    return 1;
}
