// Copyright 2026 The ionsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ionsel/cli/commands.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ionsel::cli::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ionsel::cli::ConfigError("cannot write output file '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = ionsel::cli;
    CLI::App app{"Selective Raman interactions on a trapped ion: protocols, Wigner scans and design checks"};
    app.set_version_flag("--version", std::string("ionsel ") + ionsel::kVersion);
    std::string command, config_path, out_path;
    std::uint64_t seed = 0;
    app.add_option("command", command, "rabi | fock | cool | measure | wigner | cpg | design")
        ->required()
        ->check(CLI::IsMember(cli::command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_path, "result file (default: config 'output', else stdout)");
    auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitConfig;
    }

    try {
        cli::RunOptions opt;
        if (*seed_opt) opt.seed = seed;
        opt.threads = ionsel::default_thread_count();
        cli::RunResult res = cli::run_command(command, slurp(config_path), opt);
        emit(res.text, !out_path.empty() ? out_path : res.output_path.value_or(""));
        return cli::kExitOk;
    } catch (const ionsel::Error& e) {
        std::cerr << "ionsel " << command << ": " << e.what() << "\n";
        return cli::exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "ionsel " << command << ": internal error: " << e.what() << "\n";
        return cli::kExitInternal;
    }
}
