// Copyright 2026 The qcomm Authors
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

// Command-line scenario runner.
//
//   qcomm run <file|name>... [--out DIR] [--jobs N]
//   qcomm list
//   qcomm describe <name>
//   qcomm validate <file>
//
// Exit codes: 0 all checks pass, 1 invariant failure, 2 configuration error.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qcomm/errors.hpp"
#include "qcomm/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

qcomm::Scenario resolve(const std::string& arg) {
  if (fs::exists(arg)) return qcomm::load_scenario(arg);
  return qcomm::bundled_scenario(arg);
}

int run(const std::vector<std::string>& targets, bool all, const std::string& out_dir,
        int jobs) {
  std::vector<qcomm::Scenario> scenarios;
  if (all) {
    for (const auto& name : qcomm::list_scenarios()) {
      scenarios.push_back(qcomm::bundled_scenario(name));
    }
  }
  for (const auto& t : targets) scenarios.push_back(resolve(t));
  if (scenarios.empty()) throw qcomm::ConfigError("nothing to run");

  std::vector<std::string> lines(scenarios.size());
  std::vector<int> codes(scenarios.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const auto& s = scenarios[i];
      try {
        const qcomm::ScenarioResult r = qcomm::run_scenario(s);
        qcomm::write_artifacts(s, r, fs::path(out_dir) / s.name);
        std::string line = (r.passed() ? "PASS " : "FAIL ") + s.name;
        for (const auto& c : r.checks) {
          if (!c.passed) line += "\n  failed: " + c.name + " = " + std::to_string(c.value) +
                                 (c.detail.empty() ? "" : " (" + c.detail + ")");
        }
        lines[i] = line;
        codes[i] = r.passed() ? 0 : kExitFail;
      } catch (const qcomm::ConfigError& e) {
        lines[i] = "ERROR " + s.name + ": " + e.what();
        codes[i] = kExitConfig;
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::cout << lines[i] << '\n';
    code = std::max(code, codes[i]);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmitter-path-receiver scenarios on a truncated oscillator or spin."};
  app.require_subcommand(1);

  std::vector<std::string> targets;
  std::string out_dir = "qcomm-out";
  int jobs = 1;
  bool all = false;
  auto* run_cmd = app.add_subcommand("run", "Run scenario files or bundled scenarios");
  run_cmd->add_option("targets", targets, "Scenario files or bundled names");
  run_cmd->add_flag("--all", all, "Run every bundled scenario");
  run_cmd->add_option("--out", out_dir, "Artifact directory")->capture_default_str();
  run_cmd->add_option("--jobs", jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);

  auto* list_cmd = app.add_subcommand("list", "List bundled scenarios");

  std::string name;
  auto* describe_cmd = app.add_subcommand("describe", "Describe a bundled scenario");
  describe_cmd->add_option("name", name)->required();

  std::string file;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a scenario file");
  validate_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run(targets, all, out_dir, jobs);
    if (*list_cmd) {
      for (const auto& e : qcomm::catalog()) {
        std::cout << e.name << "  " << qcomm::parse_scenario(e.json).reproduces << '\n';
      }
      return 0;
    }
    if (*describe_cmd) {
      std::cout << qcomm::describe(name);
      return 0;
    }
    if (*validate_cmd) {
      const qcomm::Scenario s = qcomm::load_scenario(file);
      std::cout << "ok: " << s.name << " (" << s.cases.size() << " case"
                << (s.cases.size() == 1 ? "" : "s") << ")\n";
      return 0;
    }
  } catch (const qcomm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcomm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return 0;
}
