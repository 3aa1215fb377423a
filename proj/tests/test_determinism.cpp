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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "qcomm/scenario.hpp"

using namespace qcomm;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = ss.str();
  }
  return files;
}

void run_into(const Scenario& s, const fs::path& dir) { write_artifacts(s, run_scenario(s), dir); }

}  // namespace

TEST_CASE("repeated runs produce identical artifacts") {
  const fs::path root = fs::temp_directory_path() / "qcomm-determinism";
  fs::remove_all(root);
  std::vector<Scenario> scenarios{load_scenario(fs::path(QCOMM_TEST_DATA) / "tiny_loss.json"),
                                  bundled_scenario("spin-trine"),
                                  bundled_scenario("singlet-correlations"),
                                  bundled_scenario("cut-sweep")};
  for (const auto& s : scenarios) run_into(s, root / "a" / s.name);
  {
    std::vector<std::thread> pool;
    for (const auto& s : scenarios) pool.emplace_back([&s, &root] { run_into(s, root / "b" / s.name); });
    for (auto& t : pool) t.join();
  }
  const auto a = read_tree(root / "a");
  const auto b = read_tree(root / "b");
  CHECK(a.size() > scenarios.size());
  CHECK(a.size() == b.size());
  for (const auto& [name, bytes] : a) {
    INFO(name);
    REQUIRE(b.count(name) == 1);
    CHECK(b.at(name) == bytes);
  }
  fs::remove_all(root);
}
