/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Integration tests for the command-line front end: exit codes, rerun
// determinism, and the sweep table format.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& command) {
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::vector<char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

struct Workspace {
  fs::path dir;
  std::string cli = TLRD_CLI_PATH;

  Workspace() {
    dir = fs::temp_directory_path() /
          ("tlrd_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    std::ostringstream cmd;
    cmd << cli << " phantom --dims 16,16,10 --rank 2 --volumes 2"
        << " --sparse-fraction 0.03 --slice-drift 0.1 --seed 9"
        << " --out-dir " << (dir / "ph").string();
    REQUIRE(run(cmd.str()) == 0);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::string vol(int i) const {
    return (dir / "ph" / ("vol00" + std::to_string(i) + ".mhd")).string();
  }
  std::string mask(int i) const {
    return (dir / "ph" / ("mask00" + std::to_string(i) + ".mhd")).string();
  }
};

}  // namespace

TEST_CASE("a zero volume decomposes to zero outputs") {
  Workspace ws;
  const fs::path header = ws.dir / "zero.mhd";
  {
    std::ofstream out(header);
    out << "NDims = 3\nDimSize = 16 16 4\nElementSpacing = 1 1 1\n"
        << "ElementType = MET_FLOAT\nElementDataFile = zero.raw\n";
    std::ofstream raw(ws.dir / "zero.raw", std::ios::binary);
    const std::vector<char> zeros(16 * 16 * 4 * sizeof(float), 0);
    raw.write(zeros.data(), static_cast<std::streamsize>(zeros.size()));
  }
  std::ostringstream cmd;
  cmd << ws.cli << " decompose --input " << header.string()
      << " --out-dir " << (ws.dir / "zout").string();
  CHECK(run(cmd.str()) == 0);
  for (const char* name : {"zero.lowrank.raw", "zero.sparse.raw"}) {
    const auto bytes = slurp(ws.dir / "zout" / name);
    CHECK(bytes.size() == 16 * 16 * 4 * sizeof(float));
    bool all_zero = true;
    for (char b : bytes) all_zero = all_zero && b == 0;
    CHECK(all_zero);
  }
}

TEST_CASE("usage errors exit with code 1") {
  Workspace ws;
  std::ostringstream cmd;
  cmd << ws.cli << " decompose --segment-length 1 --input " << ws.vol(0)
      << " --out-dir " << (ws.dir / "out").string();
  CHECK(run(cmd.str()) == 1);

  CHECK(run(ws.cli + " decompose") == 1);
  CHECK(run(ws.cli + " no-such-command") == 1);
  CHECK(run(ws.cli + " metrics --a " + ws.mask(0)) == 1);
  CHECK(run(ws.cli + " tsvd --input " + (ws.dir / "nope.mhd").string()) ==
        1);
  CHECK(run(ws.cli + " --help") == 0);
}

TEST_CASE("non-converged segments exit with code 2 and still write") {
  Workspace ws;
  std::ostringstream cmd;
  cmd << ws.cli << " decompose --input " << ws.vol(0) << " --max-iters 2"
      << " --out-dir " << (ws.dir / "nc").string() << " --report "
      << (ws.dir / "nc.json").string();
  CHECK(run(cmd.str()) == 2);
  CHECK(fs::exists(ws.dir / "nc" / "vol000.lowrank.mhd"));
  CHECK(fs::exists(ws.dir / "nc" / "vol000.sparse.mhd"));

  nlohmann::json report;
  std::ifstream in(ws.dir / "nc.json");
  in >> report;
  CHECK(report["all_converged"] == false);
}

TEST_CASE("reruns with identical inputs are bitwise identical") {
  Workspace ws;
  for (const char* tag : {"a", "b"}) {
    std::ostringstream cmd;
    cmd << ws.cli << " decompose --input " << ws.vol(0) << " " << ws.vol(1)
        << " --segment-length 4 --workers 1 --out-dir "
        << (ws.dir / tag).string();
    REQUIRE(run(cmd.str()) == 0);
  }
  for (const char* name :
       {"vol000.lowrank.raw", "vol000.sparse.raw", "vol001.lowrank.raw",
        "vol001.sparse.raw"}) {
    CHECK(slurp(ws.dir / "a" / name) == slurp(ws.dir / "b" / name));
  }
}

TEST_CASE("phantom generation is deterministic per seed") {
  Workspace ws;
  std::ostringstream cmd;
  cmd << ws.cli << " phantom --dims 16,16,10 --rank 2 --volumes 2"
      << " --sparse-fraction 0.03 --slice-drift 0.1 --seed 9 --out-dir "
      << (ws.dir / "ph2").string();
  REQUIRE(run(cmd.str()) == 0);
  CHECK(slurp(ws.dir / "ph" / "vol000.raw") ==
        slurp(ws.dir / "ph2" / "vol000.raw"));
}

TEST_CASE("sweep table carries the documented header") {
  Workspace ws;
  std::ostringstream cmd;
  cmd << ws.cli << " sweep-k --inputs " << ws.vol(0) << " " << ws.vol(1)
      << " --mask " << ws.mask(0) << " --k-values 2,4 --report "
      << (ws.dir / "sweep.csv").string();
  REQUIRE(run(cmd.str()) == 0);
  std::ifstream in(ws.dir / "sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,sigma,entropy_bits");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("tsvd report carries the documented metrics") {
  Workspace ws;
  std::ostringstream cmd;
  cmd << ws.cli << " tsvd --input " << ws.vol(0) << " --report "
      << (ws.dir / "tsvd.json").string();
  REQUIRE(run(cmd.str()) == 0);
  nlohmann::json report;
  std::ifstream in(ws.dir / "tsvd.json");
  in >> report;
  for (const char* key :
       {"tubal_rank", "avg_rank", "tnn", "recon_rel_error"}) {
    CHECK(report["metrics"].contains(key));
  }
  CHECK(report["metrics"]["recon_rel_error"].get<double>() < 1e-8);
}
