#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gwish_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

int run(const std::string& args) {
  const std::string cmd = std::string(GWISH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("exact command on a two-column null dataset") {
  TempDir tmp;
  write_file(tmp.file("two_col.csv"), "x,y\n");
  const std::string out = tmp.file("report.json");
  REQUIRE(run("exact --data " + tmp.file("two_col.csv") + " --delta 3 --dmat-identity --out " +
              out) == 0);
  const json report = load_json(out);
  REQUIRE(report["graph_posterior"].size() == 2);
  for (const auto& entry : report["graph_posterior"])
    CHECK(entry["probability"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report["edge_prob"][0][1].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sample command writes a report and a draw stream") {
  TempDir tmp;
  write_file(tmp.file("g.txt"), "2\n1 2\n");
  write_file(tmp.file("d.csv"), "1,0\n0,1\n");
  const std::string out = tmp.file("report.json");
  const std::string draws = tmp.file("draws.csv");
  REQUIRE(run("sample --graph " + tmp.file("g.txt") + " --delta 3 --dmat " + tmp.file("d.csv") +
              " --iters 200 --seed 1 --out " + out + " --samples " + draws) == 0);
  const json report = load_json(out);
  CHECK(report["n_draws"].get<int>() == 200);
  CHECK(report["mean_k"].size() == 2);

  std::ifstream stream(draws);
  int lines = 0;
  std::string line, last;
  while (std::getline(stream, line))
    if (!line.empty()) {
      ++lines;
      last = line;
    }
  CHECK(lines == 200);
  std::stringstream fields_in(last);
  int fields = 0;
  std::string field;
  while (std::getline(fields_in, field, ',')) ++fields;
  CHECK(fields == 3);  // upper triangle of a 2x2
}

TEST_CASE("identical seeds reproduce a run") {
  TempDir tmp;
  write_file(tmp.file("data.csv"), "a,b\n1.2,0.3\n-0.4,0.9\n0.8,-1.1\n0.1,0.2\n");
  const std::string out1 = tmp.file("r1.json"), out2 = tmp.file("r2.json"),
                    out3 = tmp.file("r3.json");
  const std::string base = "drj --data " + tmp.file("data.csv") +
                           " --delta 3 --dmat-identity --iters 2000 --burnin 200";
  REQUIRE(run(base + " --seed 42 --out " + out1) == 0);
  REQUIRE(run(base + " --seed 42 --out " + out2) == 0);
  REQUIRE(run(base + " --seed 43 --out " + out3) == 0);
  json a = load_json(out1), b = load_json(out2), c = load_json(out3);
  for (auto* r : {&a, &b, &c}) r->erase("timing");
  CHECK(a == b);
  CHECK(a["edge_prob"] != c["edge_prob"]);
}

TEST_CASE("multi-chain runs merge and report per chain") {
  TempDir tmp;
  write_file(tmp.file("data.csv"), "a,b\n1.2,0.3\n-0.4,0.9\n0.8,-1.1\n");
  const std::string out = tmp.file("r.json");
  REQUIRE(run("drj --data " + tmp.file("data.csv") +
              " --delta 3 --dmat-identity --iters 1000 --burnin 100 --chains 3 --seed 9 --out " +
              out) == 0);
  const json report = load_json(out);
  REQUIRE(report.contains("chains"));
  CHECK(report["chains"].size() == 3);
  CHECK(report["n_recorded"].get<int>() == 3 * 900);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run("sample --graph missing.txt") == 2);          // missing required options
  CHECK(run("bogus-subcommand") == 2);                     // unknown subcommand
  write_file(tmp.file("d.csv"), "1,0\n0,1\n");
  CHECK(run("sample --graph " + tmp.file("nofile.txt") + " --delta 3 --dmat " +
            tmp.file("d.csv") + " --iters 10") == 3);      // unreadable input
  write_file(tmp.file("g.txt"), "2\n1 2\n");
  write_file(tmp.file("notpd.csv"), "1,2\n2,1\n");
  CHECK(run("sample --graph " + tmp.file("g.txt") + " --delta 3 --dmat " + tmp.file("notpd.csv") +
            " --iters 10") == 4);                          // numerical failure
  write_file(tmp.file("data.csv"), "a,b\n1,2\n");
  CHECK(run("drj --data " + tmp.file("data.csv") + " --delta 3 --iters 100") == 2);
  CHECK(run("exact --data " + tmp.file("data.csv") + " --delta 3 --dmat-identity --center"
            " maybe") == 2);                               // unparsable flag value
}
