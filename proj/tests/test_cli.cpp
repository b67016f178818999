#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svs/cli.hpp"
#include "svs/sysfile.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "svs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = svs::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("svs_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("gen") {
  const auto a = cli({"gen", "--q", "31", "--r", "5", "--s", "2", "--d", "3", "--seed", "7"});
  CHECK(a.code == 0);
  const auto b = cli({"gen", "--q", "31", "--r", "5", "--s", "2", "--d", "3", "--seed", "7"});
  CHECK(a.out == b.out);
  const auto sys = svs::read_system_file(a.out);
  CHECK(sys.polys.size() == 2);
  for (const auto& p : sys.polys) CHECK(p.degree() <= 3);
  CHECK(svs::write_system_file(sys) == a.out);
  const auto j = json::parse(a.out);
  for (const auto& poly : j["polynomials"])
    for (const auto& t : poly) {
      CHECK(t["c"].get<int>() >= 1);
      CHECK(t["c"].get<int>() <= 30);
      CHECK(t["e"].size() == 5);
    }
  const auto bad = cli({"gen", "--q", "31", "--r", "5", "--s", "1", "--d", "3", "--seed", "7"});
  CHECK(bad.code == 2);
  CHECK(!bad.err.empty());
  CHECK(cli({"gen", "--q", "12", "--r", "5", "--s", "2", "--d", "3", "--seed", "7"}).code == 2);
  CHECK(cli({"gen", "--q", "31", "--r", "5"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"gen", "--help"}).code == 0);
}

TEST_CASE("system file canonical form") {
  const std::string messy =
      R"({"q": 5, "r": 3, "s": 2, "d": 2, "polynomials": [["1 0 0 0", {"c": 2, "e": [0, 1, 0]}, "3 2 0 0", "4 0 0 0"], []]})";
  const auto sys = svs::read_system_file(messy);
  const std::string canon = svs::write_system_file(sys);
  CHECK(canon ==
        "{\n  \"q\": 5,\n  \"r\": 3,\n  \"s\": 2,\n  \"d\": 2,\n  \"polynomials\": [\n    [\n"
        "      {\"c\": 3, \"e\": [2, 0, 0]},\n      {\"c\": 2, \"e\": [0, 1, 0]}\n    ],\n    []\n  ]\n}\n");
  CHECK(svs::write_system_file(svs::read_system_file(canon)) == canon);
  CHECK_THROWS(svs::read_system_file(R"({"q": 5, "r": 3, "s": 2, "d": 2, "polynomials": [["1 3 0 0"], []]})"));
  CHECK_THROWS(svs::read_system_file(R"({"q": 5, "r": 3, "s": 2, "d": 2, "polynomials": [[]]})"));
  CHECK_THROWS(svs::read_system_file("not json"));
}

TEST_CASE("solve") {
  const auto sys = write("a.json", R"({"q":5,"r":3,"s":2,"d":2,"polynomials":[["1 0 1 0"],["1 0 0 1","4 1 0 0"]]})");
  auto r = cli({"solve", "--system", sys, "--strips", "2"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["status"] == "success");
  CHECK(j["point"] == json::array({0, 2}));
  CHECK(j["strip_index"] == 1);
  CHECK(cli({"solve", "--system", sys, "--strips", "1;1"}).code == 2);
  CHECK(cli({"solve", "--system", sys, "--strips", "1,2"}).code == 2);
  CHECK(cli({"solve", "--system", sys, "--strips", "7"}).code == 2);
  CHECK(cli({"solve", "--system", sys, "--backend", "groebner"}).code == 2);
  r = cli({"solve", "--system", sys, "--backend", "resultant", "--strips", "2", "--certify"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["tried"][0].contains("certificate"));

  const auto none = write("b.json", R"({"q":3,"r":3,"s":2,"d":2,"polynomials":[["1 0 2 0","1 0 0 0"],["1 0 0 1"]]})");
  r = cli({"solve", "--system", none, "--seed", "4"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["status"] == "failure");
  CHECK(cli({"solve", "--system", (scratch() / "missing.json").string()}).code == 2);
  CHECK(cli({"solve", "--system", write("bad.json", "{")}).code == 2);

  // gen | solve round trip, and replay with the same seed
  const auto g = cli({"gen", "--q", "7", "--r", "4", "--s", "2", "--d", "2", "--seed", "1"});
  const auto gp = write("g.json", g.out);
  const auto x = cli({"solve", "--system", gp, "--seed", "3"});
  CHECK((x.code == 0 || x.code == 1));
  CHECK(cli({"solve", "--system", gp, "--seed", "3"}).out == x.out);

  const auto big = write("big.json", R"({"q":65537,"r":3,"s":2,"d":2,"polynomials":[["1 0 1 0"],["1 0 0 1"]]})");
  CHECK(cli({"solve", "--system", big, "--strips", "1"}).code == 3);
  CHECK(cli({"solve", "--system", big, "--strips", "1", "--backend", "resultant"}).code == 0);
}

TEST_CASE("experiment") {
  const auto dir = scratch() / "exp";
  const std::vector<std::string> args{"experiment", "--q", "31", "--r", "5", "--s", "2", "--d", "3",
                                      "--trials", "1000", "--seed", "42", "--out", dir.string()};
  auto r = cli(args);
  CHECK(r.code == 0);
  const std::string csv = slurp(dir / "trials.csv");
  std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1001);
  auto args3 = args;
  args3.insert(args3.end(), {"--workers", "3"});
  CHECK(cli(args3).code == 0);
  CHECK(slurp(dir / "trials.csv") == csv);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(!summary["comparisons"].empty());
  for (const auto& c : summary["comparisons"]) CHECK(c["pass"].is_boolean());
  CHECK(!fs::exists(dir / "trials.csv.tmp"));
  const auto dir2 = scratch() / "exp_abort";
  CHECK(cli({"experiment", "--q", "65537", "--r", "4", "--s", "2", "--d", "2", "--trials", "2", "--seed", "1", "--out",
             dir2.string()})
            .code == 3);
  CHECK(cli({"experiment", "--q", "31", "--r", "5", "--s", "2", "--d", "3", "--trials", "5", "--seed", "1", "--out",
             dir2.string(), "--backend", "nope"})
            .code == 2);
}

TEST_CASE("theory") {
  auto r = cli({"theory", "--q", "2", "--r", "3", "--s", "2", "--d", "2"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["intervals"][0]["lower"]["fraction"] == "5/8");
  CHECK(j["intervals"][0]["upper"]["fraction"] == "11/16");
  r = cli({"theory", "--q", "101", "--r", "4", "--s", "2", "--d", "6", "--h", "2", "--omega", "2.5"});
  CHECK(r.code == 0);
  j = json::parse(r.out);
  for (const auto& iv : j["intervals"]) {
    if (iv["tag"] == "failure_after_budget") CHECK(iv["radius"]["decimal"].get<std::string>().rfind("0.067", 0) == 0);
    if (iv.contains("h")) CHECK(iv["h"] == 2);
  }
  CHECK(cli({"theory", "--q", "2", "--r", "3", "--s", "3", "--d", "2"}).code == 2);
  CHECK(cli({"theory", "--q", "2", "--r", "3", "--s", "2", "--d", "2", "--omega", "4"}).code == 2);
}

TEST_CASE("oracle") {
  auto r = cli({"oracle", "p1-exhaustive", "--q", "2", "--r", "3", "--s", "2", "--d", "2"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["inside"] == true);
  CHECK(j["value"]["fraction"].is_string());
  CHECK(cli({"oracle", "p1-exhaustive", "--q", "5", "--r", "3", "--s", "2", "--d", "2"}).code == 3);

  r = cli({"oracle", "sk-exhaustive", "--q", "2", "--r", "3", "--s", "2", "--d", "2", "--strips", "0;1"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["m_singular"] == false);
  r = cli({"oracle", "sk-exhaustive", "--q", "2", "--r", "3", "--s", "2", "--d", "2", "--strips", "1;1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("M singular") != std::string::npos);

  const auto sys = write("c.json", R"({"q":2,"r":2,"s":2,"d":2,"polynomials":[["1 2 0","1 1 0","1 0 0"],["1 0 1"]]})");
  r = cli({"oracle", "count-points", "--system", sys});
  CHECK(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["geometric_points"] == 2);
  CHECK(j["rational_points"] == 0);
  CHECK(j["closed_points"] == json::array({0, 1, 0, 0}));
  const auto strip_sys = write("d.json", R"({"q":3,"r":3,"s":2,"d":2,"polynomials":[["1 0 1 0"],["1 0 0 1"]]})");
  r = cli({"oracle", "count-points", "--system", strip_sys, "--strip", "1"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["geometric_points"] == 1);
  CHECK(cli({"oracle", "count-points", "--system", strip_sys}).code == 2);
  CHECK(cli({"oracle"}).code == 2);
}

TEST_CASE("binary exit codes") {
  const std::string bin = SVS_BINARY;
  auto status = [&](const std::string& args) {
    const int rc = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  CHECK(status("gen --q 5 --r 3 --s 2 --d 2 --seed 1") == 0);
  CHECK(status("gen --q 5 --r 3 --s 1 --d 2 --seed 1") == 2);
  const auto none = write("e.json", R"({"q":3,"r":3,"s":2,"d":2,"polynomials":[["1 0 2 0","1 0 0 0"],["1 0 0 1"]]})");
  CHECK(status("solve --system " + none) == 1);
}
