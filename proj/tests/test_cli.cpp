#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int rc;
  std::string out;
};

std::string cli() {
  const char* p = std::getenv("VOSA_CLI");
  REQUIRE(p != nullptr);
  return p;
}

// Runs the CLI without the cache override from the environment.
Result run(const std::string& args) {
  std::string cmd = "env -u VOSA_CACHE_DIR '" + cli() + "' " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expect_rc = 0) {
  auto r = run(args);
  INFO(args);
  REQUIRE(r.rc == expect_rc);
  return json::parse(r.out);
}

fs::path temp_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("vosa-cli-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("zhu examples") {
  auto a = run_json("zhu --l 2 --twist sigma --max-weight 5/2 --certify");
  CHECK(a["schema"] == "vosa-zhu/1");
  CHECK(a["dim"] == 4);
  CHECK(a["certified"] == true);
  CHECK(a["blocks"] == json::array({2}));

  auto b = run_json("zhu --l 1 --twist id --max-weight 3");
  CHECK(b["dim"] == 1);

  auto c = run_json("zhu --l 1 --twist sigma");
  CHECK(c["dim"] == 2);
  CHECK(c["blocks"] == json::array({1, 1}));
  CHECK(c["center_dim"] == 2);
  CHECK(c["structure_constants"].size() == 4);
}

TEST_CASE("verify examples") {
  auto v = run_json("verify --suite virasoro --l 3");
  CHECK(v["schema"] == "vosa-verify/1");
  CHECK(v["ok"] == true);
  CHECK(v["central_charge"] == "3/2");

  auto j = run_json("verify --suite jacobi --l 2 --twist sigma");
  CHECK(j["ok"] == true);
  for (const auto& c : j["checks"]) CHECK(c["ok"] == true);

  auto o = run_json("verify --suite omega --l 2 --twist sigma");
  CHECK(o["ok"] == true);
  bool saw = false;
  for (const auto& c : o["checks"])
    if (c["name"].get<std::string>().rfind("dim Omega", 0) == 0) {
      CHECK(c["detail"] == "2");
      saw = true;
    }
  CHECK(saw);
}

TEST_CASE("basis, omega and induce examples") {
  auto b = run_json("basis --l 2 --max-weight 2");
  CHECK(b["schema"] == "vosa-dims/1");
  std::vector<int> dims;
  for (const auto& d : b["dims"]) dims.push_back(d["dim"]);
  CHECK(dims == std::vector<int>{1, 2, 1, 2, 4});

  auto o = run_json("omega --l 3 --twist sigma");
  REQUIRE(o["modules"].size() == 2);
  for (const auto& m : o["modules"]) CHECK(m["dim"] == 2);

  auto i = run_json("induce --l 2 --twist sigma --max-weight 3/2");
  CHECK(i["ok"] == true);
  REQUIRE(i["inductions"].size() == 1);
  CHECK(i["inductions"][0]["matches_module"] == true);
  CHECK(i["inductions"][0]["L"] == i["inductions"][0]["module_dims"]);
}

TEST_CASE("exit codes") {
  CHECK(run("zhu --l 3 --twist tau").rc == 1);
  CHECK(run("zhu --l 2 --twist tau --tau-table 'c:1/2'").rc == 1);
  CHECK(run("zhu --l 2 --twist tau --tau-table 'c:1/2~q;e:0'").rc == 1);
  CHECK(run("zhu --l 1 --max-weight 1/3").rc == 1);
  CHECK(run("zhu --l 0").rc == 1);
  CHECK(run("zhu --l 1 --twist rho").rc == 1);
  CHECK(run("frobnicate").rc == 1);
  CHECK(run("verify --l 1").rc == 1);
  CHECK(run("--help").rc == 0);
  // an uncertified run: the stability step fails at W = 0 for sigma, l = 2
  auto r = run("zhu --l 2 --twist sigma --max-weight 0 --margin 0");
  CHECK(r.rc == 2);
  CHECK(json::parse(r.out)["certified"] == false);
}

TEST_CASE("config file with flags winning") {
  auto dir = temp_dir("config");
  auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"l": 1, "twist": "sigma", "max_weight": "3/2", "format": "json"})";
  auto a = run_json("zhu --config '" + cfg.string() + "'");
  CHECK(a["config"]["l"] == 1);
  CHECK(a["config"]["max_weight"] == "3/2");
  CHECK(a["dim"] == 2);
  auto b = run_json("zhu --config '" + cfg.string() + "' --l 2");
  CHECK(b["config"]["l"] == 2);
  CHECK(b["dim"] == 4);

  std::ofstream(dir / "bad.json") << R"({"l": 1, "colour": "red"})";
  CHECK(run("zhu --config '" + (dir / "bad.json").string() + "'").rc == 1);
  CHECK(run("zhu --config '" + (dir / "missing.json").string() + "'").rc == 1);
  fs::remove_all(dir);
}

TEST_CASE("cache hits reproduce the output byte for byte") {
  auto dir = temp_dir("cache");
  std::string args = "zhu --l 3 --twist sigma --cache-dir '" + dir.string() + "'";
  auto first = run(args);
  REQUIRE(first.rc == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files > 0);
  auto second = run(args);
  CHECK(second.rc == 0);
  CHECK(second.out == first.out);
  auto uncached = run("zhu --l 3 --twist sigma");
  CHECK(uncached.out == first.out);

  auto b1 = run("basis --l 2 --twist sigma --max-weight 2 --cache-dir '" + dir.string() + "'");
  auto b2 = run("basis --l 2 --twist sigma --max-weight 2 --cache-dir '" + dir.string() + "'");
  CHECK(b1.out == b2.out);
  fs::remove_all(dir);
}

TEST_CASE("output file and table format") {
  auto dir = temp_dir("out");
  auto path = dir / "zhu.json";
  auto r = run("zhu --l 1 --twist sigma --output '" + path.string() + "'");
  CHECK(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  json j = json::parse(in);
  CHECK(j["dim"] == 2);

  auto t = run("zhu --l 2 --twist sigma --format table");
  CHECK(t.rc == 0);
  CHECK(t.out.find("dim: 4") != std::string::npos);
  CHECK(t.out.find("blocks: [2]") != std::string::npos);
  CHECK(run("zhu --l 1 --format xml").rc == 1);
  fs::remove_all(dir);
}
