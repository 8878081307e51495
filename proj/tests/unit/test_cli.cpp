#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "chaincap/cli.hpp"
#include "chaincap/report.hpp"
#include "chaincap/scenarios.hpp"

using namespace chaincap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("chaincap_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string profile(const char* name) {
  return (fs::path(CHAINCAP_SOURCE_DIR) / "profiles" / name).string();
}

std::map<std::string, std::string> contents(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    files[e.path().filename().string()] = read_file(e.path());
  }
  return files;
}

std::vector<nlohmann::json> all_verdicts(const fs::path& file) {
  const auto doc = nlohmann::json::parse(read_file(file));
  std::vector<nlohmann::json> out;
  for (const auto& report : doc["reports"]) {
    for (const auto& stage : report["stages"]) {
      if (stage["stage"] == "comparison") {
        for (const auto& v : stage["verdicts"]) out.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scenarios list prints seven rows") {
  const auto r = call({"scenarios", "list"});
  REQUIRE(r.code == cli::kExitOk);
  for (auto id : kAllScenarioIds) CHECK(r.out.find(std::string(to_string(id))) != std::string::npos);
  const auto j = call({"scenarios", "--json", "list"});
  REQUIRE(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).size() == 7);
  // Header plus one row per scenario.
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);
}

TEST_CASE("scenarios show aaa reports the multiplicities") {
  const auto r = call({"scenarios", "--json", "show", "aaa"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& uc : j["use_cases"]) {
    if (uc["name"] == "access_control") {
      CHECK(uc["reads_per_event"] == 5);
      CHECK(uc["writes_per_event"] == 1);
      found = true;
    }
  }
  CHECK(found);
  const auto text = call({"scenarios", "show", "aaa"});
  CHECK(text.out.find("access_control") != std::string::npos);
}

TEST_CASE("unknown scenario exits 2 with a suggestion") {
  const auto r = call({"scenarios", "show", "bogus"});
  CHECK(r.code == cli::kExitUsage);
  const auto near = call({"scenarios", "show", "aa"});
  CHECK(near.code == cli::kExitUsage);
  CHECK(near.err.find("aaa") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(call({}).code == cli::kExitUsage);
  CHECK(call({"frobnicate"}).code == cli::kExitUsage);
  CHECK(call({"simulate"}).code == cli::kExitUsage);
  CHECK(call({"simulate", "--lambda", "-5", "--out", scratch("neg").string()}).code ==
        cli::kExitUsage);
  CHECK(call({"simulate", "--lambda", "10", "--cluster", "/nonexistent/cluster.ini"}).code ==
        cli::kExitUsage);
  CHECK(call({"simulate", "--lambda", "10", "--nodes", "3", "--out", scratch("n3").string()})
            .code == cli::kExitUsage);
  CHECK(call({"capacity", "--nodes", "3", "--out", scratch("cap3").string()}).code ==
        cli::kExitUsage);
}

TEST_CASE("simulate twice gives byte-identical outputs") {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const std::vector<std::string> base{"simulate", "--kind", "write", "--lambda", "900",
                                      "--duration", "20", "--seed", "5"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(call(args_a).code == 0);
  REQUIRE(call(args_b).code == 0);
  auto fa = contents(a), fb = contents(b);
  CHECK(fa.count("manifest.json") == 1);
  CHECK(fa.count("timeline.csv") == 1);
  fa.erase("manifest.json");
  fb.erase("manifest.json");
  CHECK(fa == fb);

  const auto manifest = nlohmann::json::parse(read_file(a / "manifest.json"));
  CHECK(manifest["seeds"] == nlohmann::json::array({5}));
  for (const auto& o : manifest["outputs"]) {
    const std::string path = o["path"];
    CHECK(o["sha256"] == sha256_hex(read_file(a / path)));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("simulate records cluster file digests") {
  const auto dir = scratch("sim_cluster");
  REQUIRE(call({"simulate", "--lambda", "100", "--duration", "10", "--cluster",
                profile("default_cluster.ini"), "--out", dir.string()})
              .code == 0);
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  REQUIRE(manifest["inputs"].size() == 1);
  CHECK(manifest["inputs"][0]["sha256"] == sha256_hex(read_file(profile("default_cluster.ini"))));
  fs::remove_all(dir);
}

TEST_CASE("assess with the published capacity file") {
  const auto dir = scratch("assess");
  const auto pkm = call({"assess", "--scenario", "public_key_mgmt", "--capacity",
                         profile("paper.json"), "--out", dir.string()});
  REQUIRE(pkm.code == 0);
  auto verdicts = all_verdicts(dir / "verdicts.json");
  CHECK_FALSE(verdicts.empty());
  for (const auto& v : verdicts) CHECK(v["suitable"] == true);

  const auto aaa = call({"assess", "--scenario", "aaa", "--capacity", profile("paper.json"),
                         "--out", dir.string()});
  REQUIRE(aaa.code == 0);
  bool saw = false;
  for (const auto& v : all_verdicts(dir / "verdicts.json")) {
    if (v["use_case"] == "access_control") {
      CHECK(v["read_ok"] == false);
      CHECK(v["write_ok"] == false);
      saw = true;
    }
  }
  CHECK(saw);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "report.txt"));
  fs::remove_all(dir);
}

TEST_CASE("assess without eta") {
  const auto dir = scratch("assess_eta");
  const auto r = call({"assess", "--scenario", "resource_sharing", "--capacity",
                       profile("paper.json"), "--out", dir.string()});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("eta required") != std::string::npos);
  CHECK(call({"assess", "--scenario", "resource_sharing", "--eta", "40", "--capacity",
              profile("paper.json"), "--out", dir.string()})
            .code == 0);
  const auto all = call({"assess", "--scenario", "all", "--capacity", profile("paper.json"),
                         "--out", dir.string()});
  CHECK(all.code == 0);
  const auto verdicts = nlohmann::json::parse(read_file(dir / "verdicts.json"));
  CHECK(verdicts["skipped"].size() == 5);
  fs::remove_all(dir);
}

TEST_CASE("campaign twice gives byte-identical outputs") {
  const auto a = scratch("camp_a"), b = scratch("camp_b");
  const std::vector<std::string> base{"campaign", "--rates", "300,900", "--trials", "2",
                                      "--duration", "15", "--seed", "3", "--threads", "2"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(call(args_a).code == 0);
  REQUIRE(call(args_b).code == 0);
  auto fa = contents(a), fb = contents(b);
  fa.erase("manifest.json");
  fb.erase("manifest.json");
  CHECK(fa == fb);
  CHECK(fa.count("trials.csv") == 1);
  fs::remove_all(a);
  fs::remove_all(b);
}
