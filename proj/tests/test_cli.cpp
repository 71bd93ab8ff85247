#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string cli() {
  const char* path = std::getenv("COLEMAN_CLI");
  REQUIRE(path != nullptr);
  return path;
}

Result run(const std::string& args) {
  Result r;
  const std::string cmd = cli() + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, f)) r.out.append(buf, n);
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("coleman_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const json& j) const {
    const fs::path f = path / name;
    std::ofstream(f) << j.dump();
    return f.string();
  }
};

json parse(const std::string& s) { return json::parse(s); }

const json kCurve = {{"p", "11"}, {"N", 2}, {"Q", {"3", "1", "0", "1"}}};

}  // namespace

TEST_CASE("cli: invalid curves exit with 2") {
  TempDir t;
  CHECK(run("data --curve " + t.write("c.json", {{"p", "3"}, {"N", 1}, {"Q", {"0", "1", "0", "1"}}})).code == 2);
  CHECK(run("data --curve " + t.write("d.json", {{"p", "11"}, {"N", 1}, {"Q", {"0", "0", "0", "1"}}})).code == 2);
  CHECK(run("data --curve " + t.write("e.json", {{"p", "11"}})).code == 2);
}

TEST_CASE("cli: naive and fast data agree") {
  TempDir t;
  const std::string c = t.write("c.json", {{"p", "17"}, {"N", 2}, {"Q", {"1", "2", "3", "4", "0", "1"}}});
  Result fast = run("data --cutoff 4 --curve " + c), naive = run("data --naive --curve " + c);
  REQUIRE(fast.code == 0);
  REQUIRE(naive.code == 0);
  CHECK(parse(fast.out)["frobenius"] == parse(naive.out)["frobenius"]);
  CHECK(parse(fast.out)["frobenius"].size() == 4);
}

TEST_CASE("cli: integrate") {
  TempDir t;
  const std::string c = t.write("c.json", kCurve);
  const json P = {{"x", "6"}, {"y", "15"}}, Q = {{"x", "6"}, {"y", "-15"}}, R = {{"x", "-1"}, {"y", "1"}};
  const std::string same = t.write("pp.json", json::array({P, P}));
  Result r = run("integrate --curve " + c + " --points " + same);
  REQUIRE(r.code == 0);
  json j = parse(r.out);
  const long h = j["det_m_minus_i_valuation"].get<long>();
  for (const auto& v : j["integrals"][0]["values"]) CHECK(v["mantissa"] == "0");
  CHECK(j["integrals"][0]["abs_prec"].get<long>() == 2 - h);
  CHECK(j.contains("timings_ms"));

  CHECK(run("integrate --curve " + c + " --points " + t.write("odd.json", json::array({P, Q, R}))).code == 3);
  CHECK(run("integrate --curve " + c + " --points " + t.write("bad.json", json::array({P, {{"x", "2"}, {"y", "1"}}}))).code == 3);

  // cached data reproduces the direct answer exactly
  const std::string pts = t.write("pq.json", json::array({P, R, Q, R}));
  const std::string cache = (t.path / "cache.json").string();
  Result direct = run("integrate --curve " + c + " --points " + pts + " --out " + cache);
  REQUIRE(direct.code == 0);
  Result cached = run("integrate --curve " + c + " --points " + pts + " --data " + cache);
  REQUIRE(cached.code == 0);
  std::ifstream in(cache);
  json d = json::parse(in);
  CHECK(parse(cached.out)["integrals"] == d["integrals"]);
  CHECK(parse(cached.out)["frobenius"] == d["frobenius"]);
}

TEST_CASE("cli: zeta-check and selftest") {
  TempDir t;
  Result z = run("zeta-check --curve " + t.write("c.json", kCurve));
  CHECK(z.code == 0);
  CHECK(parse(z.out)["pass"] == true);
  Result s = run("selftest");
  CHECK(s.code == 0);
  CHECK(s.out.find("selftest passed") != std::string::npos);
  CHECK(run("no-such-command").code != 0);
}
