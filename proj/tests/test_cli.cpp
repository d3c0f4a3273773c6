#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fpa/circuit.hpp"
#include "fpa/gcircuit.hpp"
#include "fpa/io_json.hpp"
#include "helpers.hpp"

using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;
namespace io = fpa::io;

namespace {

std::string cli() {
  const char* p = std::getenv("FPA_CLI");
  return p ? p : "";
}

std::string data(const std::string& name) {
  const char* p = std::getenv("FPA_DATA");
  REQUIRE(p);
  return std::string(p) + "/" + name;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  std::string cmd = (env.empty() ? "" : env + " ") + cli() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path tmp_dir() {
  fs::path d = fs::current_path() / "cli_scratch";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  REQUIRE(out.good());
}

}  // namespace

TEST_CASE("verify certifies the shipped golden equilibrium") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  auto r = run("verify --instance " + data("golden.json") + " --strategy " +
               data("golden_eq.json") + " --eps 1e-9 --precision rational");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("certified = true"));
  CHECK_THAT(r.out, ContainsSubstring("max_regret = "));

  // float64 path agrees at this tolerance.
  CHECK(run("verify --instance " + data("golden.json") + " --strategy " +
            data("golden_eq.json") + " --eps 1e-9")
            .code == 0);
  // At eps 0 the truncated literal is not an exact equilibrium.
  CHECK(run("verify --instance " + data("golden.json") + " --strategy " +
            data("golden_eq.json") + " --eps 0 --precision rational")
            .code == 1);
}

TEST_CASE("both solve methods produce re-verifiable golden strategies") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  for (std::string method : {"brouwer", "enumerate"}) {
    fs::path out = tmp_dir() / ("solve_" + method + ".json");
    fs::path rep = tmp_dir() / ("solve_" + method + "_report.json");
    auto r = run("solve --instance " + data("golden.json") + " --eps 1e-6 --method " + method +
                 " --out " + out.string() + " --report " + rep.string());
    INFO(method);
    CHECK(r.code == 0);

    auto p = fpa::auction::to_double_profile(io::parse_profile(slurp(out)));
    REQUIRE(p.jumps.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(p.jumps[i][0] - 0.6180339887498949) <= 1e-6);
      CHECK(p.jumps[i][1] == 1.0);
    }

    auto report = io::json::parse(slurp(rep));
    CHECK(report.at("certified").get<bool>());
    CHECK(report.at("method").get<std::string>() == method);

    // The written artifact passes verify at the same eps.
    CHECK(run("verify --instance " + data("golden.json") + " --strategy " + out.string() +
              " --eps 1e-6")
              .code == 0);
  }
}

TEST_CASE("solve rejects bad configuration and honors budgets") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  CHECK(run("solve --instance " + data("golden.json") + " --eps 0").code == 3);
  CHECK(run("solve --instance " + data("golden.json") + " --eps 1e-6 --restarts 0").code == 3);
  CHECK(run("solve --instance " + data("golden.json") +
            " --eps 1e-6 --method enumerate --guess-budget 3")
            .code == 4);
  // Environment override behaves like the flag.
  CHECK(run("solve --instance " + data("golden.json") + " --eps 1e-6 --method enumerate",
            "FPA_GUESS_BUDGET=3")
            .code == 4);
}

TEST_CASE("usage, missing files, and syntax errors map to distinct exit codes") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("solve --no-such-flag").code == 2);
  CHECK(run("verify --instance nope.json --strategy nope.json --eps 0").code == 3);

  fs::path broken = tmp_dir() / "broken.json";
  spit(broken, "{\n  \"bidders\": 2,");
  CHECK(run("verify --instance " + broken.string() + " --strategy " + broken.string() +
            " --eps 0")
            .code == 3);

  fs::path bad = tmp_dir() / "bad_volume.json";
  spit(bad, R"({"bidders": 2, "bids": ["0", "1/4"], "priors": [
    [null, {"blocks": [{"interval": ["0", "1"], "volume": "9/10"}]}],
    [{"pieces": [{"interval": ["0", "1"], "coeffs": ["0", "1"]}]}, null]]})");
  CHECK(run("verify --instance " + bad.string() + " --strategy " + bad.string() + " --eps 0")
            .code == 3);
}

TEST_CASE("best-response patches one row and keeps the file shape") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  fs::path out = tmp_dir() / "br.json";
  auto r = run("best-response --instance " + data("golden.json") + " --strategy " +
               data("golden_eq.json") + " --bidder 1 --out " + out.string());
  CHECK(r.code == 0);
  auto p = io::parse_profile(slurp(out));
  REQUIRE(p.jumps.size() == 3);
  for (const auto& row : p.jumps) CHECK(row.size() == 2);
  CHECK(run("best-response --instance " + data("golden.json") + " --strategy " +
            data("golden_eq.json") + " --bidder 7")
            .code == 3);
}

TEST_CASE("reduce compiles the three-gate cycle into a thirty-bidder instance") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  fs::path out = tmp_dir() / "cycle3_instance.json";
  auto r = run("reduce --circuit " + data("cycle3.gc") + " --out " + out.string());
  CHECK(r.code == 0);
  auto a = io::parse_instance(slurp(out));
  CHECK(a.n == 30);
  std::string side = slurp(tmp_dir() / "cycle3_instance.json.decode");
  CHECK_THAT(side, ContainsSubstring("gates 3"));
  CHECK_THAT(side, ContainsSubstring("decode_mul 15"));
  CHECK_THAT(side, ContainsSubstring("role 0 gate"));
  CHECK_THAT(side, ContainsSubstring("role 29 auxiliary"));

  // A two-gate loop needs only 20 working bidders, so the instance is padded
  // out to the 24-bidder floor.
  fs::path pair = tmp_dir() / "pair.gc";
  spit(pair, "0 COMP 1\n1 COMP 0\n");
  fs::path pout = tmp_dir() / "pair_instance.json";
  CHECK(run("reduce --circuit " + pair.string() + " --out " + pout.string()).code == 0);
  CHECK(io::parse_instance(slurp(pout)).n == 24);
  std::string pside = slurp(tmp_dir() / "pair_instance.json.decode");
  CHECK_THAT(pside, ContainsSubstring("role 19 auxiliary"));
  CHECK_THAT(pside, ContainsSubstring("role 23 padding"));
}

TEST_CASE("circuit check, solve, and lower on the cycle") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  auto r = run("circuit check --circuit " + data("cycle3.gc") + " --assignment " +
               data("half.txt") + " --eps 0");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("satisfied = true"));
  CHECK_THAT(r.out, ContainsSubstring("max_violation = 0"));

  fs::path off = tmp_dir() / "off.txt";
  spit(off, "0 3/5\n1 3/5\n2 3/5\n");
  CHECK(run("circuit check --circuit " + data("cycle3.gc") + " --assignment " + off.string() +
            " --eps 0")
            .code == 1);

  fs::path sol = tmp_dir() / "cycle3_sol.txt";
  auto rs = run("circuit solve --circuit " + data("cycle3.gc") + " --eps 1e-6 --out " +
                sol.string());
  CHECK(rs.code == 0);
  auto v = fpa::gcircuit::parse_assignment(slurp(sol));
  REQUIRE(v.size() == 3);
  for (const auto& x : v) CHECK(std::abs(fpa::to_double(x) - 0.5) <= 1e-5);

  fs::path low = tmp_dir() / "cycle3_low.gc";
  auto rl = run("circuit lower --circuit " + data("cycle3.gc") +
                " --target times2-comp-phi --out " + low.string());
  CHECK(rl.code == 0);
  CHECK_THAT(rl.out, ContainsSubstring("multiplier = 1"));
  CHECK(fpa::gcircuit::parse_circuit(slurp(low)).size() == 3);

  auto rl2 = run("circuit lower --circuit " + data("cycle3.gc") + " --target one-minus --out " +
                 (tmp_dir() / "cycle3_om.gc").string());
  CHECK(rl2.code == 0);
  CHECK_THAT(rl2.out, ContainsSubstring("multiplier = "));
}

TEST_CASE("export-circuit writes a parseable program and respects the node budget") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  fs::path out = tmp_dir() / "golden_map.dag";
  auto r = run("export-circuit --instance " + data("golden.json") + " --out " + out.string());
  CHECK(r.code == 0);
  auto dag = fpa::brouwer::parse_circuit(slurp(out));
  CHECK(dag.nodes.size() > 0);
  CHECK(run("export-circuit --instance " + data("golden.json") + " --node-budget 5").code == 4);
}

TEST_CASE("same seed means byte-identical artifacts") {
  if (cli().empty()) SKIP("FPA_CLI not set");
  for (std::string method : {"brouwer", "enumerate"}) {
    std::string a = (tmp_dir() / ("det_a_" + method)).string();
    std::string b = (tmp_dir() / ("det_b_" + method)).string();
    std::string tail = " --eps 1e-6 --method " + method + " --seed 99";
    CHECK(run("solve --instance " + data("golden.json") + tail + " --out " + a + ".json" +
              " --report " + a + "_rep.json --trace " + a + ".csv")
              .code == 0);
    CHECK(run("solve --instance " + data("golden.json") + tail + " --out " + b + ".json" +
              " --report " + b + "_rep.json --trace " + b + ".csv")
              .code == 0);
    CHECK(slurp(a + ".json") == slurp(b + ".json"));
    CHECK(slurp(a + "_rep.json") == slurp(b + "_rep.json"));
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
  }
}
