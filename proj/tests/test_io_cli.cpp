#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "keychain/gen.hpp"
#include "keychain/io.hpp"

using namespace keychain;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("keychain_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run_cli(const std::string& args, const fs::path& stdout_path) {
  const char* cli = std::getenv("KEYCHAIN_CLI");
  REQUIRE(cli != nullptr);
  std::string cmd = std::string(cli) + " " + args + " > " +
                    stdout_path.string() + " 2> /dev/null";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("known-order instances round-trip through JSON") {
  KnownOrderInstance inst{2, {{0, 1}, {1}}, {0.25, 0.75}};
  LoadedInstance back = parse_instance(instance_to_json(inst));
  CHECK(back.kind == "known_order");
  CHECK(back.known_order.num_keys == 2);
  CHECK(back.known_order.chains == inst.chains);
  CHECK(back.known_order.prior[1] == doctest::Approx(0.75));
}

TEST_CASE("scenario instances round-trip and merge duplicates") {
  ScenarioInstance inst = example_instance();
  LoadedInstance back = parse_instance(instance_to_json(inst));
  CHECK(back.kind == "scenarios");
  CHECK(back.scenarios.scenarios.size() == 6);
  CHECK(back.merged_scenarios == 0);

  ScenarioInstance dup;
  dup.num_keys = 1;
  dup.scenarios.push_back({{{0}}, 0, 0.5});
  dup.scenarios.push_back({{{0}}, 0, 0.5});
  LoadedInstance merged = parse_instance(instance_to_json(dup));
  CHECK(merged.merged_scenarios == 1);
  CHECK(merged.scenarios.scenarios.size() == 1);
}

TEST_CASE("multi-key, order and online instances round-trip") {
  MultiKeyInstance mk = exploit_counterexample(1, 0.001);
  LoadedInstance b1 = parse_instance(instance_to_json(mk));
  CHECK(b1.kind == "multi_key");
  CHECK(b1.multi_key.mode == MultiKeyInstance::Mode::Independent);
  CHECK(b1.multi_key.accept_prob == mk.accept_prob);

  OrderInstance ord{2, {{0}, {0, 1}}, {0.5, 0.5}};
  LoadedInstance b2 = parse_instance(instance_to_json(ord));
  CHECK(b2.kind == "order_selection");
  CHECK(b2.order.chains == ord.chains);

  WobmInstance wobm = random_wobm(2, 2, 2, 2, 31);
  LoadedInstance b3 = parse_instance(instance_to_json(wobm));
  CHECK(b3.kind == "wobm");
  CHECK(b3.wobm.capacity == wobm.capacity);
  CHECK(b3.wobm.support.size() == wobm.support.size());
}

TEST_CASE("malformed input names the offending field") {
  CHECK_THROWS_AS(parse_instance("{"), ValidationError);
  CHECK_THROWS_AS(parse_instance(R"({"kind":"mystery"})"), ValidationError);
  CHECK_THROWS_AS(parse_instance(R"({"kind":"known_order","num_keys":1})"),
                  ValidationError);
  try {
    parse_instance(R"({"kind":"known_order","num_keys":1,"prior":[1.0]})");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("chains") != std::string::npos);
  }
}

TEST_CASE("cli solves, evaluates and reproduces values") {
  TempDir tmp;
  fs::path inst = tmp.path / "example.json";
  fs::path solved = tmp.path / "solved.json";
  fs::path policy = tmp.path / "policy.json";
  fs::path evaled = tmp.path / "evaled.json";

  CHECK(run_cli("gen example --out " + inst.string(), tmp.path / "g.out") == 0);
  CHECK(run_cli("solve --in " + inst.string() + " --algo oracle --out " +
                    solved.string(),
                tmp.path / "s.out") == 0);
  std::string text = slurp(solved);
  CHECK(text.find("1.904761904") != std::string::npos);  // 40/21

  // extract the policy object and evaluate it back
  auto pos = text.find("\"policy\": ");
  REQUIRE(pos != std::string::npos);
  int depth = 0;
  std::size_t start = text.find('{', pos), end = start;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) {
      end = i;
      break;
    }
  }
  std::ofstream(policy) << text.substr(start, end - start + 1);
  CHECK(run_cli("eval --in " + inst.string() + " --policy " + policy.string() +
                    " --out " + evaled.string(),
                tmp.path / "e.out") == 0);
  CHECK(slurp(evaled).find("1.904761904") != std::string::npos);
}

TEST_CASE("cli oracle and nonzero exit codes") {
  TempDir tmp;
  fs::path inst = tmp.path / "ko.json";
  std::ofstream(inst) << R"({"kind":"known_order","num_keys":2,)"
                      << R"("chains":[[0,1],[0,1],[0]],"prior":[0.5,0.5]})";
  fs::path out = tmp.path / "o.out";
  CHECK(run_cli("oracle --in " + inst.string(), out) == 0);
  CHECK(slurp(out).find("2.0") != std::string::npos);

  fs::path bad = tmp.path / "bad.json";
  std::ofstream(bad) << R"({"kind":"known_order","num_keys":2,)"
                     << R"("chains":[[0,1]],"prior":[0.9,0.2]})";
  CHECK(run_cli("solve --in " + bad.string(), tmp.path / "b.out") == 2);
  CHECK(run_cli("solve --in " + (tmp.path / "missing.json").string(),
                tmp.path / "m.out") == 2);
}

TEST_CASE("cli benchmark output is byte-deterministic for a fixed seed") {
  TempDir tmp;
  fs::path a = tmp.path / "a.csv";
  fs::path b = tmp.path / "b.csv";
  CHECK(run_cli("bench --suite order --seed 17 --out " + a.string(),
                tmp.path / "ba.out") == 0);
  CHECK(run_cli("bench --suite order --seed 17 --out " + b.string(),
                tmp.path / "bb.out") == 0);
  std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  CHECK(ca.rfind("instance,n,m,scenarios,algo,value,oracle,lp,ratio,wall_ms",
                 0) == 0);
}
