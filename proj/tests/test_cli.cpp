#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "opmin/opd_file.hpp"

using namespace opmin;

namespace {

const std::string dir = std::string(SCRATCH_DIR) + "/cli_";

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string log = dir + "stdout.txt";
  const std::string cmd = std::string(OPMIN_CLI) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST_CASE("minimal-model writes a report and a model") {
  auto r = run("minimal-model --builtin Ass --max-arity 4 --out " + dir + "ass.json --emit-model " + dir + "ass_model.json");
  INFO(r.out);
  REQUIRE(r.code == 0);
  Json rep = read_json(dir + "ass.json");
  CHECK(rep.dump().find("\"quis\"") != std::string::npos);
  ModelFile m = parse_model(read_json(dir + "ass_model.json"));
  CHECK(m.as_result().table().at(4, -2) == 24);
  CHECK(r.out.find("E(3)") != std::string::npos);
}

TEST_CASE("compare exit codes") {
  REQUIRE(run("minimal-model --builtin Ass --max-arity 4 --emit-model " + dir + "a1.json").code == 0);
  REQUIRE(run("minimal-model --builtin Ass --max-arity 4 --section-strategy last-pivot --emit-model " + dir + "a2.json")
              .code == 0);
  REQUIRE(run("minimal-model --builtin Com --max-arity 4 --emit-model " + dir + "c.json").code == 0);
  CHECK(run("compare --model-a " + dir + "a1.json --model-b " + dir + "a2.json").code == 0);
  CHECK(run("compare --model-a " + dir + "a1.json --model-b " + dir + "c.json").code == 1);

  // truncated Ass+ against the unitary run
  write_json(dir + "ass0.json", emit_table(*truncate(builtin("Ass+", 4)), 4));
  REQUIRE(run("minimal-model --input " + dir + "ass0.json --max-arity 4 --emit-model " + dir + "a0.json").code == 0);
  REQUIRE(run("minimal-model --builtin Ass+ --max-arity 4 --unitary --emit-model " + dir + "ap.json").code == 0);
  CHECK(run("compare --model-a " + dir + "a0.json --model-b " + dir + "ap.json").code == 0);
  CHECK(run("compare --model-a " + dir + "a1.json --model-b " + dir + "ap.json").code == 1);
}

TEST_CASE("input and hypothesis errors") {
  CHECK(run("minimal-model --builtin Ass --max-arity 3 --unitary").code == 3);
  CHECK(run("minimal-model --builtin Ass+ --max-arity 3").code == 3);
  CHECK(run("minimal-model --builtin Lie --max-arity 3").code == 2);
  CHECK(run("minimal-model --input " + dir + "nope.json --max-arity 3").code == 2);
  CHECK(run("minimal-model --max-arity 3 --frobnicate").code == 2);
  std::ofstream(dir + "garbage.json") << "{ not json";
  auto r = run("minimal-model --input " + dir + "garbage.json --max-arity 3");
  CHECK(r.code == 2);
  CHECK(r.out.find("garbage.json") != std::string::npos);
  CHECK(run("--help").code == 0);
}

TEST_CASE("verify") {
  REQUIRE(run("minimal-model --builtin Ass --max-arity 4 --emit-model " + dir + "v.json").code == 0);
  CHECK(run("verify --model " + dir + "v.json --up-to 4").code == 0);
  CHECK(run("verify --model " + dir + "v.json --up-to 9").code == 2);
  write_json(dir + "com_table.json", emit_table(*builtin("Com", 4), 4));
  auto r = run("verify --model " + dir + "v.json --target " + dir + "com_table.json --up-to 4");
  CHECK(r.code == 1);
  CHECK(r.out.find("arity") != std::string::npos);
}

TEST_CASE("kan-fill") {
  auto ok = run("kan-fill --builtin Ass+ --arity 3 --from-element 0:1,3:-2");
  INFO(ok.out);
  CHECK(ok.code == 0);
  // omega_1 = x1x2x3 and the rest zero: delta_1 omega_2 != delta_1 omega_1
  std::ofstream(dir + "fam.json") << R"([[[0, 1]], [], [], []])";
  auto bad = run("kan-fill --builtin Ass+ --arity 4 --family " + dir + "fam.json");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("(1, 2)") != std::string::npos);
  CHECK(run("kan-fill --builtin Ass --arity 3 --from-element 0:1").code != 0);
}

TEST_CASE("free") {
  auto r = run("free --gens 2:0:reg --arity 3");
  INFO(r.out);
  CHECK(r.code == 0);
  CHECK(r.out.find("12") != std::string::npos);
  auto u = run("free --gens 2:0 --arity 0 --flavor +1");
  CHECK(u.code == 0);
  CHECK(run("free --gens 2:0:weird --arity 3").code == 2);
}
