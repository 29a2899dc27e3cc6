#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "symp/cli.hpp"

using namespace symp;
using nlohmann::json;

namespace {

JobReport run(const std::string& cmd, const std::string& input, std::uint64_t seed = 0) {
  JobRequest r;
  r.command = cmd;
  r.input_text = input;
  r.seed = seed;
  return run_job(r);
}

const char* kRot = R"({"n":1,"path":{"type":"exp","S":[[3.141592653589793,0],[0,3.141592653589793]],"T":1}})";

}  // namespace

TEST_CASE("cz example") {
  const JobReport r = run("cz", kRot);
  CHECK(r.exit_code == 0);
  CHECK(r.json.find(R"("value":"2/2")") != std::string::npos);
  CHECK(r.trace.rfind("t,phase_rho2,smin_psi_minus_id\n", 0) == 0);
  const json j = json::parse(r.json);
  CHECK(j["command"] == "cz");
  CHECK(j["diagnostics"]["endpoint"] == "W+");
}

TEST_CASE("rho example") {
  const JobReport r = run("rho", R"({"matrix":[[-1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]})");
  CHECK(r.exit_code == 0);
  CHECK(r.json.find(R"("value_complex":[1.0,0.0])") != std::string::npos);
  const JobReport b = run("rho", "[[-1,0],[0,-1]]");
  CHECK(json::parse(b.json)["value_complex"] == json::parse("[-1.0,0.0]"));
}

TEST_CASE("rs and rs2 examples") {
  const std::string shear = R"({"n":2,"path":{"type":"shear","B0":[[0,0],[0,0]],"B1":[[1,0],[0,1]]}})";
  JobReport r = run("rs", shear);
  CHECK(r.exit_code == 0);
  CHECK(r.json.find(R"("value":"-2/2")") != std::string::npos);
  CHECK(r.trace.rfind("t,smin,kernel_dim\n", 0) == 0);
  r = run("rs2", shear);
  CHECK(json::parse(r.json)["value"] == "-2/2");
  r = run("rs", R"({"n":1,"path":{"type":"loop","wind":2}})");
  const json j = json::parse(r.json);
  CHECK(j["value"] == "8/2");
  CHECK(j["diagnostics"]["crossings"].size() == 3);
  CHECK(j["diagnostics"]["crossings"][0]["weight"] == "1/2");
  CHECK(j["diagnostics"]["crossings"][1]["signature"] == 2);
}

TEST_CASE("maslov, normal-form and ext") {
  CHECK(json::parse(run("maslov", R"({"n":2,"path":{"type":"loop","wind":3}})").json)["value"] == 3);
  const JobReport nf = run("normal-form", R"({"matrix":[[1,1],[0,1]]})");
  CHECK(nf.exit_code == 0);
  const json j = json::parse(nf.json);
  CHECK(j["value"]["blocks"].size() == 1);
  CHECK(j["value"]["blocks"][0]["d"] == 1);
  const JobReport e = run("ext", R"({"matrix":[[-1,0],[0,-1]]})");
  CHECK(json::parse(e.json)["value"] == 0.0);
}

TEST_CASE("error exit codes") {
  JobReport r = run("cz", R"({"n":1,"path":{"type":"exp","S":[[1,0],[0,1]])");
  CHECK(r.exit_code == 1);
  CHECK(json::parse(r.json)["error"]["kind"] == "parse");
  r = run("cz", R"({"n":1,"path":{"type":"bogus"}})");
  CHECK(r.exit_code == 1);
  r = run("frobnicate", kRot);
  CHECK(r.exit_code == 1);
  // ends at Id: not admissible
  r = run("cz", R"({"n":1,"path":{"type":"loop","wind":1}})");
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.json)["error"]["kind"] == "admissibility");
  r = run("maslov", kRot);
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.json)["error"]["kind"] == "non-loop");
}

TEST_CASE("reports re-parse and repeat byte for byte") {
  const char* inputs[][2] = {
      {"cz", R"({"n":2,"path":{"type":"dsum","parts":[{"type":"exp","S":[[2,0.3],[0.3,1]]},{"type":"exp","S":[[-1,0],[0,-2]]}]}})"},
      {"rs", R"({"n":1,"path":{"type":"loop","wind":-1}})"},
      {"rho", R"([[2,0],[0,0.5]])"},
      {"normal-form", R"({"matrix":[[0,-1],[1,0]]})"}};
  for (const auto& in : inputs) {
    const JobReport a = run(in[0], in[1], 7), b = run(in[0], in[1], 7);
    CHECK(a.exit_code == 0);
    CHECK(a.json == b.json);
    CHECK(a.trace == b.trace);
    CHECK(json::parse(a.json).dump() == a.json);
  }
}
