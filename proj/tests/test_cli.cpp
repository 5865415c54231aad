// End-to-end tests of the command-line tool: pinned outputs, exit-code
// policy, JSON round-trips, byte stability, and the obstruction drivers.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef UPS_CLI_PATH
#error "UPS_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cmd(const std::string& full) {
  RunResult r;
  FILE* f = popen(full.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int st = pclose(f);
  r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

RunResult ups(const std::string& args) {
  return run_cmd(std::string(UPS_CLI_PATH) + " " + args + " 2>/dev/null");
}

RunResult ups_env(const std::string& env, const std::string& args) {
  return run_cmd(env + " " + std::string(UPS_CLI_PATH) + " " + args + " 2>/dev/null");
}

std::string tmp_path(const std::string& name) {
  return "/tmp/ups_cli_test_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("upsilon sweep of the 2-step staircase matches the pinned CSV") {
  auto csv = tmp_path("t2.csv");
  auto r = ups("upsilon --family torus --n 2 --out " + csv);
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(csv) == "t,value\n0,0\n1,-2\n2,0\n");

  // stdout and --out agree, and a second run is byte-identical
  auto r2 = ups("upsilon --family torus --n 2");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == "t,value\n0,0\n1,-2\n2,0\n");
  auto csv2 = tmp_path("t2_again.csv");
  REQUIRE(ups("upsilon --family torus --n 2 --out " + csv2).exit_code == 0);
  CHECK(slurp(csv2) == slurp(csv));
}

TEST_CASE("grid differential check passes for p = 5 and rejects even p") {
  auto r = ups("grid --p 5 --check-differentials");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("p=5: ok") != std::string::npos);

  CHECK(ups("grid --p 3,5,7 --check-differentials --parallel").exit_code == 0);
  CHECK(ups("grid --p 4 --check-differentials").exit_code == 1);
  CHECK(ups("grid --p 1 --check-differentials").exit_code == 1);
}

TEST_CASE("tau over grid slice classes prints the pinned list") {
  auto r = ups("tau --grid-p 7 --spinc 0,1,2,3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "3,2,1,0\n");

  auto rp = ups("tau --grid-p 7 --spinc 0,1,2,3 --parallel");
  CHECK(rp.exit_code == 0);
  CHECK(rp.out == r.out);

  CHECK(ups("tau --family torus --n 4").out == "4\n");
  CHECK(ups("tau --family twist --n 3").out == "1\n");
}

TEST_CASE("build emits JSON that re-validates with identical invariants") {
  auto path = tmp_path("torus3.json");
  REQUIRE(ups("build --family torus --n 3 --out " + path).exit_code == 0);

  auto v = ups("validate --in " + path);
  CHECK(v.exit_code == 0);
  CHECK(v.out == "ok\n");

  CHECK(ups("tau --complex " + path).out == ups("tau --family torus --n 3").out);
  CHECK(ups("upsilon --complex " + path).out ==
        ups("upsilon --family torus --n 3").out);
  CHECK(ups("v --complex " + path + " --m 1").out ==
        ups("v --family torus --n 3 --m 1").out);

  // feeding the emitted file back through build reproduces it byte for byte
  auto path2 = tmp_path("torus3_rt.json");
  REQUIRE(ups("build --in " + path + " --out " + path2).exit_code == 0);
  CHECK(slurp(path2) == slurp(path));
}

TEST_CASE("build supports dual, tensor, and direct sum") {
  auto t2 = tmp_path("b_t2.json"), t1d = tmp_path("b_t1d.json");
  auto prod = tmp_path("b_prod.json"), summ = tmp_path("b_sum.json");
  REQUIRE(ups("build --family torus --n 2 --out " + t2).exit_code == 0);
  REQUIRE(ups("build --family torus --n 1 --dual --out " + t1d).exit_code == 0);
  CHECK(ups("tau --complex " + t1d).out == "-1\n");

  REQUIRE(ups("build --in " + t2 + " --tensor " + t1d + " --out " + prod).exit_code == 0);
  CHECK(ups("tau --complex " + prod).out == "1\n");

  REQUIRE(ups("build --in " + t2 + " --sum " + t1d + " --out " + summ).exit_code == 0);
  CHECK(ups("validate --in " + summ).exit_code == 0);
}

TEST_CASE("grid slice emission round-trips through complex JSON") {
  auto path = tmp_path("g72.json");
  REQUIRE(ups("grid --p 7 --spinc 2 --emit " + path).exit_code == 0);
  CHECK(ups("validate --in " + path).exit_code == 0);
  CHECK(ups("upsilon --complex " + path).out ==
        ups("upsilon --grid-p 7 --spinc 2").out);
  CHECK(slurp(path).find("\"spinc\": 2") != std::string::npos);
}

TEST_CASE("upsilon region forms agree: ht:<t>, region file, sweep") {
  auto rt = ups("upsilon --family torus --n 3 --region ht:1/2");
  REQUIRE(rt.exit_code == 0);
  CHECK(rt.out == "t,value\n1/2,-3/2\n");

  auto reg = tmp_path("reg.json");
  spit(reg, "{\"pieces\":[[{\"a\":\"1/2\",\"b\":\"3/2\",\"c\":0}]]}\n");
  auto rf = ups("upsilon --family torus --n 3 --region " + reg);
  REQUIRE(rf.exit_code == 0);
  CHECK(rf.out == "value\n-3/2\n");

  CHECK(ups("upsilon --family torus --n 3 --region ht:2").out == "t,value\n2,0\n");
  CHECK(ups("upsilon --family torus --n 3 --region ht:0").out == "t,value\n0,0\n");
}

TEST_CASE("v subcommand: unknot vanishing and surgery fold") {
  for (int m : {0, 5, 10})
    CHECK(ups("v --family unknot --m " + std::to_string(m)).out == "0\n");
  CHECK(ups("v --family torus --n 1 --m 0").out == "-2\n");
  CHECK(ups("v --family torus --n 1 --m 0 --surgery 1").out == "-2\n");
  CHECK(ups("v --family torus --n 1 --m 0 --surgery 3").out == "-3/2\n");
  CHECK(ups("v --family torus --n 1 --m -1").exit_code == 1);
}

TEST_CASE("models: raw fused complex is valid; knot form carries invariants") {
  auto raw = tmp_path("fused05.json"), knot = tmp_path("fused05k.json");
  REQUIRE(ups("models --fused 0,5 --emit " + raw).exit_code == 0);
  CHECK(ups("validate --in " + raw).exit_code == 0);
  // the raw model has two homology towers, so knot-type invariants refuse it
  CHECK(ups("tau --complex " + raw).exit_code == 1);

  REQUIRE(ups("models --fused 0,5 --knot-form --emit " + knot).exit_code == 0);
  CHECK(ups("tau --complex " + knot).out == "2\n");

  auto t2 = tmp_path("m_t2.json");
  REQUIRE(ups("build --family torus --n 2 --out " + t2).exit_code == 0);
  auto cmp = ups("compare --a " + knot + " --b " + t2 + " --iso");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.out.find("graded-iso: yes") != std::string::npos);

  CHECK(ups("models --fused 1,4 --knot-form").exit_code == 1);  // even wire
}

TEST_CASE("compare reports invariant equality and graded isomorphism") {
  auto a = tmp_path("cmp_a.json"), b = tmp_path("cmp_b.json");
  REQUIRE(ups("build --family torus --n 1 --out " + a).exit_code == 0);
  REQUIRE(ups("grid --p 3 --spinc 0 --emit " + b).exit_code == 0);
  // same knot up to the cover's correction shift: d differs, tau/upsilon agree
  auto r = ups("compare --a " + a + " --b " + b + " --iso");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("tau: 1 vs 1 — equal") != std::string::npos);
  CHECK(r.out.find("upsilon: equal") != std::string::npos);
  CHECK(r.out.find("graded-iso: yes (A-shift 0, M-shift -1/2)") != std::string::npos);

  CHECK(ups("compare --a " + a + " --b " + a + " --iso").exit_code == 0);

  auto c = tmp_path("cmp_c.json");
  REQUIRE(ups("build --family torus --n 2 --out " + c).exit_code == 0);
  CHECK(ups("compare --a " + a + " --b " + c).exit_code == 2);
}

TEST_CASE("lift: table header, central-class complex, zero classes") {
  auto tab = tmp_path("lift.csv");
  REQUIRE(ups("lift --family twist --n 4 --table " + tab).exit_code == 0);
  CHECK(slurp(tab).rfind("i,j,A,class\n", 0) == 0);

  auto s0 = tmp_path("lift_s0.json");
  REQUIRE(ups("lift --family torus --n 3 --s0 " + s0).exit_code == 0);
  CHECK(ups("validate --in " + s0).exit_code == 0);

  CHECK(ups("lift --family twist --n 2 --zero-classes").out == "-1,1\n");
  CHECK(ups("lift --family torus --n 2").exit_code == 1);  // no output chosen
}

TEST_CASE("obstruct slice: grid family data obstructs, square data passes") {
  auto r5 = ups("obstruct slice --grid-p 5");
  CHECK(r5.exit_code == 2);
  CHECK(r5.out == "obstructed: group order is not a perfect square\n");

  auto map33 = tmp_path("map33.json");
  spit(map33,
       "{\"group\":[3,3],\"upsilon\":{"
       "\"0,0\":[[0,0],[2,0]],\"0,1\":[[0,0],[2,0]],\"1,0\":[[0,0],[2,0]],"
       "\"1,1\":[[0,0],[2,0]],\"1,2\":[[0,0],[2,0]]}}\n");
  auto rp = ups("obstruct slice --upsilon-map " + map33);
  CHECK(rp.exit_code == 0);
  CHECK(rp.out.find("passes: vanishing square-root subgroup of order 3") == 0);

  // --group must agree with the file, --det with the group order
  CHECK(ups("obstruct slice --upsilon-map " + map33 + " --group 3,3").exit_code == 0);
  CHECK(ups("obstruct slice --upsilon-map " + map33 + " --group 9").exit_code == 1);
  CHECK(ups("obstruct slice --upsilon-map " + map33 + " --det 9").exit_code == 0);
  CHECK(ups("obstruct slice --upsilon-map " + map33 + " --det 10").exit_code == 1);

  // the cap can be lowered through the environment
  CHECK(ups_env("UPSILON_CAP=2", "obstruct slice --upsilon-map " + map33).exit_code == 1);
  CHECK(ups_env("UPSILON_CAP=banana", "obstruct slice --upsilon-map " + map33).exit_code == 1);
}

TEST_CASE("obstruct order: nonzero sums obstruct, missing subgroups warn") {
  auto r = ups("obstruct order --grid-p 9 --p 3");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("subgroup sums at t=1: -6") != std::string::npos);

  auto map33 = tmp_path("map33_order.json");
  spit(map33,
       "{\"group\":[3,3],\"upsilon\":{"
       "\"0,0\":[[0,0],[2,0]],\"0,1\":[[0,0],[2,0]],\"1,0\":[[0,0],[2,0]],"
       "\"1,1\":[[0,0],[2,0]],\"1,2\":[[0,0],[2,0]]}}\n");
  auto rz = ups("obstruct order --upsilon-map " + map33 + " --p 3");
  CHECK(rz.exit_code == 0);
  CHECK(rz.out.find("consistent with finite order") != std::string::npos);

  auto rv = ups("obstruct order --upsilon-map " + map33 + " --p 5");
  CHECK(rv.exit_code == 0);
  CHECK(rv.out.find("warning") != std::string::npos);

  CHECK(ups("obstruct order --grid-p 9 --p 4").exit_code == 1);  // not prime
}

TEST_CASE("obstruct independence rejects every relation for the default family") {
  auto r = ups("obstruct independence --primes 3,5 --bound 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("family independent") != std::string::npos);
  CHECK(ups("obstruct independence --primes 3,3 --bound 1").exit_code == 1);
  CHECK(ups("obstruct independence --primes 4 --bound 1").exit_code == 1);
}

TEST_CASE("validate: reports structural problems, fuzz driver is seeded") {
  auto bad = tmp_path("bad.json");
  spit(bad,
       "{\"generators\":[{\"name\":\"a\",\"A\":0,\"M\":\"0\",\"spinc\":null},"
       "{\"name\":\"b\",\"A\":0,\"M\":\"0\",\"spinc\":null}],"
       "\"arrows\":[{\"from\":\"a\",\"to\":\"b\",\"m\":0}]}\n");
  auto r = ups("validate --in " + bad);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("invalid:") == 0);

  auto rf = ups("validate --fuzz 15 --seed 11");
  CHECK(rf.exit_code == 0);
  CHECK(rf.out == "fuzz: 15 complexes checked (seed 11)\n");

  // invariant commands refuse a structurally invalid user complex
  CHECK(ups("tau --complex " + bad).exit_code == 1);
}

TEST_CASE("usage errors exit 1, help exits 0 and documents the flags") {
  CHECK(ups("--help").exit_code == 0);
  for (const std::string sub :
       {"build", "validate", "upsilon", "tau", "v", "grid", "models", "lift",
        "obstruct", "compare"})
    CHECK(ups("--help").out.find(sub) != std::string::npos);

  auto hu = ups("upsilon --help");
  CHECK(hu.exit_code == 0);
  CHECK(hu.out.find("--region") != std::string::npos);
  CHECK(ups("obstruct slice --help").out.find("--upsilon-map") != std::string::npos);

  CHECK(ups("").exit_code == 1);
  CHECK(ups("nosuchcommand").exit_code == 1);
  CHECK(ups("upsilon --no-such-flag").exit_code == 1);
  CHECK(ups("upsilon").exit_code == 1);  // no complex source
  CHECK(ups("upsilon --family torus").exit_code == 1);  // missing --n
  CHECK(ups("upsilon --family torus --n 2 --complex x.json").exit_code == 1);
  auto garbage = tmp_path("garbage.json");
  spit(garbage, "not json{");
  CHECK(ups("tau --complex " + garbage).exit_code == 1);
  CHECK(ups("tau --complex /no/such/file.json").exit_code == 1);
}
