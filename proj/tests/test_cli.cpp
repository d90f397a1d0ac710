#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kOut = "/tmp/rmf_cli_out.txt";
const std::string kErr = "/tmp/rmf_cli_err.txt";

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + RMF_BIN " " + args + " >" + kOut + " 2>" + kErr;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(kOut);
  r.err = slurp(kErr);
  return r;
}

std::size_t line_count(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

nlohmann::json parse_out(const RunResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("construct: word enumeration line counts") {
  const auto cst = run("construct --field 3^1:3:1 --code cst:k=2,T=1");
  CHECK(cst.code == 0);
  CHECK(line_count(cst.out) == 729);
  CHECK(cst.err.find("size=729") != std::string::npos);
  CHECK(cst.err.find("claimed_distance=2") != std::string::npos);

  const auto gab = run("construct --field 2^1:3:1 --code gab:k=2");
  CHECK(gab.code == 0);
  CHECK(line_count(gab.out) == 64);
}

TEST_CASE("construct: invalid specs and guard exit 2") {
  CHECK(run("construct --field 3^1:3:1 --code cst:k=2,T=").code == 2);
  CHECK(run("construct --field 0^1:3:1 --code gab:k=1").code == 2);
  CHECK(run("construct --field 3^1:3:1 --code gab:k=2 --guard 10").code == 2);
  CHECK(run("construct --field 3^1:3:1").code == 2);  // missing --code
  CHECK(run("").code == 2);                           // missing subcommand
  CHECK(run("--help").code == 0);
}

TEST_CASE("verify: cst certifies MRD with closure flags") {
  const auto r = run("verify --field 3^1:3:1 --code cst:k=2,T=1 --mode exhaustive");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("is_mrd") == true);
  CHECK(j.at("min_distance") == 2);
  CHECK(j.at("certified") == true);
  CHECK(j.at("flags").at("fqn_closed") == true);
  CHECK(j.at("flags").at("additive") == false);
  CHECK(j.at("distance_distribution").at("2") == 123201);
}

TEST_CASE("verify: oonl certifies MRD but is not fq-closed") {
  const auto r = run("verify --field 3^1:3:1 --code oonl:k=2,I=1 --mode exhaustive");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("is_mrd") == true);
  CHECK(j.at("flags").at("fq_closed") == false);
  CHECK(j.at("flags").at("fqn_closed") == false);
}

TEST_CASE("verify: sampled mode is refused for certification") {
  const auto r = run("verify --field 3^1:3:1 --code gab:k=2 --mode sampled");
  CHECK(r.code == 2);
  CHECK(r.err.find("cannot certify") != std::string::npos);
}

TEST_CASE("verify: corrupted word file fails with a witness pair") {
  const std::string words = "/tmp/rmf_cli_words.txt";
  REQUIRE(run("construct --field 2^1:3:1 --code gab:k=2 --out " + words).code == 0);
  REQUIRE(std::system(("sed -i '2s/.*/1,1,1/' " + words).c_str()) == 0);
  const auto r =
      run("verify --field 2^1:3:1 --code-file " + words + " --claimed 2 --mode exhaustive");
  CHECK(r.code == 1);
  CHECK(r.err.find("measured 1") != std::string::npos);
  CHECK(r.err.find("witness pair") != std::string::npos);

  // malformed line widths are rejected before any analysis
  REQUIRE(std::system(("sed -i '3s/.*/1,1/' " + words).c_str()) == 0);
  CHECK(run("verify --field 2^1:3:1 --code-file " + words + " --claimed 2").code == 2);
}

TEST_CASE("verify: identical configs give byte-identical reports") {
  const auto a = run("verify --field 3^1:3:1 --code cst:k=2,T=1 --mode quotient");
  const auto b = run("verify --field 3^1:3:1 --code cst:k=2,T=1 --mode quotient");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("runtime") == std::string::npos);

  const auto t = run("verify --field 3^1:3:1 --code cst:k=2,T=1 --mode quotient --timing");
  CHECK(t.out.find("runtime") != std::string::npos);

  // the worker-count hint never changes the bytes
  const auto c = run("verify --field 3^1:3:1 --code cst:k=2,T=1 --mode quotient",
                     "RMF_THREADS=7 ");
  CHECK(c.out == a.out);
}

TEST_CASE("verify: csv format carries the distribution only") {
  const auto r = run("verify --field 2^1:3:1 --code gab:k=2 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out == "rank,pairs\n2,1568\n3,448\n");
}

TEST_CASE("geometry: cone construction checks pass at 2^1:4:1 k=3") {
  const auto r = run("geometry --field 2^1:4:1 --k 3 --T 1");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("pass") == true);
  CHECK(j.at("sizes").at("cone") == 273);
  CHECK(j.at("sizes").at("base") == 17);
  CHECK(j.at("checks").at("vertex_embedding") == true);
  CHECK(j.at("checks").at("cone_exterior") == true);
}

TEST_CASE("geometry: empty vertex at 3^1:3:1 k=2 and k bounds") {
  const auto r = run("geometry --field 3^1:3:1 --k 2 --T 1");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("pass") == true);
  CHECK(j.at("sizes").at("cone") == 28);
  CHECK(j.at("sizes").at("base") == 28);

  CHECK(run("geometry --field 3^1:3:1 --k 3 --T 1").code == 2);
  CHECK(run("geometry --field 3^1:3:1 --k 1 --T 1").code == 2);
  CHECK(run("geometry --field 3^1:3:1 --k 2 --T 2").code == 2);  // T needs label 1
}

TEST_CASE("compare: cst vs oonl is distinguished") {
  const auto r = run("compare --field 3^1:3:1 --code1 cst:k=2,T=1 --code2 oonl:k=2,I=1 "
                     "--out /tmp/rmf_cli_cmp.json");
  CHECK(r.code == 0);
  CHECK(r.out.find("DISTINGUISHED") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp("/tmp/rmf_cli_cmp.json"));
  CHECK(j.at("verdict") == "DISTINGUISHED");
  CHECK(j.at("census1") == 28);
  CHECK(j.at("census2") == 1);
}

TEST_CASE("compare: equivalent pair and self-compare are inconclusive") {
  const auto r = run("compare --field 3^1:3:1 --code1 gab:k=2 --code2 cst:k=2,T=1,2");
  CHECK(r.code == 3);
  CHECK(r.out.find("INCONCLUSIVE") != std::string::npos);

  const auto s = run("compare --field 3^1:3:1 --code1 cst:k=2,T=1 --code2 cst:k=2,T=1");
  CHECK(s.code == 3);
}

TEST_CASE("puncture: the one-slot drop report at 2^1:4:1") {
  const auto r = run("puncture --field 2^1:4:1 --code cst:k=3,T=1 --u 1");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("rows") == 3);
  CHECK(j.at("cols") == 4);
  CHECK(j.at("size") == 256);
  CHECK(j.at("distance") == 2);
  CHECK(j.at("is_mrd") == true);
  CHECK(j.at("singleton_bound") == 256);
  CHECK(j.at("distribution").at("2") == 28800);
  CHECK(j.at("distribution").at("3") == 3840);
}

TEST_CASE("puncture: u bounds rejected") {
  CHECK(run("puncture --field 2^1:4:1 --code cst:k=3,T=1 --u 0").code == 2);
  CHECK(run("puncture --field 2^1:4:1 --code cst:k=3,T=1 --u 4").code == 2);
}

TEST_CASE("idealiser: gabidulin over 2^1:3:1 gives twin fields of size 8") {
  const auto r = run("idealiser --field 2^1:3:1 --code gab:k=2");
  REQUIRE(r.code == 0);
  const auto j = parse_out(r);
  CHECK(j.at("left").at("size") == 8);
  CHECK(j.at("left").at("is_field") == true);
  CHECK(j.at("right").at("size") == 8);
  CHECK(j.at("right").at("is_field") == true);

  // q^{n^2} candidates exceed the scan guard on a larger field
  const auto g = run("idealiser --field 3^1:4:1 --code gab:k=2");
  CHECK(g.code == 2);
}
