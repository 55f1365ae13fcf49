#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HOFF_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string temp_path(const std::string& name) { return std::string(HOFF_TEST_TMP) + "/" + name; }

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("mobius-sum prints the exact sum") {
  const auto r = run("mobius-sum --p 2 --n 2 --monic");
  CHECK(r.status == 0);
  CHECK(r.out == "0\n");
  CHECK(run("mobius-sum --p 3 --n 1 --monic").out == "-3\n");
  const auto j = nlohmann::json::parse(run("mobius-sum --p 2 --n 1 --monic --format json").out);
  CHECK(j.at("sum") == -2);
}

TEST_CASE("configuration errors exit with status 2") {
  CHECK(run("correlation --p 5 --k 7 --n 2").status == 2);
  CHECK(run("correlation --p 4 --k 2 --n 2").status == 2);
  CHECK(run("mobius-sum --p 2 --n 2 --bogus").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("decay --p 3 --k 2 --n 6..2").status == 2);
}

TEST_CASE("budget refusal exits with status 3") {
  CHECK(run("correlation --p 3 --k 2 --n 9 --budget 100").status == 3);
  CHECK(run("mobius-sum --p 2 --n 20 --budget 1000").status == 3);
}

TEST_CASE("HOFF_BUDGET caps enumeration") {
  const std::string cmd = "HOFF_BUDGET=50 " + std::string(HOFF_CLI) + " correlation --p 3 --k 2 --n 5 >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(raw) == 3);
}

TEST_CASE("decay output is byte-identical across runs") {
  const auto a = run("decay --p 3 --k 2 --n 2..6 --samples 50 --seed 7");
  const auto b = run("decay --p 3 --k 2 --n 2..6 --samples 50 --seed 7");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("n,max_abs_S,mean_abs_S,slope\n", 0) == 0);
  CHECK(a.out.find('\r') == std::string::npos);
}

TEST_CASE("artifacts go to --out") {
  const std::string path = temp_path("corr.json");
  CHECK(run("correlation --p 3 --k 2 --n 3 --seed 4 --dichotomy --out " + path).status == 0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.contains("dichotomy"));
  CHECK(j.at("p") == 3);
}

TEST_CASE("JSON input files") {
  const std::string form = temp_path("form.json");
  write_file(form, R"({"p": 2, "dims": [2, 2], "entries": [[0, 0, 1], [1, 1, 1]]})");
  const auto r = run("bias --input " + form);
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("bias").at("numerator") == "1");
  CHECK(j.at("bias").at("exponent") == 2);

  const std::string bad = temp_path("bad.json");
  write_file(bad, R"({"p": 2, "dims": [2, 2], "entries": [[0, 0)");
  CHECK(run("bias --input " + bad).status == 1);
  CHECK(run("bias --input " + temp_path("missing.json")).status == 1);

  const std::string poly = temp_path("poly.json");
  write_file(poly, R"({"p": 3, "n": 1, "terms": [[2, 1]]})");
  const auto g = run("gowers-inverse --input " + poly);
  REQUIRE(g.status == 0);
  CHECK(std::abs(nlohmann::json::parse(g.out).at("gowers_norm").get<double>() - 0.7598356856515925) < 1e-9);
}

TEST_CASE("every subcommand runs on a small instance") {
  CHECK(run("approx-ml --p 2 --k 2 --n 2 --eps 0.3 --seed 3").status == 0);
  CHECK(run("approx-poly --p 3 --k 2 --n 2 --eps 0.5 --seed 3").status == 0);
  CHECK(run("variety --mode density --p 2 --k 2 --n 2 --r 2").status == 0);
  CHECK(run("variety --mode finder --p 2 --k 2 --n 2 --r 2").status == 0);
  CHECK(run("variety --mode fiber --p 2 --dims 1,2,2 --c 1/2").status == 0);
  CHECK(run("cascade --p 3 --k 2 --n 7 --m 2 --d 1").status == 0);
  CHECK(run("correlation --p 3 --k 2 --n 3 --lower --seed 2").status == 0);
  CHECK(run("verify --criterion 1").status == 0);
}
