#include "arakelov/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using arakelov::cli::run;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value_at(const Json& divisor, const std::string& t, int n, int m) {
  for (const auto& c : divisor["coefficients"]) {
    const auto& comp = c["component"];
    if (comp["t"] != t) continue;
    if (t == "int" && (comp["n"] != n || comp["m"] != m)) continue;
    return c["value"];
  }
  return "missing";
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("phi for p = 23 toward C_0") {
  const auto r = call({"phi", "--p", "23", "--e", "1", "--target", "zero"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const auto& d = j["divisor"];
  CHECK(value_at(d, "inf", 0, 0) == "0/1");
  CHECK(value_at(d, "int", 2, 1) == "-3/11");
  CHECK(value_at(d, "int", 3, 1) == "-2/11");
  CHECK(value_at(d, "int", 3, 2) == "-4/11");
  CHECK(value_at(d, "zero", 0, 0) == "-6/11");
  CHECK(d["normalization"] == "zero_at_infinity");

  const auto solved = call({"phi", "--p", "23", "--e", "1", "--target", "zero", "--method", "solve"});
  REQUIRE(solved.code == 0);
  CHECK(Json::parse(solved.out)["divisor"] == d);
}

TEST_CASE("phi toward an interior component") {
  const auto r = call({"phi", "--p", "23", "--target", "int", "--n", "2", "--m", "1"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["target"] == Json{{"t", "int"}, {"n", 2}, {"m", 1}});
  CHECK(value_at(j["divisor"], "int", 2, 1) == "-7/11");
  CHECK(call({"phi", "--p", "23", "--target", "int", "--n", "2"}).code == 2);
  CHECK(call({"phi", "--p", "23", "--target", "int", "--n", "5", "--m", "1"}).code == 2);
  CHECK(call({"phi", "--p", "23", "--target", "zero", "--n", "1"}).code == 2);
}

TEST_CASE("fiber, omega, cusp and matrix commands") {
  const auto f = call({"fiber", "--p", "19", "--e", "2"});
  REQUIRE(f.code == 0);
  const Json fj = Json::parse(f.out);
  CHECK(fj["s"] == 2);
  CHECK(fj["genus"] == 1);
  CHECK(fj["eichler_mass"] == "3/2");

  const auto o = call({"omega", "--p", "23"});
  REQUIRE(o.code == 0);
  CHECK(value_at(Json::parse(o.out)["divisor"], "int", 3, 2) == "-4/11");

  const auto c = call({"cusp", "--p", "23"});
  REQUIRE(c.code == 0);
  const Json cj = Json::parse(c.out)["divisor"];
  CHECK(cj["normalization"] == "unpinned");
  CHECK(value_at(cj, "inf", 0, 0) == "3/11");
  CHECK(value_at(cj, "int", 3, 1) == "1/11");

  const auto m = call({"matrix", "--p", "23"});
  REQUIRE(m.code == 0);
  const Json mj = Json::parse(m.out);
  CHECK(mj["matrix"][0][0] == -3);
  CHECK(mj["matrix"].size() == mj["basis"].size());
}

TEST_CASE("bound command") {
  const auto r = call({"bound", "--p", "101", "--err-mode", "p3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["p"] == 101);
  CHECK(j["genus"] == 8);
  CHECK(j["b"]["upper"].get<std::string>().find('/') != std::string::npos);
  CHECK(j.contains("theta_height_no_mumford"));
  CHECK(r.err.find("placeholder") != std::string::npos);
  CHECK(r.err.find("c_MU") != std::string::npos);
  CHECK(call({"bound", "--p", "61"}).code == 2);
  CHECK(call({"bound", "--p", "101", "--err-mode", "huge"}).code == 2);
}

TEST_CASE("bezout command") {
  const auto r = call({"bezout", "--p", "101", "--dv", "0", "--dw", "0", "--degv", "3", "--degw", "4", "--hv", "5",
                       "--hw", "7/2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["total"]["upper"] == "61/4");
  CHECK(j["error_term"]["expr"] == "0/1");
  CHECK(call({"bezout", "--p", "23", "--dv", "2", "--dw", "1", "--degv", "1", "--degw", "1", "--hv", "1", "--hw",
              "1"})
            .code == 2);
  CHECK(call({"bezout", "--p", "101", "--dv", "0", "--dw", "0", "--degv", "0", "--degw", "4", "--hv", "5", "--hw",
              "1"})
            .code == 2);
}

TEST_CASE("ledger selection") {
  const auto good = temp_file("arakelov_test_ledger.txt", "#provenance: placeholder\nc_MU = 2\n");
  const auto bad = temp_file("arakelov_test_bad_ledger.txt", "c_MU = 2\n");
  const auto base = call({"bound", "--p", "101"});
  const auto tuned = call({"bound", "--p", "101", "--ledger", good.string()});
  REQUIRE(tuned.code == 0);
  CHECK(tuned.out != base.out);
  CHECK(tuned.err.find("c_MU=2/1") != std::string::npos);
  CHECK(call({"bound", "--p", "101", "--ledger", bad.string()}).code == 2);
  CHECK(call({"fiber", "--p", "23", "--ledger", bad.string()}).code == 2);
  CHECK(call({"bound", "--p", "101", "--ledger", "/nonexistent/ledger"}).code == 2);

  ::setenv("ARAKELOV_LEDGER", good.string().c_str(), 1);
  const auto from_env = call({"bound", "--p", "101"});
  ::unsetenv("ARAKELOV_LEDGER");
  CHECK(from_env.out == tuned.out);
}

TEST_CASE("winding and brumer-scan commands") {
  const auto w = call({"winding", "--p", "37"});
  REQUIRE(w.code == 0);
  const Json wj = Json::parse(w.out);
  CHECK(wj["dim_Je"] == 1);
  CHECK(wj["dim_minus"] == 1);
  CHECK(wj["ratio"] == "1/2");

  const auto csv = call({"brumer-scan", "--from", "19", "--to", "97", "--out", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "p,g,dim_plus,dim_minus,dim_Je,ratio,brumer_weak");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::stoi(cells[4]) <= std::stoi(cells[3]));
  }
  CHECK(rows == 18);  // primes 19..97

  const auto js = call({"brumer-scan", "--from", "19", "--to", "41", "--format", "json", "--jobs", "2"});
  REQUIRE(js.code == 0);
  CHECK(Json::parse(js.out)["reports"].size() == 6);
  CHECK(call({"brumer-scan", "--from", "11", "--to", "41"}).code == 2);

  const auto file = std::filesystem::temp_directory_path() / "arakelov_scan.csv";
  REQUIRE(call({"brumer-scan", "--from", "19", "--to", "41", "--format", "csv", "--out", file.string()}).code == 0);
  std::ifstream in(file);
  std::getline(in, line);
  CHECK(line == "p,g,dim_plus,dim_minus,dim_Je,ratio,brumer_weak");
}

TEST_CASE("theta command") {
  const auto r = call({"theta", "--tau", "1i", "--z", "0", "--tol", "1e-13"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["value"]["re"].get<double>() == doctest::Approx(1.086434811213308).epsilon(1e-13));
  CHECK(j["g"] == 1);
  const auto g2 = call({"theta", "--tau", "1i", "0.1+0.2i", "0.1+0.2i", "2i", "--z", "0.3-0.1i", "-0.2+0.4i"});
  REQUIRE(g2.code == 0);
  CHECK(Json::parse(g2.out)["g"] == 2);
  CHECK(call({"theta", "--tau", "-1i", "--z", "0"}).code == 2);
  CHECK(call({"theta", "--tau", "1i", "--z", "abc"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"nope"}).code == 2);
  CHECK(call({"fiber", "--p", "23", "--bogus", "1"}).code == 2);
  CHECK(call({"fiber", "--p", "21"}).code == 2);
  CHECK(call({"fiber", "--p", "17"}).code == 2);
  CHECK(call({"fiber"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"phi", "--p", "23", "--e", "1", "--target", "zero"},
           {"bound", "--p", "101", "--err-mode", "p3"},
           {"brumer-scan", "--from", "19", "--to", "97", "--out", "csv", "--jobs", "3"}}) {
    const auto a = call(args);
    const auto b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
