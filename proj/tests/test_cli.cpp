#include "doctest.h"
#include "support.hpp"

#include "qcrb/cli.hpp"
#include "qcrb/error.hpp"
#include "qcrb/report.hpp"

#include <cstdlib>
#include <sstream>

using namespace qcrb;
using namespace qcrb::test;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
  Run r = run_cli(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return json::parse(r.out);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') out.push_back(cur), cur.clear();
    else cur += ch;
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("bounds command") {
  json env = run_json({"bounds", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--G", "1,0,0"});
  CHECK(env.contains("version"));
  CHECK(env.contains("config"));
  CHECK(env.contains("wall_ms"));
  const json& r = env["result"];
  CHECK(std::abs(r["C"]["value"].get<double>() - 16) < 1e-6);
  CHECK(std::abs(r["C_A"]["value"].get<double>() - 12) < 1e-6);
  CHECK(std::abs(r["C_R"]["value"].get<double>() - 12) < 1e-6);
  CHECK(r["ordering_ok"].get<bool>());
  CHECK_NOTHROW(validate_result("bounds", env["config"], r));

  // full matrix entry is equivalent to the (g1, g2, g3) triple
  json full = run_json({"bounds", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--G", "2,0.5,0.5,1"});
  json triple = run_json({"bounds", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--G", "1.5,0.5,0.5"});
  CHECK(full["result"]["C"]["value"].get<double>() == triple["result"]["C"]["value"].get<double>());
}

TEST_CASE("fisher command") {
  json env = run_json({"fisher", "--family", "r-fixed:0.5", "--theta", "1.5707963,0"});
  const json& r = env["result"];
  RealMatrix j = complex_matrix_from_json(r["J"]).real();
  CHECK(max_abs(RealMatrix(j - 0.25 * RealMatrix::Identity(2, 2))) < 1e-12);
  ComplexMatrix lt = complex_matrix_from_json(r["sld"][0]);
  ComplexMatrix lp = complex_matrix_from_json(r["sld"][1]);
  CHECK(max_abs(ComplexMatrix(lt - 0.5 * diag({-1, 1}))) < 1e-7);
  CHECK(max_abs(ComplexMatrix(lp - 0.5 * mat2(0, I, -I, 0))) < 1e-7);
  CHECK_NOTHROW(validate_result("fisher", env["config"], r));
}

TEST_CASE("frontier csv has one row per grid point") {
  Run r = run_cli({"frontier", "--family", "r-fixed:0.5", "--kind", "asymptotic", "--y", "-2:2:41",
                   "--z", "-2:2:41", "--format", "csv"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 1682);
  CHECK(ls[0] == "y,z,x,v11,v12,v22");
  // centre row: y = z = 0 gives x = (1 + r0) / r0^2 = 6
  bool found = false;
  for (const auto& l : ls) {
    auto f = split(l);
    if (f[0] == "0" && f[1] == "0") {
      CHECK(std::stod(f[2]) == doctest::Approx(6));
      found = true;
    }
  }
  CHECK(found);

  json env = run_json({"frontier", "--family", "r-fixed:0.5", "--y", "-1:1:5", "--z", "-1:1:5"});
  CHECK_NOTHROW(validate_result("frontier", env["config"], env["result"]));

  Run full = run_cli({"frontier", "--family", "full", "--theta", "0.5,1.5707963267948966,0",
                      "--kind", "asymptotic", "--y", "0:0:1", "--z", "0:0:1", "--format", "csv"});
  REQUIRE(full.code == 0);
  CHECK(lines(full.out)[0] == "y,z,x,v11,v12,v22,v00");
}

TEST_CASE("sweep over r0") {
  Run r = run_cli({"sweep", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--param", "r0",
                   "--range", "0.25:1:4", "--format", "csv"});
  REQUIRE(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "step_value,C,C_A,C_R,searched,gap_C_CA");
  const double r0s[] = {0.25, 0.5, 0.75, 1.0};
  for (int k = 0; k < 4; ++k) {
    const double r0 = r0s[k];
    CHECK(std::abs(std::stod(split(ls[k + 1])[5]) - 2 * (1 - r0) / (r0 * r0)) < 1e-9);
  }

  json env = run_json({"sweep", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--param", "r0",
                       "--range", "0.25:1:4"});
  CHECK_NOTHROW(validate_result("sweep", env["config"], env["result"]));
}

TEST_CASE("sweep over copies") {
  Run r = run_cli({"sweep", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--param", "n_copies",
                   "--range", "1:2:2", "--restarts", "6", "--iters", "80", "--seed", "2", "--format", "csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  const double s1 = std::stod(split(ls[1])[4]);
  const double s2 = std::stod(split(ls[2])[4]);
  CHECK(s2 <= s1 + 1e-6);
}

TEST_CASE("povm command round-trips through validation") {
  json env = run_json({"povm", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--restarts", "4",
                       "--iters", "40"});
  CHECK(env["result"]["best_value"].get<double>() >= 16 - 1e-6);
  CHECK_NOTHROW(validate_result("povm", env["config"], env["result"]));

  // a tampered estimator fails validation
  json bad = env["result"];
  bad["estimator"]["values"][0][0] = bad["estimator"]["values"][0][0].get<double>() + 0.1;
  CHECK_THROWS(validate_result("povm", env["config"], bad));
}

TEST_CASE("seed from the environment overrides the flag") {
  std::vector<std::string> args = {"povm", "--family", "r-fixed:0.5", "--theta", "1.5707963,0",
                                   "--restarts", "2", "--iters", "10", "--seed", "1"};
  setenv("QCRB_SEED", "9", 1);
  json a = run_json(args);
  unsetenv("QCRB_SEED");
  CHECK(a["result"]["seed"].get<std::uint64_t>() == 9);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"sweep", "--family", "r-fixed:0.5", "--param", "r0", "--range", "0:1:0"}).code == 1);
  CHECK(run_cli({"launch"}).code == 1);
  CHECK(run_cli({"bounds", "--family", "r-fixed:0.5", "--theta", "x,0"}).code == 1);
  CHECK(run_cli({"fisher", "--family", "r-fixed:0.5", "--theta", "1,0", "--format", "csv"}).code == 1);
  CHECK(run_cli({"bounds", "--family", "r-fixed:0.5", "--theta", "9,0"}).code == 2);
  CHECK(run_cli({"bounds", "--family", "r-fixed:0.5", "--theta", "1,0", "--G", "1,2,0"}).code == 2);
  CHECK(run_cli({"povm", "--family", "r-fixed:0.5", "--theta", "1,0", "--copies", "7"}).code == 2);
  CHECK(run_cli({"bounds", "--family", "thermal:3:4", "--theta", "0,0"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);

  // every error class lands in exactly one of {1, 2, 3}
  using K = ErrorKind;
  for (K k : {K::Usage, K::Hermiticity, K::Parameter, K::SupportMismatch, K::Capacity, K::UnsupportedFamily,
              K::Truncation, K::SingularMatrix, K::SingularState, K::DegenerateOutcome, K::InfeasiblePovm,
              K::OracleFailure, K::SearchFailure, K::NonConvergence}) {
    const int c = exit_code(k);
    CHECK((c == 1 || c == 2 || c == 3));
  }
  CHECK(exit_code(K::Usage) == 1);
  CHECK(exit_code(K::Parameter) == 2);
  CHECK(exit_code(K::SearchFailure) == 3);
}

TEST_CASE("range parsing") {
  auto r = cli::Range::parse("-2:2:5");
  auto v = r.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == -2);
  CHECK(v[2] == 0);
  CHECK(v.back() == 2);
  CHECK(cli::Range::parse("3:3:1").values() == std::vector<double>{3});
  CHECK_THROWS_AS(cli::Range::parse("1:2"), Error);
  CHECK_THROWS_AS(cli::Range::parse("1:2:0"), Error);
}

TEST_CASE("reports round-trip losslessly") {
  auto rep = compute_bounds(StateFamily::parse("full"), {0.4, 1.1, 0.7}, WeightMatrix::identity(3));
  json j = to_json(rep);
  BoundReport back = bound_report_from_json(json::parse(j.dump()));
  CHECK(*back.c.value == *rep.c.value);
  CHECK(*back.c_a.value == *rep.c_a.value);
  CHECK(*back.c_r.value == *rep.c_r.value);
  CHECK((back.sld.entries.array() == rep.sld.entries.array()).all());
  CHECK((back.rld->entries.array() == rep.rld->entries.array()).all());
  CHECK(back.family == rep.family);
  CHECK(to_json(back).dump() == j.dump());

  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(std::optional<double>{}).empty());
  CHECK(std::stod(csv_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv output ignores the global locale") {
  std::locale old = std::locale::global(std::locale::classic());
  try {
    std::locale::global(std::locale("de_DE.UTF-8"));
  } catch (const std::exception&) {
  }
  Run r = run_cli({"sweep", "--family", "r-fixed:0.5", "--theta", "1.5707963,0", "--param", "r0",
                   "--range", "0.5:0.5:1", "--format", "csv"});
  std::locale::global(old);
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].find("0.5,") == 0);
}
