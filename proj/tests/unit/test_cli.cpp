#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qrubin/qfun.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run qcalc(const std::string& args, const std::string& env = "") {
  const auto err_path = std::filesystem::temp_directory_path() / ("qcalc_err_" + std::to_string(::getpid()));
  const std::string cmd = env + " " + QCALC_EXE + " " + args + " 2>" + err_path.string();
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = ::pclose(p);
  std::ifstream in(err_path);
  std::stringstream err;
  err << in.rdbuf();
  std::filesystem::remove(err_path);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kExample71 = "solve --q 0.5 --a0 \"1/q\" --a1 0 --a2 1 --b 0";

}  // namespace

TEST_CASE("solve reproduces q_cos for the constant-coefficient example") {
  const Run r = qcalc(kExample71 + " --b1 1 --b2 0");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 10);
  CHECK(rows[0] == std::vector<std::string>{"k", "x", "re(y)", "im(y)", "re(dqy)", "im(dqy)", "residual"});
  const qrubin::QContext ctx(0.5);
  int zero_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    zero_rows += rows[i][0] == "zero";
    const double x = std::stod(rows[i][1]);
    CHECK(std::abs(std::stod(rows[i][2]) - qrubin::q_cos(qrubin::Complex(x), ctx).real()) < 1e-8);
    CHECK(std::abs(std::stod(rows[i][4]) + qrubin::q_sin(qrubin::Complex(x), ctx).real()) < 1e-8);
  }
  CHECK(zero_rows == 1);
}

TEST_CASE("solve output is byte-identical across runs and uses the fixed number format") {
  const Run a = qcalc(kExample71 + " --b1 1 --b2 0");
  const Run b = qcalc(kExample71 + " --b1 1 --b2 0");
  CHECK(a.out == b.out);
  CHECK(a.out.find('\r') == std::string::npos);
  CHECK(a.out.find("E+") == std::string::npos);
  const auto rows = csv_rows(a.out);
  CHECK(rows[1][1].find("e-") != std::string::npos);
  CHECK(rows[1][1].size() == std::string("-2.5000000000000000e-01").size());
}

TEST_CASE("zero data give an all-zero table") {
  const Run r = qcalc(kExample71 + " --b1 0 --b2 0");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (int c = 2; c < 6; ++c) CHECK(std::stod(rows[i][c]) == 0.0);
}

TEST_CASE("validation errors exit 3 with a one-line diagnostic") {
  const Run r = qcalc("solve --q 0.5 --a0 0 --a2 1");
  CHECK(r.code == 3);
  CHECK(r.err.find("a0 vanishes") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(qcalc("verify --q 1.5 --suite symbols").code == 3);
  CHECK(qcalc("solve --q 0.5 --a2 \"1 +\"").code == 3);
  CHECK(qcalc("solve --a2 1").code == 3);
  CHECK(qcalc("table --q 0.5 --funcs tan").code == 3);
  CHECK(qcalc("frobnicate").code == 3);
  CHECK(qcalc("--help").code == 0);
}

TEST_CASE("a solve that cannot contract exits 2") {
  // A2 = -1/(q a0) = -2e6 needs h ~ 1e-7, inside the innermost ring 2^-3 of this window
  const Run r = qcalc("solve --q 0.5 --a0 1e-6 --a2 1 --kmax 3");
  CHECK(r.code == 2);
  CHECK(r.err.find("not contracting") != std::string::npos);
}

TEST_CASE("a residual above --tol exits 1") {
  // the solve itself converges to 1e-10; asking for a residual below rounding cannot succeed
  const Run r = qcalc(kExample71 + " --b1 1 --b2 0 --tol 1e-300");
  CHECK(r.code == 1);
}

TEST_CASE("table rows, columns and symmetry") {
  const Run r = qcalc("table --q 0.5 --kmin 0 --kmax 4 --funcs cos");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "q_cos"});
  CHECK(rows.size() == 12);  // header, 10 nonzero points, the origin
  CHECK(rows[6][0] == "0.0000000000000000e+00");
  CHECK(rows[6][1] == "1.0000000000000000e+00");

  const auto full = csv_rows(qcalc("table --q 0.5 --kmin 0 --kmax 4").out);
  CHECK(full[0] == std::vector<std::string>{"x", "q_cos", "q_sin", "q_exp_re", "q_exp_im"});
  const std::size_t n = full.size() - 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& a = full[i];
    const auto& b = full[n + 1 - i];
    CHECK(std::stod(a[1]) == std::stod(b[1]));
    CHECK(std::stod(a[2]) == -std::stod(b[2]));
  }
}

TEST_CASE("json output mirrors the csv rows") {
  const Run c = qcalc("table --q 0.5 --kmin 0 --kmax 2");
  const Run j = qcalc("table --q 0.5 --kmin 0 --kmax 2 --format json");
  REQUIRE(j.code == 0);
  const auto rows = csv_rows(c.out);
  const nlohmann::json doc = nlohmann::json::parse(j.out);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == rows.size() - 1);
  for (std::size_t i = 0; i < doc.size(); ++i)
    for (std::size_t k = 0; k < rows[0].size(); ++k) CHECK(doc[i][rows[0][k]].get<double>() == std::stod(rows[i + 1][k]));
}

TEST_CASE("wronskian prints W with its residual columns") {
  const Run r = qcalc("wronskian --q 0.5 --a0 1 --a2 1");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  CHECK(rows[0] == std::vector<std::string>{"x", "re(W)", "im(W)", "abel_resid", "liouville_resid"});
  bool origin = false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][0]) == 0.0) {
      origin = true;
      CHECK(std::abs(std::stod(rows[i][1]) - 1.0) < 1e-8);
      CHECK(rows[i][3] == "nan");
    }
  CHECK(origin);
}

TEST_CASE("verify reports per check and sets the exit code") {
  const Run r = qcalc("verify --q 0.5 --suite symbols");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS ", 0) == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(qcalc("verify --q 0.9 --suite fun").code == 0);
}

TEST_CASE("QCALC_SERIES_TOL overrides the series tolerance") {
  const Run tight = qcalc("table --q 0.5 --kmin -3 --kmax 0 --funcs cos");
  const Run loose = qcalc("table --q 0.5 --kmin -3 --kmax 0 --funcs cos", "QCALC_SERIES_TOL=1e-3");
  REQUIRE(loose.code == 0);
  CHECK(tight.out != loose.out);
  CHECK(qcalc("table --q 0.5 --kmax 1", "QCALC_SERIES_TOL=abc").code == 3);
}
