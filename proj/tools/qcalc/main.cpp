#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qrubin/coeff_expr.hpp"
#include "qrubin/errors.hpp"
#include "qrubin/ivp.hpp"
#include "qrubin/qfun.hpp"
#include "qrubin/qops.hpp"
#include "qrubin/verify.hpp"
#include "qrubin/wronskian.hpp"

using namespace qrubin;

namespace {

constexpr int kOk = 0, kFailed = 1, kNotContracting = 2, kInvalid = 3;

/// A table cell: either text (the "zero" tag) or a number.
struct Cell {
  std::string text;
  double number = 0.0;
  bool is_text = false;
};
Cell num(double v) { return {{}, v, false}; }
Cell tag(std::string s) { return {std::move(s), 0.0, true}; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t j = 0; j < header.size(); ++j) {
          if (r[j].is_text) obj[header[j]] = r[j].text;
          else if (std::isfinite(r[j].number)) obj[header[j]] = r[j].number;
          else obj[header[j]] = nullptr;
        }
        arr.push_back(std::move(obj));
      }
      os << arr.dump(2) << '\n';
      return;
    }
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j)
        os << (j ? "," : "") << (r[j].is_text ? r[j].text : format_real(r[j].number));
      os << '\n';
    }
  }
};

Cell k_cell(const LatticePoint& p) { return p.is_zero() ? tag("zero") : tag(std::to_string(p.k)); }

QContext make_context(double q) {
  double tol = 1e-14;
  if (const char* env = std::getenv("QCALC_SERIES_TOL")) {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw DomainError(std::string("QCALC_SERIES_TOL is not a number: ") + env);
  }
  return QContext(q, tol);
}

/// Flags shared by solve and wronskian.
struct EquationFlags {
  double q = 0.0;
  std::string a0 = "1", a1 = "0", a2 = "0", b = "0", b1 = "1", b2 = "0";
  int kmin = 0;
  int kmax = 0;  // 0 asks for the default depth
  double tol = 1e-10;
  int max_iter = 500;
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--q", q, "lattice ratio in (0,1)")->required();
    cmd->add_option("--a0", a0, "leading coefficient, expression in x");
    cmd->add_option("--a1", a1, "first-order coefficient");
    cmd->add_option("--a2", a2, "zeroth-order coefficient");
    cmd->add_option("--b", b, "source term");
    cmd->add_option("--b1", b1, "y(0), complex constant");
    cmd->add_option("--b2", b2, "dq y(0), complex constant");
    cmd->add_option("--kmin", kmin, "outermost ring");
    cmd->add_option("--kmax", kmax, "innermost ring");
    cmd->add_option("--tol", tol, "Picard tolerance and residual threshold");
    cmd->add_option("--max-iter", max_iter, "Picard iteration cap");
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  SecondOrderSpec spec(const QContext& ctx) const {
    auto coeff = [&](const std::string& text) -> Coefficient {
      const CoeffExpr e = CoeffExpr::parse(text, ctx.q());
      return [e](double x) { return e(x); };
    };
    if (!(tol > 0.0)) throw DomainError("--tol must be positive");
    if (max_iter < 1) throw DomainError("--max-iter must be at least 1");
    const int depth = kmax != 0 ? kmax : deep_k_max(ctx.q());
    SecondOrderSpec s{coeff(a0), coeff(a1), coeff(a2), coeff(b), parse_complex(b1, ctx.q()),
                      parse_complex(b2, ctx.q()), build_lattice(ctx, kmin, depth)};
    s.validate();
    return s;
  }
};

int cmd_solve(const EquationFlags& f) {
  const QContext ctx = make_context(f.q);
  const SecondOrderSpec s = f.spec(ctx);
  const SecondOrderSolution sol = solve_second_order_linear(s, f.tol, f.max_iter);
  const LatticeFn& y = sol.combined.y();
  const LatticeFn& dy = sol.combined.dy();
  const Eigen::VectorXd res = equation_residual_profile(s, y);
  const QLattice& lat = y.lattice();

  Table t{{"k", "x", "re(y)", "im(y)", "re(dqy)", "im(dqy)", "residual"}, {}};
  for (Eigen::Index i = 0; i < lat.size(); ++i)
    t.rows.push_back({k_cell(lat.point_at(i)), num(lat.points()[i]), num(y[i].real()), num(y[i].imag()),
                      num(dy[i].real()), num(dy[i].imag()), num(res[i])});
  t.write(std::cout, f.format);
  if (!(sol.combined.residual <= f.tol)) {
    std::cerr << "qcalc: residual " << format_real(sol.combined.residual) << " exceeds tol "
              << format_real(f.tol) << '\n';
    return kFailed;
  }
  return kOk;
}

int cmd_wronskian(const EquationFlags& f) {
  const QContext ctx = make_context(f.q);
  const SecondOrderSpec s = f.spec(ctx);
  const SecondOrderSolution sol = solve_second_order_linear(s, f.tol, f.max_iter);
  const LatticeFn W = wronskian(sol.even.y(), sol.odd.y());
  const QLattice& lat = W.lattice();
  const Complex w0 = W[lat.zero_index()];

  Table t{{"x", "re(W)", "im(W)", "abel_resid", "liouville_resid"}, {}};
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const LatticePoint p = lat.point_at(i);
    double abel = std::nan(""), liou = std::nan("");
    if (!p.is_zero()) {
      const double x = lat.points()[i];
      const double scale = std::max(1.0, std::abs(W[i]));
      if (W.has(p.inward()))
        abel = std::abs(W(p.inward()) - (1.0 + x * (1.0 - f.q) * abel_E(s, p)) * W[i]) / scale;
      try {
        liou = std::abs(W[i] - liouville_wq(s, w0, x)) / scale;
      } catch (const Error&) {
      }
    }
    t.rows.push_back({num(lat.points()[i]), num(W[i].real()), num(W[i].imag()), num(abel), num(liou)});
  }
  t.write(std::cout, f.format);
  return kOk;
}

int cmd_table(double q, int kmin, int kmax, const std::string& funcs, const std::string& format) {
  const QContext ctx = make_context(q);
  bool cos = false, sin = false, exp = false;
  std::stringstream ss(funcs);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "cos") cos = true;
    else if (item == "sin") sin = true;
    else if (item == "exp") exp = true;
    else throw DomainError("unknown function '" + item + "' in --funcs");
  }
  const QLattice lat = build_lattice(ctx, kmin, kmax);
  Table t{{"x"}, {}};
  if (cos) t.header.push_back("q_cos");
  if (sin) t.header.push_back("q_sin");
  if (exp) {
    t.header.push_back("q_exp_re");
    t.header.push_back("q_exp_im");
  }
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Complex x = lat.points()[i];
    std::vector<Cell> row{num(x.real())};
    if (cos) row.push_back(num(q_cos(x, ctx).real()));
    if (sin) row.push_back(num(q_sin(x, ctx).real()));
    if (exp) {
      const Complex e = q_exp(x, ctx);
      row.push_back(num(e.real()));
      row.push_back(num(e.imag()));
    }
    t.rows.push_back(std::move(row));
  }
  t.write(std::cout, format);
  return kOk;
}

int cmd_verify(double q, const std::string& suite) {
  const QContext ctx = make_context(q);
  bool all = true;
  for (const CheckResult& c : run_verify_suite(suite, ctx)) {
    all = all && c.passed;
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_residual=" << format_real(c.value)
              << "  tol=" << format_real(c.tolerance) << '\n';
  }
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-difference calculus on the lattice {+-q^k} u {0}"};
  app.require_subcommand(1);

  EquationFlags solve_flags, wr_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve a second-order linear q-difference IVP");
  solve_flags.attach(solve);
  CLI::App* wr = app.add_subcommand("wronskian", "q-Wronskian of the fundamental pair of an equation");
  wr_flags.attach(wr);

  double tq = 0.0;
  int tkmin = 0, tkmax = 20;
  std::string funcs = "cos,sin,exp", tformat = "csv";
  CLI::App* table = app.add_subcommand("table", "tabulate cos(x,q^2), sin(x,q^2), e(x,q^2)");
  table->add_option("--q", tq)->required();
  table->add_option("--kmin", tkmin);
  table->add_option("--kmax", tkmax);
  table->add_option("--funcs", funcs, "comma-separated subset of cos,sin,exp");
  table->add_option("--format", tformat)->check(CLI::IsMember({"csv", "json"}));

  double vq = 0.0;
  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--q", vq)->required();
  verify->add_option("--suite", suite)->check(CLI::IsMember(verify_suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qcalc: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (*solve) return cmd_solve(solve_flags);
    if (*wr) return cmd_wronskian(wr_flags);
    if (*table) return cmd_table(tq, tkmin, tkmax, funcs, tformat);
    if (*verify) return cmd_verify(vq, suite);
  } catch (const NotContracting& e) {
    std::cerr << "qcalc: not contracting: " << e.what() << '\n';
    return kNotContracting;
  } catch (const DomainError& e) {
    std::cerr << "qcalc: " << e.what() << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "qcalc: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "qcalc: " << e.what() << '\n';
    return kFailed;
  }
  return kInvalid;
}
