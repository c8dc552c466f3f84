#pragma once

#include <string>
#include <vector>

#include "qrubin/qsymbols.hpp"

namespace qrubin {

struct CheckResult {
  std::string name;
  double value;      // observed maximum residual
  double tolerance;
  bool passed;
};

/// Suites: symbols, ops, int, fun, ivp, wronskian, constcoef, all.
std::vector<CheckResult> run_verify_suite(const std::string& suite, const QContext& ctx);

const std::vector<std::string>& verify_suite_names();

/// Ring index beyond which q^k drops below 1e-17, i.e. a window deep enough for
/// Jackson sums over O(1) data to pass their tail test.
int deep_k_max(double q);

/// Innermost ring with (1-q)|x| >= 1e-6: below it a difference quotient of O(1)
/// data carries rounding noise above 1e-9.
int resolvable_k_max(double q);

}  // namespace qrubin
