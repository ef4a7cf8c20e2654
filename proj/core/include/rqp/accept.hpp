#pragma once

#include <rqp/qp.hpp>

#include <string>
#include <vector>

namespace rqp::accept {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Brute-force QP oracle: enumerate active subsets, solve the
// equality-constrained KKT system for each, and keep the primal/dual
// feasible candidate. Independent of the active-set solver path.
QpSolution solve_qp_bruteforce(const QpProblem& p);

// Suites: "1dof" (closed-loop criteria 1-5 and 11), "qp-oracle" (6),
// "analysis" (7, 8), "kinematics" (9), "planar" (10), "all".
// Throws std::invalid_argument for an unknown suite.
std::vector<CriterionResult> run_suite(const std::string& suite);

std::vector<std::string> suite_names();

}  // namespace rqp::accept
