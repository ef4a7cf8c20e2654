// Runs every acceptance criterion and prints one verdict line per criterion.
#include <rqp/accept.hpp>

#include <cstdio>

int main() {
  bool all_pass = true;
  for (const auto& r : rqp::accept::run_suite("all")) {
    std::printf("[%s] criterion %2d: %-40s %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return all_pass ? 0 : 1;
}
