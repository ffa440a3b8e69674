// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion.

#include <cstdio>
#include <vector>

#include "projdyn/checks.hpp"

using namespace projdyn;

int main() {
  const CheckOptions opts;  // seed 1, rtol 1e-10, honest degree −3

  struct Criterion {
    const char* title;
    std::vector<CheckResult> (*run)(const CheckOptions&);
  };
  const Criterion criteria[] = {
      {"projection equivalence on the seeded dim-3 instance",
       check_prop1_equivalence},
      {"closed-form circle oracle (constrained run and projected line)",
       check_closed_form_circle},
      {"multiplier equals -2E for gradient fields on unit spheres", check_prop2},
      {"Joachimsthal constant (conservation and 2D hand value)",
       check_joachimsthal},
      {"Jacobi -> intermediate -> Neumann correspondence chain",
       check_correspondence},
      {"sl2 bracket identities and degree counterexample", check_sl2},
      {"homogeneity/Euler certification of all field constructors",
       check_homogeneity_euler},
      {"projective-extension round trip on the affine chart",
       check_projective_extension},
      {"degree sensitivity negative control", check_degree_sensitivity},
  };

  int criterion_failures = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    std::vector<CheckResult> results;
    try {
      results = criterion.run(opts);
    } catch (const std::exception& e) {
      ++criterion_failures;
      std::printf("[FAIL] criterion %d: %s  (exception: %s)\n", index,
                  criterion.title, e.what());
      continue;
    }

    bool pass = true;
    for (const CheckResult& r : results) pass = pass && r.pass;
    if (!pass) ++criterion_failures;

    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", index,
                criterion.title);
    for (const CheckResult& r : results) {
      std::printf("         %-42s %11.4e %s %g%s\n", r.name.c_str(), r.residual,
                  r.lower_bound ? ">=" : "<=", r.tolerance,
                  r.pass ? "" : "  ** FAILED **");
    }
  }

  if (criterion_failures == 0) {
    std::printf("acceptance: all %d criteria passed\n",
                static_cast<int>(std::size(criteria)));
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", criterion_failures);
  return 1;
}
