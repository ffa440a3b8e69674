#pragma once

#include <cstdint>

#include "projdyn/problems.hpp"

namespace projdyn {

/// One named verification check. `lower_bound` marks negative controls,
/// which pass when the residual is at least the tolerance.
struct CheckResult {
  std::string name;
  Real residual = 0;
  Real tolerance = 0;
  bool lower_bound = false;
  bool pass = false;
  std::string note;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  Real rtol = 1e-10;
  /// Degree of the field wired into the projection-equivalence check.
  /// −3 is the honest run; −2 substitutes the counterexample field and the
  /// check is expected to fail.
  Real prop1_field_degree = -3;
};

/// The seeded dim-3 instance the headline checks run on: random SPD (G, A)
/// and a free-run start on the G-sphere with a generic (non-tangent)
/// velocity.
struct Prop1Instance {
  EllipsoidData data;
  PhaseState free_start;
};

Prop1Instance make_prop1_instance(std::uint64_t seed);

std::vector<CheckResult> check_prop1_equivalence(const CheckOptions& opts);
std::vector<CheckResult> check_closed_form_circle(const CheckOptions& opts);
std::vector<CheckResult> check_prop2(const CheckOptions& opts);
std::vector<CheckResult> check_joachimsthal(const CheckOptions& opts);
std::vector<CheckResult> check_correspondence(const CheckOptions& opts);
std::vector<CheckResult> check_sl2(const CheckOptions& opts);
std::vector<CheckResult> check_homogeneity_euler(const CheckOptions& opts);
std::vector<CheckResult> check_projective_extension(const CheckOptions& opts);
std::vector<CheckResult> check_degree_sensitivity(const CheckOptions& opts);

/// Every suite above, in order.
std::vector<CheckResult> run_verification_suite(const CheckOptions& opts);

}  // namespace projdyn
