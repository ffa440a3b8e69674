#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

#include "projdyn/checks.hpp"
#include "projdyn/problems.hpp"

namespace projdyn::cli {

using nlohmann::json;

/// Configuration problem reported to the user; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Options passed on the command line that override the config document.
struct Overrides {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<Real> rtol;
};

struct ScreenSpec {
  std::string kind;  // "quadric" | "linear" | "G" | "A" | "B"
  std::optional<Mat> C;
  std::optional<Covec> ell;
};

struct FieldSpec {
  std::string kind;  // "zero"|"braden"|"kepler"|"kepler_projective"|"inverse_square"|"linear"
  Index dim = 0;
  Real strength = 1;
  std::optional<Mat> matrix;
};

struct RunConfig {
  std::string problem;  // "free"|"constrained"|"neumann"|"braden"|"jacobi"
  Index dimension = 0;
  std::optional<Mat> G;
  std::optional<Mat> A;
  bool random_G = false;
  bool random_A = false;
  Real nu = 0;
  Real eta = 1;
  std::optional<FieldSpec> field;
  std::optional<ScreenSpec> screen;
  std::string reaction = "central";
  std::optional<Vec> q0;
  std::optional<Vec> p0;
  bool random_initial = false;
  Real t_end = 0;
  IntegratorOptions integrator;
  std::uint64_t seed = 1;

  // verify-specific knobs
  Real prop1_field_degree = -3;

  // project-specific
  std::string source;
  std::optional<json> reference;

  std::map<std::string, std::string> output;
};

/// Parse and validate a config document. Throws ConfigError on any problem.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// A fully assembled run: the pieces cmd_simulate needs.
struct AssembledRun {
  bool constrained = false;
  ForceField field;
  std::shared_ptr<const Screen> screen;  // may be null for free runs
  ConstrainedSystem system;              // valid when constrained
  PhaseState start;
  std::optional<EllipsoidData> data;
};

/// Resolve matrices, field, screen, and initial data from the config,
/// applying the seed for "random" entries. Initial states of constrained
/// problems are projected onto the screen.
AssembledRun assemble_run(const RunConfig& config);

/// The (G, A) pair of the config, drawing seeded random SPD matrices where
/// requested; nullopt when the config names neither matrix.
std::optional<EllipsoidData> resolve_ellipsoid(const RunConfig& config);

std::shared_ptr<const Screen> make_screen(const ScreenSpec& spec,
                                          const std::optional<EllipsoidData>& data);

}  // namespace projdyn::cli
