#pragma once

#include "config.hpp"

namespace projdyn::cli {

/// Exit-code contract: 0 pass, 1 verification failure, 2 config error,
/// 3 runtime domain error.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kConfigError = 2,
  kDomainError = 3,
};

int cmd_simulate(const std::filesystem::path& config_path, const Overrides& overrides);
int cmd_project(const std::filesystem::path& config_path, const Overrides& overrides);
int cmd_verify(const std::filesystem::path& config_path, const Overrides& overrides);
int cmd_correspond(const std::filesystem::path& config_path, const Overrides& overrides);

}  // namespace projdyn::cli
