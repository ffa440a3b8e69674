#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "projdyn/projective.hpp"

namespace projdyn::cli {

/// Render a double with 17 significant digits (round-trip exact).
std::string format_real(Real value);

/// CSV with header t,tau,q_0..q_{n-1},p_0..p_{n-1},h,lambda,energy,eta.
/// Channels the trajectory does not carry are emitted as empty columns.
std::string trajectory_csv(const Trajectory& traj);

/// Projected trajectories are keyed by tau; the t column keeps the source
/// time and h is recomputed on the target screen.
std::string trajectory_csv(const ReparamTrajectory& traj, const Screen& screen);

/// Parse a trajectory CSV back; non-empty optional columns become channels.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Write-then-rename so partially written outputs are never observed.
void write_file_atomic(const std::filesystem::path& path, const std::string& body);

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace projdyn::cli
