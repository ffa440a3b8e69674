#include "trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace projdyn::cli {

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string csv_header(Index dim) {
  std::string header = "t,tau";
  for (Index i = 0; i < dim; ++i) header += ",q_" + std::to_string(i);
  for (Index i = 0; i < dim; ++i) header += ",p_" + std::to_string(i);
  header += ",h,lambda,energy,eta";
  return header;
}

void append_optional(std::string& row, const std::vector<Real>* channel,
                     std::size_t i) {
  row += ',';
  if (channel) row += format_real((*channel)[i]);
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  const Index dim = traj.dim();
  std::string out = csv_header(dim) + "\n";

  auto channel_ptr = [&traj](const char* name) -> const std::vector<Real>* {
    return traj.has_channel(name) ? &traj.channel(name) : nullptr;
  };
  const std::vector<Real>* tau = channel_ptr("tau");
  const std::vector<Real>* h = channel_ptr("h");
  const std::vector<Real>* lambda = channel_ptr("lambda");
  const std::vector<Real>* energy = channel_ptr("energy");
  const std::vector<Real>* eta = channel_ptr("eta");

  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhaseState& s = traj.samples[i];
    std::string row = format_real(s.t);
    append_optional(row, tau, i);
    for (Index k = 0; k < dim; ++k) row += ',' + format_real(s.q(k));
    for (Index k = 0; k < dim; ++k) row += ',' + format_real(s.p(k));
    append_optional(row, h, i);
    append_optional(row, lambda, i);
    append_optional(row, energy, i);
    append_optional(row, eta, i);
    out += row;
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const ReparamTrajectory& traj, const Screen& screen) {
  const Index dim = traj.samples.empty() ? 0 : traj.samples.front().q.size();
  std::string out = csv_header(dim) + "\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhaseState& s = traj.samples[i];
    std::string row = format_real(traj.origin_times[i]);
    row += ',' + format_real(s.t);
    for (Index k = 0; k < dim; ++k) row += ',' + format_real(s.q(k));
    for (Index k = 0; k < dim; ++k) row += ',' + format_real(s.p(k));
    row += ',' + format_real(screen.h(s.q));
    row += ",,,";  // lambda, energy, eta are not defined for a projection
    out += row;
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trajectory file is empty: " + path.string());
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 7 || header[0] != "t" || header[1] != "tau") {
    throw std::runtime_error("unrecognized trajectory header in " + path.string());
  }
  const Index dim = static_cast<Index>((header.size() - 6) / 2);
  if (static_cast<Index>(header.size()) != 2 * dim + 6) {
    throw std::runtime_error("malformed trajectory header in " + path.string());
  }

  Trajectory traj;
  struct OptColumn {
    const char* name;
    std::size_t index;
    std::vector<Real> values;
    bool present = true;
  };
  std::vector<OptColumn> optional = {
      {"tau", 1, {}, true},
      {"h", static_cast<std::size_t>(2 * dim + 2), {}, true},
      {"lambda", static_cast<std::size_t>(2 * dim + 3), {}, true},
      {"energy", static_cast<std::size_t>(2 * dim + 4), {}, true},
      {"eta", static_cast<std::size_t>(2 * dim + 5), {}, true},
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("malformed trajectory row in " + path.string());
    }
    PhaseState s;
    s.t = std::strtod(cells[0].c_str(), nullptr);
    s.q = Vec(dim);
    s.p = Vec(dim);
    for (Index k = 0; k < dim; ++k) {
      s.q(k) = std::strtod(cells[2 + k].c_str(), nullptr);
      s.p(k) = std::strtod(cells[2 + dim + k].c_str(), nullptr);
    }
    traj.samples.push_back(std::move(s));
    for (OptColumn& col : optional) {
      if (cells[col.index].empty()) {
        col.present = false;
      } else {
        col.values.push_back(std::strtod(cells[col.index].c_str(), nullptr));
      }
    }
  }
  for (OptColumn& col : optional) {
    if (col.present && col.values.size() == traj.samples.size()) {
      traj.channels[col.name] = std::move(col.values);
    }
  }
  traj.description = "file(" + path.filename().string() + ")";
  return traj;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace projdyn::cli
