#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace projdyn {

using Real = double;
using Vec = Eigen::VectorXd;       // points and velocities of V
using Covec = Eigen::RowVectorXd;  // elements of V*
using Mat = Eigen::MatrixXd;       // linear operators on V
using Index = Eigen::Index;

/// A state left the mathematical domain of an operation: exit from the
/// semi-cone of a force field, an off-screen point, a non-positive form.
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
  DomainError(const std::string& what, Real time)
      : std::domain_error(what), time_(time) {}

  /// Time at which an integration left the domain, when known.
  std::optional<Real> time() const { return time_; }

private:
  std::optional<Real> time_;
};

class NotSpdError : public DomainError {
public:
  using DomainError::DomainError;
};

/// The reaction direction became numerically tangent to the screen, so the
/// constraint multiplier is no longer determined.
class TransversalityError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Step budget exhausted or step size underflow.
class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require_dim(Index expected, Index got, const char* where) {
  if (expected != got) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " +
                                std::to_string(got) + ")");
  }
}

}  // namespace projdyn
