#pragma once

#include <memory>
#include <string>

#include "projdyn/geometry.hpp"

namespace projdyn {

/// A screen is the hypersurface {h(q)=1} of a positively 1-homogeneous
/// function h defined on an open semi-cone. Both shipped kinds are analytic;
/// derivatives are exact formulas, not finite differences. Euler's identity
/// Dh(q)[q] = h(q) makes every screen transverse to the rays on its cone.
class Screen {
public:
  virtual ~Screen() = default;

  virtual Index dim() const = 0;
  virtual bool in_domain(const Vec& q) const = 0;

  /// h(q); throws DomainError outside the cone.
  virtual Real h(const Vec& q) const = 0;
  /// Derivative Dh(q) as a covector.
  virtual Covec dh(const Vec& q) const = 0;
  /// Second derivative as a symmetric matrix; D2h(q)(u,v) = uᵀ d2h(q) v.
  virtual Mat d2h(const Vec& q) const = 0;

  /// Identifies the screen (kind + coefficients) for trajectory metadata.
  virtual std::string label() const = 0;

protected:
  void check_domain(const Vec& q) const;
};

/// h(q) = ℓ(q) on the half-space ℓ(q) > 0; the affine-chart screen.
class LinearScreen final : public Screen {
public:
  explicit LinearScreen(const Covec& ell);

  Index dim() const override { return ell_.size(); }
  bool in_domain(const Vec& q) const override;
  Real h(const Vec& q) const override;
  Covec dh(const Vec& q) const override;
  Mat d2h(const Vec& q) const override;
  std::string label() const override;

  const Covec& ell() const { return ell_; }

private:
  Covec ell_;
};

/// h(q) = √⟨Cq,q⟩ for SPD C; the unit sphere of the form C.
class QuadricScreen final : public Screen {
public:
  explicit QuadricScreen(const SymForm& C);

  Index dim() const override { return C_.dim(); }
  bool in_domain(const Vec& q) const override;
  Real h(const Vec& q) const override;
  Covec dh(const Vec& q) const override;
  Mat d2h(const Vec& q) const override;
  std::string label() const override;

  const SymForm& form() const { return C_; }

private:
  SymForm C_;
};

/// Central projection q ↦ q/h(q) onto the screen.
Vec project_point(const Screen& screen, const Vec& q);

/// For q on the screen, remove the radial part of v:
/// w = v − Dh(q)[v]·q, so Dh(q)[w] = 0.
Vec tangent_project(const Screen& screen, const Vec& q, const Vec& v);

struct ScreenResiduals {
  Real euler;  // |Dh(q)[q] − h(q)|
  Real dh;     // max-norm gap between analytic and central-difference Dh
  Real d2h;    // |D2h(q)(v,v) − second central difference of h along v|
};

/// Certify the screen's homogeneity and derivatives at one point.
ScreenResiduals screen_residuals(const Screen& screen, const Vec& q, const Vec& v,
                                 Real fd_step);

}  // namespace projdyn
