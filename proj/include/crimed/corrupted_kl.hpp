#pragma once

#include <cstdint>
#include <stdexcept>

#include "crimed/rng.hpp"

namespace crimed {

// Corruption probability. Valid range is [0, 1/2); zero is admitted so that
// uncorrupted baselines can share the same code paths.
class Eps {
 public:
  explicit Eps(double value) : value_(value) {
    if (!(value >= 0.0) || !(value < 0.5))
      throw std::domain_error("corruption level must lie in [0, 0.5)");
  }
  double value() const { return value_; }
  bool is_zero() const { return value_ == 0.0; }

  friend bool operator==(Eps a, Eps b) { return a.value_ == b.value_; }

 private:
  double value_;
};

// Minimum mean gap below which the corruption neighbourhoods of two
// unit-variance Gaussians intersect: 2 * Phi^{-1}(1 / (2(1-eps))).
// Zero exactly at eps = 0, diverges as eps -> 1/2.
double delta_min(Eps eps);

// Residual tolerance the c solver works to.
inline constexpr double kSolverTolerance = 1e-12;

// Normalisation constant of the optimal corruption pair for a mean gap
// delta, together with the support boundaries Delta_+/- it induces.
struct HuberPairSolution {
  double delta = 0.0;        // y - x, in unit-variance units
  double c = 1.0;            // in (eps/(1-eps), 1]
  double delta_plus = 0.0;   // delta + (2/delta) log(1/c)
  double delta_minus = 0.0;  // delta - (2/delta) log(1/c)
};

// Solves 1/(1-eps) = c Phi(Delta_-/2) + Phi(Delta_+/2) for c on the bracket
// (eps/(1-eps), 1]. The map is strictly increasing in c with derivative
// Phi(Delta_-/2), so bisection steps are refined with Newton steps.
// Residual tolerance 1e-12. Results are memoised per thread, keyed by
// (delta quantised to 1e-9, eps).
// Throws std::domain_error when delta < delta_min(eps) or eps == 0, and
// std::runtime_error on non-convergence.
HuberPairSolution solve_c(double delta, Eps eps);

// The corrupted divergence between N(x,1) and N(y,1) with both corruption
// distributions optimised out. Zero for y - x <= delta_min(eps);
// otherwise the closed form
//   (1-eps) [ (1-c) Phi(D-/2) log(1/c)
//             + (D^2/2)(Phi(D+/2) - Phi(D-/2))
//             - D (phi(D-/2) - phi(D+/2)) ],  D = y - x.
// At eps = 0 this is the classical Gaussian KL, D^2/2.
double kl_eps_gauss(double x, double y, Eps eps);

// d/dDelta kl_eps_gauss(x, x+Delta): zero on [0, delta_min], then
// (1-eps) * Delta * (Phi(Delta_+/2) - Phi(Delta_-/2)). For eps = 0 this is
// simply Delta.
double kl_eps_gauss_derivative(double delta, Eps eps);

// Upper bound on kl_eps_gauss(m_a, m_star) - kl_eps_gauss(m_b, m_star):
// (1-eps) * (m_b - m_a)_+ * max(m_star - m_a, m_star - m_b).
// Requires both gaps to exceed delta_min(eps).
double kl_mean_value_gap_bound(double m_a, double m_b, double m_star, Eps eps);

// The optimally corrupted pair of densities for means x < y:
//   p1 = d(N(x,1) (x)_eps H1),  p2 = d(N(y,1) (x)_eps H2),
// with H1 supported on A_c = [x + Delta_+/2, inf) and H2 on
// D_c = (-inf, x + Delta_-/2].
struct CorruptedDensityPair {
  double x = 0.0;
  double y = 0.0;
  Eps eps{0.0};
  HuberPairSolution solution;

  double h1_support_boundary() const;  // x + Delta_+/2
  double h2_support_boundary() const;  // x + Delta_-/2

  double left_density(double t) const;   // p1(t)
  double right_density(double t) const;  // p2(t)

  // Densities of the implicit corruption distributions themselves:
  // h1(t) = ((1-eps)/eps)(c phi(t-y) - phi(t-x)) on A_c, zero elsewhere,
  // and the mirror-image h2 on D_c.
  double h1_density(double t) const;
  double h2_density(double t) const;
};

// Requires y > x + delta_min(eps); throws std::domain_error otherwise.
CorruptedDensityPair huber_pair_densities(double x, double y, Eps eps);

enum class CorruptionSide { kLeft, kRight };

// Draws a sample from H1 (kLeft) or H2 (kRight) by rejection against a
// truncated-Gaussian proposal. Throws std::runtime_error if the rejection
// loop exceeds its iteration cap.
double sample_huber_corruption(const CorruptedDensityPair& pair,
                               CorruptionSide side, Rng& rng);

// Convenience handle bundling eps with its cached gap geometry. All methods
// are pure; the underlying solve_c memo is per-thread, so one KlGeometry may
// be shared freely across simulation workers.
class KlGeometry {
 public:
  explicit KlGeometry(Eps eps) : eps_(eps), delta_min_(crimed::delta_min(eps)) {}

  Eps eps() const { return eps_; }
  double delta_min() const { return delta_min_; }
  double solver_tolerance() const { return kSolverTolerance; }

  double kl(double x, double y) const { return kl_eps_gauss(x, y, eps_); }
  double derivative(double delta) const {
    return kl_eps_gauss_derivative(delta, eps_);
  }

 private:
  Eps eps_;
  double delta_min_;
};

}  // namespace crimed
