#pragma once

#include <memory>
#include <string>
#include <vector>

#include "crimed/robust_stats.hpp"

namespace crimed {

// Per-arm index values at one decision point, for diagnostics and tests.
struct IndexVector {
  std::vector<double> values;
  std::size_t chosen_arm = 0;      // argmin (argmax for UCB-style policies)
  std::size_t empirical_best = 0;  // arm with the largest estimate
};

// Sequential arm-selection policy. Single-owner: one simulation run drives
// select_arm / update strictly in alternation. Policies only ever see the
// (possibly corrupted) observations.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::size_t select_arm() = 0;
  virtual void update(std::size_t arm, double observation) = 0;

  virtual const std::string& name() const = 0;
  virtual std::size_t num_arms() const = 0;
  virtual long pull_count(std::size_t arm) const = 0;
  virtual long steps() const = 0;

  // Pulls consumed by forced initialisation (K * n_min for index policies).
  virtual long required_initial_pulls() const = 0;

  // Index values the next select_arm decision would use. Only meaningful
  // once every arm has been pulled.
  virtual IndexVector indices() const = 0;
};

// The index policy family. Indices are computed on estimates standardised
// by sigma:
//   best arm:    I = log N
//   other arms:  I = N * kl_eps_gauss(est/sigma - delta_min, best/sigma)
//                    + log N
// with the estimate being the running median (or the running mean for the
// uncorrupted mean-based variant). Ties in argmin and in the empirical best
// break toward the lowest arm index.
std::unique_ptr<Policy> make_crimed(std::size_t num_arms, long horizon,
                                    Eps eps, double sigma);
std::unique_ptr<Policy> make_crimed_star(std::size_t num_arms, long horizon,
                                         Eps eps, double sigma);

// eps = 0, mean estimates, n_min = 1. Index reduces to
// N (Mean* - Mean_a)^2 / (2 sigma^2) + log N.
std::unique_ptr<Policy> make_imed(std::size_t num_arms, long horizon,
                                  double sigma);

// Median-based UCB baseline, a documented stand-in for robust UCB
// algorithms from the literature:
//   U_a = Med_a + sigma * delta_min/2 + sigma * s_eps sqrt(alpha log n / N_a)
// (classical sub-Gaussian width when eps = 0). Selects argmax.
std::unique_ptr<Policy> make_med_ucb(std::size_t num_arms, long horizon,
                                     Eps eps, double sigma,
                                     double width_multiplier = 2.0);

// CRIMED with the corruption level inflated to absorb misspecification:
// eps_tilde = eps + eps_m - eps * eps_m, used everywhere (index geometry,
// s_eps, n_min). Throws std::domain_error when eps_tilde >= 1/2.
std::unique_ptr<Policy> make_crimed_misspecified(std::size_t num_arms,
                                                 long horizon, Eps eps,
                                                 double eps_m, double sigma,
                                                 bool aggressive = false);

double misspecified_eps_tilde(Eps eps, double eps_m);

}  // namespace crimed
