#include "crimed/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crimed {

namespace {

// Running estimate of an arm's location: median over a sorted buffer, or
// the arithmetic mean for the uncorrupted baseline.
class Estimator {
 public:
  explicit Estimator(bool use_mean) : use_mean_(use_mean) {}

  void add(double observation) {
    if (use_mean_) {
      sum_ += observation;
      ++count_;
    } else {
      acc_.insert(observation);
    }
  }

  long count() const {
    return use_mean_ ? count_ : static_cast<long>(acc_.count());
  }

  double value() const {
    if (use_mean_) {
      if (count_ == 0) throw std::logic_error("estimate of an empty arm");
      return sum_ / static_cast<double>(count_);
    }
    return acc_.median();
  }

 private:
  bool use_mean_;
  MedianAccumulator acc_;
  double sum_ = 0.0;
  long count_ = 0;
};

class IndexPolicy final : public Policy {
 public:
  IndexPolicy(std::string name, std::size_t num_arms, long horizon, Eps eps,
              double sigma, long forced_pulls, bool use_mean)
      : name_(std::move(name)),
        geometry_(eps),
        sigma_(sigma),
        horizon_(horizon),
        forced_pulls_(forced_pulls),
        arms_(num_arms, Estimator(use_mean)),
        pulls_(num_arms, 0) {
    if (num_arms == 0) throw std::invalid_argument("policy needs arms");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  }

  std::size_t select_arm() override {
    const std::size_t num_arms = arms_.size();
    if (steps_ < forced_pulls_ * static_cast<long>(num_arms))
      return static_cast<std::size_t>(steps_ % num_arms);
    return indices().chosen_arm;
  }

  void update(std::size_t arm, double observation) override {
    arms_[arm].add(observation);
    ++pulls_[arm];
    ++steps_;
  }

  const std::string& name() const override { return name_; }
  std::size_t num_arms() const override { return arms_.size(); }
  long pull_count(std::size_t arm) const override { return pulls_[arm]; }
  long steps() const override { return steps_; }
  long required_initial_pulls() const override {
    return forced_pulls_ * static_cast<long>(arms_.size());
  }

  IndexVector indices() const override {
    const std::size_t num_arms = arms_.size();
    IndexVector result;
    result.values.assign(num_arms, 0.0);

    std::size_t best = 0;
    double best_estimate = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < num_arms; ++a) {
      const double estimate = arms_[a].value();
      if (estimate > best_estimate) {
        best_estimate = estimate;
        best = a;
      }
    }
    result.empirical_best = best;

    const double standardized_best = best_estimate / sigma_;
    std::size_t chosen = 0;
    double chosen_value = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < num_arms; ++a) {
      const double log_pulls = std::log(static_cast<double>(pulls_[a]));
      double index = log_pulls;
      if (a != best) {
        const double standardized =
            arms_[a].value() / sigma_ - geometry_.delta_min();
        index += static_cast<double>(pulls_[a]) *
                 geometry_.kl(standardized, standardized_best);
      }
      result.values[a] = index;
      if (index < chosen_value) {
        chosen_value = index;
        chosen = a;
      }
    }
    result.chosen_arm = chosen;
    return result;
  }

 private:
  std::string name_;
  KlGeometry geometry_;
  double sigma_;
  long horizon_;
  long forced_pulls_;
  std::vector<Estimator> arms_;
  std::vector<long> pulls_;
  long steps_ = 0;
};

class MedUcbPolicy final : public Policy {
 public:
  MedUcbPolicy(std::size_t num_arms, long horizon, Eps eps, double sigma,
               double width_multiplier)
      : name_("med_ucb"),
        eps_(eps),
        sigma_(sigma),
        horizon_(horizon),
        width_multiplier_(width_multiplier),
        half_bias_(sigma * delta_min(eps) / 2.0),
        scale_(eps.is_zero() ? sigma : sigma * s_eps(eps)),
        arms_(num_arms, Estimator(false)),
        pulls_(num_arms, 0) {
    if (num_arms == 0) throw std::invalid_argument("policy needs arms");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(width_multiplier > 0.0))
      throw std::invalid_argument("width multiplier must be positive");
  }

  std::size_t select_arm() override {
    const std::size_t num_arms = arms_.size();
    if (steps_ < static_cast<long>(num_arms))
      return static_cast<std::size_t>(steps_ % num_arms);
    return indices().chosen_arm;
  }

  void update(std::size_t arm, double observation) override {
    arms_[arm].add(observation);
    ++pulls_[arm];
    ++steps_;
  }

  const std::string& name() const override { return name_; }
  std::size_t num_arms() const override { return arms_.size(); }
  long pull_count(std::size_t arm) const override { return pulls_[arm]; }
  long steps() const override { return steps_; }
  long required_initial_pulls() const override {
    return static_cast<long>(arms_.size());
  }

  IndexVector indices() const override {
    const std::size_t num_arms = arms_.size();
    const double log_n =
        std::log(std::max(1.0, static_cast<double>(steps_)));
    IndexVector result;
    result.values.assign(num_arms, 0.0);
    std::size_t chosen = 0;
    double chosen_value = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    double best_estimate = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < num_arms; ++a) {
      const double estimate = arms_[a].value();
      const double width =
          scale_ * std::sqrt(width_multiplier_ * log_n /
                             static_cast<double>(pulls_[a]));
      result.values[a] = estimate + half_bias_ + width;
      if (result.values[a] > chosen_value) {
        chosen_value = result.values[a];
        chosen = a;
      }
      if (estimate > best_estimate) {
        best_estimate = estimate;
        best = a;
      }
    }
    result.chosen_arm = chosen;
    result.empirical_best = best;
    return result;
  }

 private:
  std::string name_;
  Eps eps_;
  double sigma_;
  long horizon_;
  double width_multiplier_;
  double half_bias_;
  double scale_;
  std::vector<Estimator> arms_;
  std::vector<long> pulls_;
  long steps_ = 0;
};

void require_positive_eps(Eps eps) {
  if (eps.is_zero())
    throw std::invalid_argument("corrupted policy needs eps > 0");
}

}  // namespace

std::unique_ptr<Policy> make_crimed(std::size_t num_arms, long horizon,
                                    Eps eps, double sigma) {
  require_positive_eps(eps);
  return std::make_unique<IndexPolicy>("crimed", num_arms, horizon, eps,
                                       sigma, n_min(horizon, eps), false);
}

std::unique_ptr<Policy> make_crimed_star(std::size_t num_arms, long horizon,
                                         Eps eps, double sigma) {
  require_positive_eps(eps);
  return std::make_unique<IndexPolicy>("crimed_star", num_arms, horizon, eps,
                                       sigma, 1, false);
}

std::unique_ptr<Policy> make_imed(std::size_t num_arms, long horizon,
                                  double sigma) {
  return std::make_unique<IndexPolicy>("imed", num_arms, horizon, Eps(0.0),
                                       sigma, 1, true);
}

std::unique_ptr<Policy> make_med_ucb(std::size_t num_arms, long horizon,
                                     Eps eps, double sigma,
                                     double width_multiplier) {
  return std::make_unique<MedUcbPolicy>(num_arms, horizon, eps, sigma,
                                        width_multiplier);
}

double misspecified_eps_tilde(Eps eps, double eps_m) {
  const double e = eps.value();
  return e + eps_m - e * eps_m;
}

std::unique_ptr<Policy> make_crimed_misspecified(std::size_t num_arms,
                                                 long horizon, Eps eps,
                                                 double eps_m, double sigma,
                                                 bool aggressive) {
  if (!(eps_m >= 0.0))
    throw std::invalid_argument("misspecification weight must be >= 0");
  const double eps_tilde = misspecified_eps_tilde(eps, eps_m);
  if (eps_tilde >= 0.5)
    throw std::domain_error("inflated corruption level reaches 1/2");
  const Eps inflated(eps_tilde);
  require_positive_eps(inflated);
  const long forced = aggressive ? 1 : n_min(horizon, inflated);
  return std::make_unique<IndexPolicy>(
      aggressive ? "crimed_star_m" : "crimed_m", num_arms, horizon, inflated,
      sigma, forced, false);
}

}  // namespace crimed
