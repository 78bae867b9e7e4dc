#include "crimed/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crimed/normal.hpp"

namespace crimed {

void MedianAccumulator::insert(double value) {
  buffer_.insert(std::upper_bound(buffer_.begin(), buffer_.end(), value),
                 value);
}

double MedianAccumulator::median() const {
  if (buffer_.empty())
    throw std::logic_error("median of an empty accumulator");
  const std::size_t n = buffer_.size();
  if (n % 2 == 1) return buffer_[(n - 1) / 2];
  return 0.5 * (buffer_[n / 2 - 1] + buffer_[n / 2]);
}

double s_eps(Eps eps) {
  const double e = eps.value();
  if (e == 0.0) throw std::domain_error("s_eps: undefined at eps = 0");
  const double numerator =
      std::sqrt((e / 2.0) / std::log(1.0 / (1.0 - 2.0 * e))) +
      std::sqrt((1.0 - 2.0 * e) / (4.0 * std::log((1.0 - e) / e)));
  const double denominator =
      (1.0 - e) * norm_pdf(delta_min(eps) / 2.0 + 1.0);
  return numerator / denominator;
}

long n_min(long horizon, Eps eps, NMinVariant variant) {
  if (horizon < 3) throw std::domain_error("n_min: horizon must be >= 3");
  const double log_t = std::log(static_cast<double>(horizon));
  const double iterated = std::log(1.0 + std::log(1.0 + log_t));
  const double denominator = std::log(1.0 + std::pow(log_t, 0.99));
  const double s = s_eps(eps);
  const double numerator_factor =
      variant == NMinVariant::kSquaredIterLog ? iterated * iterated : iterated;
  const double value = 2.0 * log_t * numerator_factor * s * s / denominator;
  return std::max(1L, static_cast<long>(std::ceil(value)));
}

double median_concentration_bound(long n, double y, Eps eps) {
  if (n < 1) throw std::domain_error("median_concentration_bound: n >= 1");
  if (!(y >= 0.0) || !(y <= 1.0))
    throw std::domain_error("median_concentration_bound: y must be in [0,1]");
  const double s = s_eps(eps);
  const double raw =
      2.0 * std::exp(-static_cast<double>(n) * y * y / (s * s));
  return std::min(1.0, raw);
}

double median_bias(Eps eps) {
  if (eps.is_zero()) return 0.0;
  return norm_cdf_inv(1.0 / (2.0 * (1.0 - eps.value())));
}

ConcentrationParams make_concentration_params(long horizon, Eps eps,
                                              NMinVariant variant) {
  ConcentrationParams params;
  params.eps = eps;
  params.s_eps = s_eps(eps);
  params.horizon = horizon;
  params.n_min = n_min(horizon, eps, variant);
  return params;
}

}  // namespace crimed
