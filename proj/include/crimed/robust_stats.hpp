#pragma once

#include <cstddef>
#include <vector>

#include "crimed/corrupted_kl.hpp"

namespace crimed {

// Streaming median over a sorted insert buffer. Single-writer; the buffer
// doubles as the empirical distribution for diagnostics. Even counts use the
// midpoint of the two central order statistics.
class MedianAccumulator {
 public:
  void insert(double value);
  double median() const;  // throws std::logic_error when empty
  std::size_t count() const { return buffer_.size(); }
  bool empty() const { return buffer_.empty(); }
  const std::vector<double>& sorted() const { return buffer_; }

 private:
  std::vector<double> buffer_;
};

// Variance proxy of the empirical median under corruption:
//   [ sqrt((eps/2)/log(1/(1-2 eps))) + sqrt((1-2 eps)/(4 log((1-eps)/eps))) ]
//   / ((1-eps) phi(delta_min/2 + 1)).
// Tends to 1/(2 phi(1)) as eps -> 0 and diverges as eps -> 1/2.
// Throws std::domain_error at eps = 0 (baselines use the classical
// sub-Gaussian path instead).
double s_eps(Eps eps);

enum class NMinVariant {
  kSquaredIterLog,  // squared iterated log in the numerator (default)
  kSingleIterLog,   // first power
};

// Forced-exploration pulls per arm before index play:
//   ceil( 2 log T log(1+log(1+log T))^2 s_eps^2 / log(1+(log T)^0.99) ),
// with the iterated-log power selected by the variant.
// Requires T >= 3 so that the iterated logarithms are positive.
long n_min(long horizon, Eps eps,
           NMinVariant variant = NMinVariant::kSquaredIterLog);

// Tail bound on P(Med - m >= delta_min/2 + y) for n corrupted samples:
// min(1, 2 exp(-n y^2 / s_eps^2)). Valid for y in [0, 1].
double median_concentration_bound(long n, double y, Eps eps);

// Minimax bias of the median over the corruption neighbourhood of a standard
// Gaussian: Phi^{-1}(1/(2(1-eps))) = delta_min/2.
double median_bias(Eps eps);

struct ConcentrationParams {
  Eps eps{0.0};
  double s_eps = 0.0;
  long horizon = 0;
  long n_min = 0;
};

ConcentrationParams make_concentration_params(
    long horizon, Eps eps, NMinVariant variant = NMinVariant::kSquaredIterLog);

}  // namespace crimed
