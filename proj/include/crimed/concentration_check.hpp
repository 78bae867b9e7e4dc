#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crimed/robust_stats.hpp"

namespace crimed {

// Corruption sources used by the concentration checks. The point masses sit
// at +/-1e9; kAlternating switches between them per sample, exercising the
// time-varying case (the bound does not require identically distributed
// corruption).
enum class ConcentrationAdversary {
  kPointMassHigh,
  kPointMassLow,
  kCauchy,
  kAlternating,
};

const char* adversary_name(ConcentrationAdversary adversary);

struct ConcentrationRow {
  long n = 0;
  double y = 0.0;
  double eps = 0.0;
  std::string adversary;
  double empirical_freq = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  bool pass = false;  // empirical <= bound + 3 * std_error
};

// Frequency, over `reps` batches of n corrupted samples of N(0,1), of the
// larger of the two median deviation events {Med >= delta_min/2 + y} and
// {Med <= -delta_min/2 - y}, against the tail bound 2 exp(-n y^2/s_eps^2).
ConcentrationRow check_median_concentration(long n, double y, Eps eps,
                                            ConcentrationAdversary adversary,
                                            int reps, Rng& rng);

// Frequency of the event
//   kl_eps_gauss(Med - delta_min/2, -delta) > (y-delta)_+ (|y-delta| +
//   delta_min/2)
// for medians of n corrupted samples of N(0,1), against the same tail bound.
ConcentrationRow check_kl_concentration(long n, double y, double delta,
                                        Eps eps,
                                        ConcentrationAdversary adversary,
                                        int reps, Rng& rng);

// The default grid behind the check-concentration subcommand:
// n x y x eps x all four adversaries.
std::vector<ConcentrationRow> run_concentration_grid(
    const std::vector<long>& ns, const std::vector<double>& ys,
    const std::vector<double>& epsilons, int reps, std::uint64_t seed);

}  // namespace crimed
