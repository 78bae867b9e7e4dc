#include "crimed/concentration_check.hpp"

#include <algorithm>
#include <cmath>

namespace crimed {

namespace {

constexpr double kPointMass = 1e9;

double corruption_sample(ConcentrationAdversary adversary, long sample_index,
                         Rng& rng) {
  switch (adversary) {
    case ConcentrationAdversary::kPointMassHigh:
      return kPointMass;
    case ConcentrationAdversary::kPointMassLow:
      return -kPointMass;
    case ConcentrationAdversary::kCauchy:
      return cauchy_sample(rng, 0.0, 1.0);
    case ConcentrationAdversary::kAlternating:
      return sample_index % 2 == 0 ? kPointMass : -kPointMass;
  }
  return 0.0;
}

double corrupted_median(long n, Eps eps, ConcentrationAdversary adversary,
                        Rng& rng) {
  MedianAccumulator acc;
  for (long i = 0; i < n; ++i) {
    const bool corrupted = bernoulli_sample(rng, eps.value());
    acc.insert(corrupted ? corruption_sample(adversary, i, rng)
                         : normal_sample(rng));
  }
  return acc.median();
}

ConcentrationRow finish_row(long n, double y, Eps eps,
                            ConcentrationAdversary adversary, int reps,
                            int hits, double bound) {
  ConcentrationRow row;
  row.n = n;
  row.y = y;
  row.eps = eps.value();
  row.adversary = adversary_name(adversary);
  row.empirical_freq = static_cast<double>(hits) / reps;
  row.bound = bound;
  row.std_error = std::sqrt(row.empirical_freq * (1.0 - row.empirical_freq) /
                            reps);
  row.pass = row.empirical_freq <= row.bound + 3.0 * row.std_error;
  return row;
}

}  // namespace

const char* adversary_name(ConcentrationAdversary adversary) {
  switch (adversary) {
    case ConcentrationAdversary::kPointMassHigh:
      return "point_mass_high";
    case ConcentrationAdversary::kPointMassLow:
      return "point_mass_low";
    case ConcentrationAdversary::kCauchy:
      return "cauchy";
    case ConcentrationAdversary::kAlternating:
      return "alternating";
  }
  return "unknown";
}

ConcentrationRow check_median_concentration(long n, double y, Eps eps,
                                            ConcentrationAdversary adversary,
                                            int reps, Rng& rng) {
  const double threshold = delta_min(eps) / 2.0 + y;
  int upper_hits = 0;
  int lower_hits = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const double med = corrupted_median(n, eps, adversary, rng);
    if (med >= threshold) ++upper_hits;
    if (med <= -threshold) ++lower_hits;
  }
  const int hits = std::max(upper_hits, lower_hits);
  return finish_row(n, y, eps, adversary, reps, hits,
                    median_concentration_bound(n, y, eps));
}

ConcentrationRow check_kl_concentration(long n, double y, double delta,
                                        Eps eps,
                                        ConcentrationAdversary adversary,
                                        int reps, Rng& rng) {
  const double half_gap = delta_min(eps) / 2.0;
  const double slack = std::max(y - delta, 0.0) *
                       (std::fabs(y - delta) + half_gap);
  int hits = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const double med = corrupted_median(n, eps, adversary, rng);
    const double kl = kl_eps_gauss(med - half_gap, -delta, eps);
    if (kl > slack) ++hits;
  }
  return finish_row(n, y, eps, adversary, reps, hits,
                    median_concentration_bound(n, y, eps));
}

std::vector<ConcentrationRow> run_concentration_grid(
    const std::vector<long>& ns, const std::vector<double>& ys,
    const std::vector<double>& epsilons, int reps, std::uint64_t seed) {
  const ConcentrationAdversary adversaries[] = {
      ConcentrationAdversary::kPointMassHigh,
      ConcentrationAdversary::kPointMassLow,
      ConcentrationAdversary::kCauchy,
      ConcentrationAdversary::kAlternating,
  };
  std::vector<ConcentrationRow> rows;
  std::uint64_t cell = 0;
  for (long n : ns)
    for (double y : ys)
      for (double eps_value : epsilons)
        for (ConcentrationAdversary adversary : adversaries) {
          Rng rng = make_rng(derive_seed(seed, cell++));
          rows.push_back(check_median_concentration(n, y, Eps(eps_value),
                                                    adversary, reps, rng));
        }
  return rows;
}

}  // namespace crimed
